#include "dj/dirac.hpp"

#include "dj/error.hpp"

#include <sstream>

namespace dj {

namespace {

void validate_loci(const ChartPtr& chart, const std::vector<RatPoint>& loci) {
    for (const RatPoint& q : loci) {
        if (q.empty()) fail(Errc::ValidationError, "empty locus binding");
        for (const auto& [name, val] : q) {
            (void)val;
            if (!chart->has_coord(name))
                fail(Errc::ValidationError, "locus binds unknown coordinate " + name);
        }
        if (!chart->point_in_domain(q))
            fail(Errc::ValidationError, "locus lies outside the chart domain");
    }
}

// Form block transposed: rows = chart coordinates, columns = frame sections.
Mat xi_columns(const StructureFrame& fr) {
    size_t n = fr.chart()->dim();
    Mat a(fr.chart(), n, fr.size());
    for (size_t j = 0; j < fr.size(); ++j)
        for (size_t i = 0; i < n; ++i) a.at(i, j) = fr.at(j).xi.coeff({(uint32_t)i});
    return a;
}

KVector combine_vectors(const StructureFrame& fr, const std::vector<Scalar>& c) {
    KVector X = KVector::zero(fr.chart(), 1);
    for (size_t j = 0; j < fr.size(); ++j) X = X + fr.at(j).X.scaled(c[j]);
    return X;
}

} // namespace

DiracStructure make_dirac(StructureFrame frame, std::vector<RatPoint> loci) {
    if (frame.extended())
        fail(Errc::KindMismatch, "a Dirac structure carries plain sections");
    validate_loci(frame.chart(), loci);
    return DiracStructure{std::move(frame), std::move(loci)};
}

DiracStructure graph_two_form(const KForm& w, std::vector<RatPoint> loci) {
    if (w.degree() != 2) fail(Errc::DegreeOverflow, "graph_two_form expects a 2-form");
    const ChartPtr& c = w.chart();
    std::vector<Section> secs;
    for (uint32_t i = 0; i < c->dim(); ++i) {
        KVector v = KVector::basis(c, c->coord(i).name);
        secs.push_back(cou_section(v, contract(v, w)));
    }
    return make_dirac(StructureFrame::validate(secs), std::move(loci));
}

DiracStructure graph_bivector(const KVector& lam, std::vector<RatPoint> loci) {
    if (lam.degree() != 2) fail(Errc::DegreeOverflow, "graph_bivector expects a bivector");
    const ChartPtr& c = lam.chart();
    std::vector<Section> secs;
    for (uint32_t i = 0; i < c->dim(); ++i) {
        KForm dxi = KForm::d_coord(c, c->coord(i).name);
        secs.push_back(cou_section(lambda_tilde(lam, dxi), dxi));
    }
    return make_dirac(StructureFrame::validate(secs), std::move(loci));
}

std::optional<IntegrabilityWitness> integrability_witness(const StructureFrame& fr) {
    for (size_t i = 0; i < fr.size(); ++i)
        for (size_t j = i + 1; j < fr.size(); ++j) {
            Section br = fr.extended() ? ext_courant_bracket(fr.at(i), fr.at(j))
                                       : courant_bracket(fr.at(i), fr.at(j));
            for (size_t k = 0; k < fr.size(); ++k) {
                Scalar v = pairing(br, fr.at(k), PairSign::Plus);
                if (!v.is_zero()) return IntegrabilityWitness{i, j, k, v};
            }
        }
    return std::nullopt;
}

std::vector<std::vector<Scalar>> char_dist_at_point(const DiracStructure& S, const RatPoint& p) {
    const ChartPtr& chart = S.frame.chart();
    for (uint32_t i = 0; i < chart->dim(); ++i)
        if (!p.count(chart->coord(i).name))
            fail(Errc::PointOutsideDomain,
                 "point must bind every coordinate; missing " + chart->coord(i).name);
    for (const auto& [name, val] : p) {
        (void)val;
        if (!chart->has_coord(name))
            fail(Errc::PointOutsideDomain, "point binds unknown coordinate " + name);
    }
    if (!chart->point_in_domain(p)) fail(Errc::PointOutsideDomain, point_str(p));
    ChartPtr fiber = chart->sliced(p);

    size_t n = chart->dim(), k = S.frame.size();
    Mat a(fiber, n, k);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < n; ++i)
            a.at(i, j) = restrict_at(S.frame.at(j).xi.coeff({(uint32_t)i}), p, fiber);
    std::vector<std::vector<Scalar>> out;
    for (const auto& c : nullspace(a)) {
        std::vector<Scalar> v(n, Scalar::zero(fiber));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k; ++j)
                v[i] = v[i] + c[j] * restrict_at(S.frame.at(j).X.coeff({(uint32_t)i}), p, fiber);
        out.push_back(std::move(v));
    }
    return out;
}

AdmissibleResult admissible_solve(const DiracStructure& S, const Scalar& f) {
    const ChartPtr& chart = S.frame.chart();
    require_same_chart(chart, f.chart(), "admissible_solve");
    KForm df = d(f);
    std::vector<Scalar> rhs;
    for (uint32_t i = 0; i < chart->dim(); ++i) rhs.push_back(df.coeff({i}));
    auto c = solve(xi_columns(S.frame), rhs);
    if (!c)
        fail(Errc::NoSolutionOverFractionField,
             "df is not in the form projection of the structure: " + f.str());
    AdmissibleResult res(chart);
    res.coeffs = *c;
    res.X = combine_vectors(S.frame, *c);
    res.certified = true;
    for (const auto& [idx, comp] : res.X.terms()) {
        (void)idx;
        UnitCert cert = unit_certify(Scalar::from_poly(comp.den()));
        if (!cert.ok()) {
            res.certified = false;
            res.refused = Scalar::from_poly(comp.den()).str();
            res.witness = cert.witness;
            break;
        }
    }
    return res;
}

Scalar adm_bracket(const DiracStructure& S, const Scalar& f, const Scalar& g) {
    AdmissibleResult rf = admissible_solve(S, f);
    if (!rf.certified)
        fail(Errc::NotAdmissible, "first argument, denominator " + rf.refused);
    AdmissibleResult rg = admissible_solve(S, g);
    if (!rg.certified)
        fail(Errc::NotAdmissible, "second argument, denominator " + rg.refused);
    Scalar fg = apply_vec(rg.X, f);
    Section ham = cou_section(-lie_bracket(rf.X, rg.X), d(fg));
    if (!S.frame.solve_in_span(ham))
        fail(Errc::BracketNotInSpan,
             "-[X_f,X_g] + d{f,g} escapes the structure: " + ham.str());
    return fg;
}

namespace {

// Kernel of the form block over the given coefficient ring, with X-parts
// assembled in the ORIGINAL component indexing; `bind` restricts coefficients
// (identity for the generic fiber).
BasicResult basic_on(const DiracStructure& S, const Scalar& f, const ChartPtr& ring,
                     const RatPoint& at) {
    const ChartPtr& chart = S.frame.chart();
    bool slice = !at.empty();
    auto bind = [&](const Scalar& s) { return slice ? restrict_at(s, at, ring) : s; };
    size_t n = chart->dim(), k = S.frame.size();
    Mat a(ring, n, k);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < n; ++i) a.at(i, j) = bind(S.frame.at(j).xi.coeff({(uint32_t)i}));
    KForm df = d(f);
    for (const auto& c : nullspace(a)) {
        Scalar val = Scalar::zero(ring);
        for (size_t i = 0; i < n; ++i) {
            Scalar xi = Scalar::zero(ring);
            for (size_t j = 0; j < k; ++j)
                xi = xi + c[j] * bind(S.frame.at(j).X.coeff({(uint32_t)i}));
            val = val + bind(df.coeff({(uint32_t)i})) * xi;
        }
        if (!val.is_zero()) {
            BasicResult out;
            out.basic = false;
            std::ostringstream msg;
            msg << "df does not annihilate the characteristic direction";
            if (slice) msg << " along " << point_str(at);
            out.reason = msg.str();
            if (auto w = find_point_nonzero(val)) {
                RatPoint full = *w;
                for (const auto& [name, v] : at) full[name] = v;
                out.witness = full;
            }
            return out;
        }
    }
    return BasicResult{};
}

} // namespace

BasicResult is_basic(const DiracStructure& S, const Scalar& f) {
    const ChartPtr& chart = S.frame.chart();
    require_same_chart(chart, f.chart(), "is_basic");
    BasicResult generic = basic_on(S, f, chart, {});
    if (!generic.basic) return generic;
    for (const RatPoint& q : S.loci) {
        BasicResult here = basic_on(S, f, chart->sliced(q), q);
        if (!here.basic) return here;
    }
    return BasicResult{};
}

Scalar jacobi_residual(const DiracStructure& S, const Scalar& f, const Scalar& g, const Scalar& h) {
    return adm_bracket(S, adm_bracket(S, f, g), h) + adm_bracket(S, adm_bracket(S, g, h), f) +
           adm_bracket(S, adm_bracket(S, h, f), g);
}

} // namespace dj
