#include "dj/djacobi.hpp"

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

// Extended-slot constraint matrix transposed: rows = chart coordinates plus
// the scalar slot g, columns = frame sections.
Mat xig_columns(const StructureFrame& fr) {
    size_t n = fr.chart()->dim();
    Mat a(fr.chart(), n + 1, fr.size());
    for (size_t j = 0; j < fr.size(); ++j) {
        for (size_t i = 0; i < n; ++i) a.at(i, j) = fr.at(j).xi.coeff({(uint32_t)i});
        a.at(n, j) = fr.at(j).g;
    }
    return a;
}

KVector combine_vectors(const StructureFrame& fr, const std::vector<Scalar>& c) {
    KVector X = KVector::zero(fr.chart(), 1);
    for (size_t j = 0; j < fr.size(); ++j) X = X + fr.at(j).X.scaled(c[j]);
    return X;
}

Scalar combine_slot(const StructureFrame& fr, const std::vector<Scalar>& c, bool f_slot) {
    Scalar v = Scalar::zero(fr.chart());
    for (size_t j = 0; j < fr.size(); ++j) v = v + c[j] * (f_slot ? fr.at(j).f : fr.at(j).g);
    return v;
}

} // namespace

DiracJacobiStructure make_dj(StructureFrame frame, std::vector<RatPoint> loci) {
    if (!frame.extended())
        fail(Errc::KindMismatch, "a Dirac-Jacobi structure carries extended sections");
    validate_loci(frame.chart(), loci);
    return DiracJacobiStructure{std::move(frame), std::move(loci)};
}

DiracJacobiStructure dj_graph_jacobi(const KVector& lam, const KVector& E,
                                     std::vector<RatPoint> loci) {
    if (lam.degree() != 2) fail(Errc::DegreeOverflow, "dj_graph_jacobi expects a bivector");
    if (E.degree() != 1) fail(Errc::DegreeOverflow, "dj_graph_jacobi expects a vector field");
    const ChartPtr& c = lam.chart();
    require_same_chart(c, E.chart(), "dj_graph_jacobi");
    std::vector<Section> secs;
    for (uint32_t i = 0; i < c->dim(); ++i) {
        KForm dxi = KForm::d_coord(c, c->coord(i).name);
        secs.push_back(e1_section(lambda_tilde(lam, dxi), eval1(dxi, E), dxi, Scalar::zero(c)));
    }
    secs.push_back(e1_section(-E, Scalar::zero(c), KForm::zero(c, 1), Scalar::one(c)));
    return make_dj(StructureFrame::validate(secs), std::move(loci));
}

DiracJacobiStructure dj_graph_form_pair(const KForm& omega, const KForm& sigma,
                                        std::vector<RatPoint> loci) {
    if (omega.degree() != 2) fail(Errc::DegreeOverflow, "dj_graph_form_pair expects a 2-form");
    if (sigma.degree() != 1) fail(Errc::DegreeOverflow, "dj_graph_form_pair expects a 1-form");
    const ChartPtr& c = omega.chart();
    require_same_chart(c, sigma.chart(), "dj_graph_form_pair");
    std::vector<Section> secs;
    for (uint32_t i = 0; i < c->dim(); ++i) {
        KVector v = KVector::basis(c, c->coord(i).name);
        secs.push_back(e1_section(v, Scalar::zero(c), contract(v, omega), -sigma.coeff({i})));
    }
    secs.push_back(e1_section(KVector::zero(c, 1), Scalar::one(c), sigma, Scalar::zero(c)));
    return make_dj(StructureFrame::validate(secs), std::move(loci));
}

DiracJacobiStructure dj_from_dirac(const DiracStructure& L) {
    const ChartPtr& c = L.frame.chart();
    std::vector<Section> secs;
    for (size_t j = 0; j < L.frame.size(); ++j) {
        const Section& e = L.frame.at(j);
        secs.push_back(e1_section(e.X, Scalar::zero(c), e.xi, Scalar::zero(c)));
    }
    secs.push_back(e1_section(KVector::zero(c, 1), Scalar::zero(c), KForm::zero(c, 1), Scalar::one(c)));
    return make_dj(StructureFrame::validate(secs), L.loci);
}

namespace {

// Rewrites the frame as a graph over the covector block (over_covector) or
// the vector block; returns G with row i = the complementary block of the
// unique combination hitting basis element i. Isotropy forces G antisymmetric
// in the extended sense; violation means the frame data is corrupt.
Mat graph_over(const StructureFrame& fr, bool over_covector) {
    const ChartPtr& c = fr.chart();
    size_t n = c->dim(), k = fr.size();
    Mat dom(c, k, n + 1), cod(c, k, n + 1);
    for (size_t j = 0; j < k; ++j) {
        const Section& e = fr.at(j);
        for (size_t i = 0; i < n; ++i) {
            dom.at(j, i) = over_covector ? e.xi.coeff({(uint32_t)i}) : e.X.coeff({(uint32_t)i});
            cod.at(j, i) = over_covector ? e.X.coeff({(uint32_t)i}) : e.xi.coeff({(uint32_t)i});
        }
        dom.at(j, n) = over_covector ? e.g : e.f;
        cod.at(j, n) = over_covector ? e.f : e.g;
    }
    Scalar dd = det(dom);
    UnitCert cert = unit_certify(dd);
    if (!cert.ok()) {
        std::ostringstream msg;
        msg << (over_covector ? "covector" : "vector")
            << "-block determinant is not a certified unit: " << dd.str();
        if (cert.witness) msg << " (vanishes at " << point_str(*cert.witness) << ")";
        fail(Errc::RegraphNotInvertible, msg.str());
    }
    RrefResult r = rref(dom.hcat(cod));
    Mat g(c, n + 1, n + 1);
    for (size_t i = 0; i <= n; ++i)
        for (size_t j = 0; j <= n; ++j) g.at(i, j) = r.m.at(i, n + 1 + j);
    for (size_t i = 0; i <= n; ++i)
        for (size_t j = i; j <= n; ++j)
            if (!(g.at(i, j) + g.at(j, i)).is_zero())
                fail(Errc::Internal, "regraph of an isotropic frame must be antisymmetric");
    return g;
}

} // namespace

JacobiPair regraph_jacobi(const DiracJacobiStructure& S) {
    const ChartPtr& c = S.frame.chart();
    size_t n = c->dim();
    Mat g = graph_over(S.frame, /*over_covector=*/true);
    // Row i<n is the image of (dx_i, 0): X = lam(.,dx_i) with components
    // g[i][j] = lam^{ji}, and f = g[i][n] = E^i.
    KVector lam = KVector::zero(c, 2);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j) {
            KVector blade = wedge(KVector::basis(c, c->coord(i).name),
                                  KVector::basis(c, c->coord(j).name));
            lam = lam + blade.scaled(g.at(j, i));
        }
    KVector E = KVector::zero(c, 1);
    for (uint32_t i = 0; i < n; ++i)
        E = E + KVector::basis(c, c->coord(i).name).scaled(g.at(i, n));
    return JacobiPair{lam, E};
}

FormPair regraph_form_pair(const DiracJacobiStructure& S) {
    const ChartPtr& c = S.frame.chart();
    size_t n = c->dim();
    Mat h = graph_over(S.frame, /*over_covector=*/false);
    // Row i<n is the image of (@i, 0): xi = i_{@i} omega with components
    // h[i][j] = omega_{ij}, and g = h[i][n] = -sigma_i.
    KForm omega = KForm::zero(c, 2);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j)
            omega.add_term({i, j}, h.at(i, j));
    KForm sigma = KForm::zero(c, 1);
    for (uint32_t i = 0; i < n; ++i) sigma.add_term({i}, -h.at(i, n));
    return FormPair{omega, sigma};
}

KVector reeb_solve(const KForm& sigma) {
    if (sigma.degree() != 1) fail(Errc::DegreeOverflow, "reeb_solve expects a 1-form");
    const ChartPtr& c = sigma.chart();
    size_t n = c->dim();
    if (n % 2 == 0)
        fail(Errc::ValidationError, "reeb_solve requires an odd-dimensional chart");
    size_t m = (n - 1) / 2;
    KForm ds = d(sigma);
    KForm top = sigma;
    for (size_t i = 0; i < m; ++i) top = wedge(top, ds);
    MultiIndex full;
    for (uint32_t i = 0; i < n; ++i) full.push_back(i);
    Scalar vol = top.coeff(full);
    UnitCert cert = unit_certify(vol);
    if (!cert.ok()) {
        std::ostringstream msg;
        msg << "top coefficient is not a certified unit: " << vol.str();
        if (cert.witness) msg << " (vanishes at " << point_str(*cert.witness) << ")";
        fail(Errc::NotContact, msg.str());
    }
    // sigma(E) = 1 and (i_E d sigma)_j = 0 for every j.
    Mat a(c, n + 1, n);
    std::vector<Scalar> rhs(n + 1, Scalar::zero(c));
    for (uint32_t i = 0; i < n; ++i) a.at(0, i) = sigma.coeff({i});
    rhs[0] = Scalar::one(c);
    for (uint32_t j = 0; j < n; ++j)
        for (uint32_t i = 0; i < n; ++i) {
            if (i < j)
                a.at(1 + j, i) = ds.coeff({i, j});
            else if (i > j)
                a.at(1 + j, i) = -ds.coeff({j, i});
        }
    auto sol = solve(a, rhs);
    if (!sol) fail(Errc::NotContact, "normalization equations are inconsistent");
    KVector E = KVector::zero(c, 1);
    for (uint32_t i = 0; i < n; ++i)
        E = E + KVector::basis(c, c->coord(i).name).scaled((*sol)[i]);
    if (!(eval1(sigma, E) - Scalar::one(c)).is_zero() || !contract(E, ds).is_zero())
        fail(Errc::Internal, "reeb_solve postcondition failed");
    return E;
}

DjAdmissibleResult dj_admissible_solve(const DiracJacobiStructure& S, const Scalar& f) {
    const ChartPtr& chart = S.frame.chart();
    require_same_chart(chart, f.chart(), "dj_admissible_solve");
    KForm df = d(f);
    std::vector<Scalar> rhs;
    for (uint32_t i = 0; i < chart->dim(); ++i) rhs.push_back(df.coeff({i}));
    rhs.push_back(f);
    auto c = solve(xig_columns(S.frame), rhs);
    if (!c)
        fail(Errc::NoSolutionOverFractionField,
             "(df, f) is not in the covector projection of the structure: " + f.str());
    DjAdmissibleResult res(chart);
    res.coeffs = *c;
    res.X = combine_vectors(S.frame, *c);
    res.phi = combine_slot(S.frame, *c, /*f_slot=*/true);
    res.certified = true;
    auto check_den = [&](const Scalar& s) {
        if (!res.certified) return;
        UnitCert cert = unit_certify(Scalar::from_poly(s.den()));
        if (!cert.ok()) {
            res.certified = false;
            res.refused = Scalar::from_poly(s.den()).str();
            res.witness = cert.witness;
        }
    };
    for (const auto& [idx, comp] : res.X.terms()) {
        (void)idx;
        check_den(comp);
    }
    check_den(res.phi);
    return res;
}

Scalar dj_bracket(const DiracJacobiStructure& S, const Scalar& f, const Scalar& g) {
    DjAdmissibleResult rf = dj_admissible_solve(S, f);
    if (!rf.certified)
        fail(Errc::NotAdmissible, "first argument, denominator " + rf.refused);
    DjAdmissibleResult rg = dj_admissible_solve(S, g);
    if (!rg.certified)
        fail(Errc::NotAdmissible, "second argument, denominator " + rg.refused);
    Scalar fg = apply_vec(rg.X, f) + f * rg.phi;
    Section lhs = ext_courant_bracket(e1_section(rf.X, rf.phi, d(f), f),
                                      e1_section(rg.X, rg.phi, d(g), g));
    Section rhs = e1_section(lie_bracket(rf.X, rg.X),
                             apply_vec(rf.X, rg.phi) - apply_vec(rg.X, rf.phi), -d(fg), -fg);
    if (!(lhs == rhs))
        fail(Errc::Internal,
             "bracket of admissible sections is not the admissible section of the bracket: " +
                 lhs.str() + " vs " + rhs.str());
    return fg;
}

namespace {

// Kernel pairs (X(c), f(c)) of the covector-and-scalar block over the given
// coefficient ring; psi must satisfy X.psi + psi f = 0 for each.
BasicResult dj_basic_on(const DiracJacobiStructure& S, const Scalar& psi, const ChartPtr& ring,
                        const RatPoint& at) {
    const ChartPtr& chart = S.frame.chart();
    bool slice = !at.empty();
    auto bind = [&](const Scalar& s) { return slice ? restrict_at(s, at, ring) : s; };
    size_t n = chart->dim(), k = S.frame.size();
    Mat a(ring, n + 1, k);
    for (size_t j = 0; j < k; ++j) {
        for (size_t i = 0; i < n; ++i) a.at(i, j) = bind(S.frame.at(j).xi.coeff({(uint32_t)i}));
        a.at(n, j) = bind(S.frame.at(j).g);
    }
    KForm dpsi = d(psi);
    for (const auto& c : nullspace(a)) {
        Scalar val = Scalar::zero(ring);
        for (size_t i = 0; i < n; ++i) {
            Scalar xc = Scalar::zero(ring);
            for (size_t j = 0; j < k; ++j)
                xc = xc + c[j] * bind(S.frame.at(j).X.coeff({(uint32_t)i}));
            val = val + bind(dpsi.coeff({(uint32_t)i})) * xc;
        }
        Scalar fc = Scalar::zero(ring);
        for (size_t j = 0; j < k; ++j) fc = fc + c[j] * bind(S.frame.at(j).f);
        val = val + bind(psi) * fc;
        if (!val.is_zero()) {
            BasicResult out;
            out.basic = false;
            std::ostringstream msg;
            msg << "X.psi + psi f does not vanish on the kernel pair";
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

BasicResult dj_is_basic(const DiracJacobiStructure& S, const Scalar& psi) {
    const ChartPtr& chart = S.frame.chart();
    require_same_chart(chart, psi.chart(), "dj_is_basic");
    BasicResult generic = dj_basic_on(S, psi, chart, {});
    if (!generic.basic) return generic;
    for (const RatPoint& q : S.loci) {
        BasicResult here = dj_basic_on(S, psi, chart->sliced(q), q);
        if (!here.basic) return here;
    }
    return BasicResult{};
}

Scalar dj_basic_bracket(const DiracJacobiStructure& S, const Scalar& psi, const Scalar& h) {
    BasicResult b = dj_is_basic(S, psi);
    if (!b.basic) fail(Errc::NotBasic, "first argument: " + b.reason);
    DjAdmissibleResult rh = dj_admissible_solve(S, h);
    if (!rh.certified)
        fail(Errc::NotAdmissible, "second argument, denominator " + rh.refused);
    return apply_vec(rh.X, psi) + psi * rh.phi;
}

Diracization diracization(const DiracJacobiStructure& S) {
    std::string fiber_coord, fiber_unit;
    ChartPtr ext = weighted_line_extension(S.frame.chart(), &fiber_coord, &fiber_unit);
    std::vector<Section> secs;
    for (size_t j = 0; j < S.frame.size(); ++j) secs.push_back(u_embed(S.frame.at(j), ext));
    return Diracization{make_dirac(StructureFrame::validate(secs), S.loci), fiber_coord,
                        fiber_unit};
}

} // namespace dj
