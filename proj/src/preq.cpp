#include "dj/preq.hpp"

#include <sstream>

namespace dj {

namespace {

// Constraint matrix of the admissibility system: rows = chart coordinates
// followed by the scalar slot g, columns = frame sections.
Mat xig_cols(const StructureFrame& fr) {
    size_t n = fr.chart()->dim();
    Mat a(fr.chart(), n + 1, fr.size());
    for (size_t j = 0; j < fr.size(); ++j) {
        for (size_t i = 0; i < n; ++i) a.at(i, j) = fr.at(j).xi.coeff({(uint32_t)i});
        a.at(n, j) = fr.at(j).g;
    }
    return a;
}

// Base admissibility gate shared by the bundle-level operations.
AdmissibleResult base_admissible(const PreqData& d, const Scalar& g) {
    AdmissibleResult ar = [&] {
        try {
            return admissible_solve(d.base, g);
        } catch (const Error& e) {
            if (e.code() == Errc::NoSolutionOverFractionField)
                fail(Errc::NotAdmissible,
                     "no hamiltonian field over the fraction field for " + g.str());
            throw;
        }
    }();
    if (!ar.certified)
        fail(Errc::NotAdmissible, "hamiltonian denominator is not a certified unit: " + ar.refused);
    return ar;
}

// Pairing of the solved hamiltonian section against the stored cochain.
Scalar beta_pairing(const PreqData& d, const AdmissibleResult& ar) {
    Scalar bp = Scalar::zero(d.base.frame.chart());
    for (size_t j = 0; j < ar.coeffs.size(); ++j) bp = bp + ar.coeffs[j] * d.beta.values[j];
    return bp;
}

void certify_components(const KVector& X, const Scalar& phi, bool& certified, std::string& refused,
                        std::optional<RatPoint>& witness) {
    certified = true;
    auto check = [&](const Scalar& s) {
        if (!certified) return;
        UnitCert cert = unit_certify(Scalar::from_poly(s.den()));
        if (!cert.ok()) {
            certified = false;
            refused = Scalar::from_poly(s.den()).str();
            witness = cert.witness;
        }
    };
    for (const auto& [idx, comp] : X.terms()) {
        (void)idx;
        check(comp);
    }
    check(phi);
}

} // namespace

ChartPtr circle_extension(const ChartPtr& base, std::string* fiber_coord) {
    auto taken = [&](const std::string& n) {
        for (uint32_t g = 0; g < base->gen_count(); ++g)
            if (base->gen_name(g) == n) return true;
        return false;
    };
    std::string th = "th";
    while (taken(th)) th += "_";
    std::vector<Coord> coords;
    for (uint32_t i = 0; i < base->dim(); ++i) coords.push_back(base->coord(i));
    coords.push_back(Coord{th, true, false});
    std::vector<ExpUnit> units;
    for (uint32_t g = 0; g < base->gen_count(); ++g)
        if (base->gen_kind(g) == GenKind::Unit) units.push_back(base->unit_of_gen(g));
    if (fiber_coord) *fiber_coord = th;
    return Chart::make(base->name() + "_x_circle", coords, units);
}

Scalar pull_scalar(const PreqData& d, const Scalar& f) { return subst(f, d.total, {}); }

KForm pull_form(const PreqData& d, const KForm& w) {
    KForm out = KForm::zero(d.total, w.degree());
    for (const auto& [idx, c] : w.terms()) out.add_term(idx, subst(c, d.total, {}));
    return out;
}

KVector lift_vector(const PreqData& d, const KVector& v) {
    KVector out = KVector::zero(d.total, v.degree());
    for (const auto& [idx, c] : v.terms()) out.add_term(idx, subst(c, d.total, {}));
    return out;
}

KVector lift_horizontal(const PreqData& d, const KVector& v) {
    if (v.degree() != 1) fail(Errc::DegreeOverflow, "horizontal lift expects a vector field");
    Scalar drop = pull_scalar(d, eval1(d.potential, v));
    return lift_vector(d, v) - KVector::basis(d.total, d.fiber).scaled(drop);
}

KForm connection_form(const PreqData& d) {
    return KForm::d_coord(d.total, d.fiber) + pull_form(d, d.potential);
}

PreqData make_preq_data(const DiracStructure& base, const KForm& curvature, const AnchorRep& pair,
                        const KForm& potential) {
    const ChartPtr& P = base.frame.chart();
    if (base.frame.extended())
        fail(Errc::KindMismatch, "bundle data sits over a plain structure frame");
    require_same_chart(P, curvature.chart(), "make_preq_data");
    require_same_chart(P, potential.chart(), "make_preq_data");
    require_same_chart(P, pair.A.chart(), "make_preq_data");
    require_same_chart(P, pair.alpha.chart(), "make_preq_data");
    if (curvature.degree() != 2) fail(Errc::DegreeOverflow, "curvature must be a 2-form");
    if (potential.degree() != 1) fail(Errc::DegreeOverflow, "potential must be a 1-form");
    if (pair.A.degree() != 1 || pair.alpha.degree() != 1)
        fail(Errc::DegreeOverflow, "the anchored pair carries a vector field and a 1-form");
    if (!(d(potential) == curvature))
        fail(Errc::ValidationError,
             "the potential does not differentiate to the declared curvature");
    if (!eval1(pair.alpha, pair.A).is_zero())
        fail(Errc::ValidationError,
             "the anchored pair is not isotropic: alpha(A) = " + eval1(pair.alpha, pair.A).str());
    LCochain1 beta = beta_from_pair(base, pair);
    Mat res = preq_residual(base, curvature, beta);
    for (size_t i = 0; i < res.rows(); ++i)
        for (size_t j = 0; j < res.cols(); ++j)
            if (!res.at(i, j).is_zero()) {
                std::ostringstream msg;
                msg << "curvature matching residual is nonzero at frame pair (" << i << "," << j
                    << "): " << res.at(i, j).str();
                fail(Errc::ValidationError, msg.str());
            }
    std::string fiber;
    ChartPtr total = circle_extension(P, &fiber);
    return PreqData{base, curvature, pair, potential, std::move(beta), std::move(total),
                    std::move(fiber)};
}

DiracJacobiStructure build_Lbar(const PreqData& d) {
    const ChartPtr& Q = d.total;
    KVector E = KVector::basis(Q, d.fiber);
    std::vector<Section> secs;
    for (size_t j = 0; j < d.base.frame.size(); ++j) {
        const Section& e = d.base.frame.at(j);
        KVector xh = lift_horizontal(d, e.X) + E.scaled(pull_scalar(d, d.beta.values[j]));
        secs.push_back(e1_section(xh, Scalar::zero(Q), pull_form(d, e.xi), Scalar::zero(Q)));
    }
    secs.push_back(e1_section(-E, Scalar::zero(Q), KForm::zero(Q, 1), Scalar::one(Q)));
    secs.push_back(e1_section(-lift_horizontal(d, d.pair.A), Scalar::one(Q),
                              connection_form(d) - pull_form(d, d.pair.alpha), Scalar::zero(Q)));
    DiracJacobiStructure out = make_dj(StructureFrame::validate(secs), d.base.loci);
    if (auto w = integrability_witness(out.frame)) {
        std::ostringstream msg;
        msg << "induced frame is not closed under the bracket: <[e" << w->i << ",e" << w->j
            << "],e" << w->k << "> = " << w->value.str();
        fail(Errc::Internal, msg.str());
    }
    return out;
}

std::vector<KVector> dj_tangent_intersection(const DiracJacobiStructure& S) {
    const StructureFrame& fr = S.frame;
    size_t n = fr.chart()->dim();
    Mat m(fr.chart(), n + 2, fr.size());
    for (size_t j = 0; j < fr.size(); ++j) {
        for (size_t i = 0; i < n; ++i) m.at(i, j) = fr.at(j).xi.coeff({(uint32_t)i});
        m.at(n, j) = fr.at(j).g;
        m.at(n + 1, j) = fr.at(j).f;
    }
    std::vector<KVector> out;
    for (const auto& c : nullspace(m)) {
        KVector X = KVector::zero(fr.chart(), 1);
        for (size_t j = 0; j < fr.size(); ++j) X = X + fr.at(j).X.scaled(c[j]);
        out.push_back(X);
    }
    return out;
}

ForwardWitness forward_image_witness(const PreqData& d, const DiracJacobiStructure& total_structure,
                                     const Section& target) {
    const ChartPtr& Q = d.total;
    const ChartPtr& P = d.base.frame.chart();
    require_same_chart(Q, total_structure.frame.chart(), "forward_image_witness");
    require_same_chart(P, target.chart, "forward_image_witness");
    if (!target.extended)
        fail(Errc::KindMismatch, "forward witnesses are sought for extended base sections");
    size_t n = P->dim();
    uint32_t fx = (uint32_t)Q->coord_index(d.fiber);
    const StructureFrame& fr = total_structure.frame;
    Mat m(Q, 2 * n + 3, fr.size());
    for (size_t j = 0; j < fr.size(); ++j) {
        const Section& s = fr.at(j);
        for (size_t i = 0; i < n; ++i) m.at(i, j) = s.X.coeff({(uint32_t)i});
        m.at(n, j) = s.f;
        for (size_t i = 0; i < n; ++i) m.at(n + 1 + i, j) = s.xi.coeff({(uint32_t)i});
        m.at(2 * n + 1, j) = s.xi.coeff({fx});
        m.at(2 * n + 2, j) = s.g;
    }
    std::vector<Scalar> rhs;
    for (size_t i = 0; i < n; ++i) rhs.push_back(subst(target.X.coeff({(uint32_t)i}), Q, {}));
    rhs.push_back(subst(target.f, Q, {}));
    for (size_t i = 0; i < n; ++i) rhs.push_back(subst(target.xi.coeff({(uint32_t)i}), Q, {}));
    rhs.push_back(Scalar::zero(Q));
    rhs.push_back(subst(target.g, Q, {}));
    auto c = solve(m, rhs);
    if (!c) {
        ForwardWitness out;
        out.residual = "no frame combination projects onto the target " + target.str();
        return out;
    }
    ForwardWitness out;
    out.found = true;
    out.coeffs = *c;
    return out;
}

LeafClass leaf_classify(const PreqData& d, const RatPoint& p,
                        const std::optional<LcpInput>& supplied) {
    const ChartPtr& P = d.base.frame.chart();
    for (uint32_t i = 0; i < P->dim(); ++i)
        if (!p.count(P->coord(i).name))
            fail(Errc::ValidationError,
                 "classification point must bind every base coordinate; missing " +
                     P->coord(i).name);
    if (!P->point_in_domain(p)) fail(Errc::PointOutsideDomain, point_str(p));
    const StructureFrame& fr = d.base.frame;
    size_t n = P->dim(), k = fr.size();
    ChartPtr fib = P->sliced(p);
    Mat m0(fib, n, k);
    std::vector<Scalar> rhs0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j)
            m0.at(i, j) = restrict_at(fr.at(j).X.coeff({(uint32_t)i}), p, fib);
        rhs0.push_back(restrict_at(d.pair.A.coeff({(uint32_t)i}), p, fib));
    }
    if (solve(m0, rhs0)) {
        // The pair's vector member is tangent to the leaf: solve a covector
        // companion for it globally and assemble the classifying 1-form.
        Mat mx(P, n, k);
        std::vector<Scalar> rhs;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < k; ++j) mx.at(i, j) = fr.at(j).X.coeff({(uint32_t)i});
            rhs.push_back(d.pair.A.coeff({(uint32_t)i}));
        }
        auto c = solve(mx, rhs);
        if (!c)
            fail(Errc::XiANotSolvable,
                 "the pair's vector member does not resolve in the anchors over the fraction "
                 "field");
        KForm xiA = KForm::zero(P, 1);
        for (size_t j = 0; j < k; ++j) xiA = xiA + fr.at(j).xi.scaled((*c)[j]);
        return LeafClass{true, connection_form(d) + pull_form(d, xiA - d.pair.alpha),
                         std::nullopt};
    }
    if (!supplied)
        fail(Errc::SuppliedDataInvalid,
             "leafwise data (gamma_tilde, omega_leaf) is required off the precontact case");
    const KForm& gt = supplied->gamma_tilde;
    const KForm& wl = supplied->omega_leaf;
    require_same_chart(P, gt.chart(), "leaf_classify");
    require_same_chart(P, wl.chart(), "leaf_classify");
    if (gt.degree() != 1 || wl.degree() != 2)
        fail(Errc::SuppliedDataInvalid, "leafwise data carries a 1-form and a 2-form");
    for (size_t j = 0; j < k; ++j)
        if (!eval1(gt, fr.at(j).X).is_zero())
            fail(Errc::SuppliedDataInvalid,
                 "gamma_tilde does not annihilate the anchor of generator " + std::to_string(j));
    if (!(eval1(gt, d.pair.A) == Scalar::one(P)))
        fail(Errc::SuppliedDataInvalid,
             "gamma_tilde takes " + eval1(gt, d.pair.A).str() + " on the pair's vector member");
    Mat ups = upsilon(d.base);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j)
            if (!(eval2(wl, fr.at(i).X, fr.at(j).X) == ups.at(i, j)))
                fail(Errc::SuppliedDataInvalid,
                     "omega_leaf disagrees with the pairing table at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
    if (!contract(d.pair.A, wl).is_zero())
        fail(Errc::SuppliedDataInvalid, "omega_leaf does not annihilate the pair's vector member");
    KForm one = pull_form(d, gt);
    KForm two =
        wedge(connection_form(d) - pull_form(d, d.pair.alpha), one) + pull_form(d, wl);
    return LeafClass{false, std::move(one), std::move(two)};
}

DiracJacobiStructure ext_bfield(const DiracJacobiStructure& S, const KForm& gamma) {
    const ChartPtr& c = S.frame.chart();
    require_same_chart(c, gamma.chart(), "ext_bfield");
    if (gamma.degree() != 1) fail(Errc::DegreeOverflow, "ext_bfield expects a 1-form");
    // On a 1-dimensional chart every 2-form vanishes, so the derivative term
    // drops out instead of overflowing the degree cap.
    std::optional<KForm> dg;
    if (c->dim() >= 2) dg = d(gamma);
    std::vector<Section> secs;
    for (size_t j = 0; j < S.frame.size(); ++j) {
        const Section& e = S.frame.at(j);
        KForm xi = e.xi + gamma.scaled(e.f);
        if (dg) xi = xi + contract(e.X, *dg);
        secs.push_back(e1_section(e.X, e.f, xi, e.g - eval1(gamma, e.X)));
    }
    return make_dj(StructureFrame::validate(secs), S.loci);
}

KVector preq_hamiltonian(const PreqData& d, const Scalar& g) {
    const ChartPtr& P = d.base.frame.chart();
    require_same_chart(P, g.chart(), "preq_hamiltonian");
    AdmissibleResult ar = base_admissible(d, g);
    Scalar drop = beta_pairing(d, ar) - g;
    KVector X = lift_horizontal(d, ar.X) +
                KVector::basis(d.total, d.fiber).scaled(pull_scalar(d, drop));
    // The formula must solve the admissibility system of the pulled-back
    // function with the scalar companion left free.
    DiracJacobiStructure lbar = build_Lbar(d);
    const StructureFrame& fr = lbar.frame;
    const ChartPtr& Q = d.total;
    size_t nq = Q->dim();
    Scalar pg = pull_scalar(d, g);
    KForm dpg = dj::d(pg);
    Mat m(Q, 2 * nq + 1, fr.size());
    std::vector<Scalar> rhs;
    for (size_t i = 0; i < nq; ++i) {
        for (size_t j = 0; j < fr.size(); ++j) m.at(i, j) = fr.at(j).X.coeff({(uint32_t)i});
        rhs.push_back(X.coeff({(uint32_t)i}));
    }
    for (size_t i = 0; i < nq; ++i) {
        for (size_t j = 0; j < fr.size(); ++j) m.at(nq + i, j) = fr.at(j).xi.coeff({(uint32_t)i});
        rhs.push_back(dpg.coeff({(uint32_t)i}));
    }
    for (size_t j = 0; j < fr.size(); ++j) m.at(2 * nq, j) = fr.at(j).g;
    rhs.push_back(pg);
    if (!solve(m, rhs))
        fail(Errc::Internal,
             "formula field does not solve the admissibility system of the pulled-back function");
    return X;
}

GradedFunction make_graded(std::vector<std::pair<int, Scalar>> parts) {
    GradedFunction out;
    for (auto& [k, h] : parts) {
        if (h.is_zero()) continue;
        auto [it, fresh] = out.parts.emplace(k, h);
        if (!fresh) fail(Errc::ValidationError, "duplicate grade " + std::to_string(k));
    }
    return out;
}

GradedFunction graded_add(const GradedFunction& a, const GradedFunction& b) {
    GradedFunction out = a;
    for (const auto& [k, h] : b.parts) {
        auto it = out.parts.find(k);
        if (it == out.parts.end()) {
            out.parts.emplace(k, h);
        } else {
            it->second = it->second + h;
            if (it->second.is_zero()) out.parts.erase(it);
        }
    }
    return out;
}

GradedFunction graded_scale(const Scalar& c, const GradedFunction& a) {
    GradedFunction out;
    for (const auto& [k, h] : a.parts) {
        Scalar v = c * h;
        if (!v.is_zero()) out.parts.emplace(k, v);
    }
    return out;
}

GradedFunction rep_apply(const PreqData& d, const Scalar& g, const GradedFunction& phi) {
    const ChartPtr& P = d.base.frame.chart();
    require_same_chart(P, g.chart(), "rep_apply");
    AdmissibleResult ar = base_admissible(d, g);
    Scalar w = beta_pairing(d, ar) - g - eval1(d.potential, ar.X);
    Scalar tau = Scalar::tau(P);
    GradedFunction out;
    for (const auto& [k, h] : phi.parts) {
        require_same_chart(P, h.chart(), "rep_apply");
        Scalar val = -(apply_vec(ar.X, h) + tau * Scalar::rational(P, Rat(k)) * w * h);
        if (!val.is_zero()) out.parts.emplace(k, val);
    }
    return out;
}

LConnection lconn(const PreqData& d) { return LConnection{d, upsilon(d.base)}; }

Scalar lconn_apply(const LConnection& D, size_t i, const Scalar& h) {
    const StructureFrame& fr = D.data.base.frame;
    if (i >= fr.size()) fail(Errc::ValidationError, "frame index out of range");
    require_same_chart(fr.chart(), h.chart(), "lconn_apply");
    const Section& e = fr.at(i);
    Scalar tau = Scalar::tau(fr.chart());
    return apply_vec(e.X, h) + tau * (eval1(D.data.potential, e.X) - D.data.beta.values[i]) * h;
}

CurvatureReport lconn_curvature(const LConnection& D, size_t i, size_t j, const Scalar& h) {
    const StructureFrame& fr = D.data.base.frame;
    Scalar didj = lconn_apply(D, i, lconn_apply(D, j, h));
    Scalar djdi = lconn_apply(D, j, lconn_apply(D, i, h));
    Section br = courant_bracket(fr.at(i), fr.at(j));
    auto c = fr.solve_in_span(br);
    if (!c)
        fail(Errc::BracketNotInSpan, "frame is not closed under the bracket at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
    Scalar dbr = Scalar::zero(fr.chart());
    for (size_t m = 0; m < fr.size(); ++m) dbr = dbr + (*c)[m] * lconn_apply(D, m, h);
    CurvatureReport out{didj - djdi - dbr,
                        Scalar::tau(fr.chart()) * D.pairing_table.at(i, j) * h, false};
    out.matches = out.action == out.expected;
    return out;
}

GradedFunction lconn_rep(const LConnection& D, const Scalar& g, const GradedFunction& s) {
    const StructureFrame& fr = D.data.base.frame;
    const ChartPtr& P = fr.chart();
    for (const auto& [k, h] : s.parts) {
        (void)h;
        if (k != -1)
            fail(Errc::ValidationError,
                 "the connection representation acts on the grade -1 sector only");
    }
    Scalar h = s.parts.count(-1) ? s.parts.at(-1) : Scalar::zero(P);
    size_t n = P->dim(), k = fr.size();
    std::vector<Scalar> dvals;
    for (size_t m = 0; m < k; ++m) dvals.push_back(lconn_apply(D, m, h));
    Mat xi(P, n, k);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j) xi.at(i, j) = fr.at(j).xi.coeff({(uint32_t)i});
    for (const auto& c : nullspace(xi)) {
        Scalar val = Scalar::zero(P);
        for (size_t m = 0; m < k; ++m) val = val + c[m] * dvals[m];
        if (!val.is_zero())
            fail(Errc::NotInDomain,
                 "coefficient is not covariantly constant along a kernel direction");
    }
    for (const RatPoint& at : D.data.base.loci) {
        ChartPtr sc = P->sliced(at);
        Mat xs(sc, n, k);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k; ++j) xs.at(i, j) = restrict_at(xi.at(i, j), at, sc);
        std::vector<Scalar> dv;
        for (size_t m = 0; m < k; ++m) dv.push_back(restrict_at(dvals[m], at, sc));
        for (const auto& c : nullspace(xs)) {
            Scalar val = Scalar::zero(sc);
            for (size_t m = 0; m < k; ++m) val = val + c[m] * dv[m];
            if (!val.is_zero())
                fail(Errc::NotInDomain,
                     "coefficient is not covariantly constant along a kernel direction at locus " +
                         point_str(at));
        }
    }
    AdmissibleResult ar = base_admissible(D.data, g);
    Scalar acc = Scalar::zero(P);
    for (size_t m = 0; m < k; ++m) acc = acc + ar.coeffs[m] * dvals[m];
    Scalar out = -(acc + Scalar::tau(P) * g * h);
    return make_graded({{-1, out}});
}

ExpAdmissibleResult exp_admissible_solve(const DiracJacobiStructure& S, const std::string& fiber,
                                         const GradedExpTerm& t) {
    const StructureFrame& fr = S.frame;
    const ChartPtr& Q = fr.chart();
    if (!fr.extended()) fail(Errc::KindMismatch, "graded admissibility needs extended sections");
    if (Q->coord_index(fiber) < 0) fail(Errc::UnknownCoordinate, fiber);
    require_same_chart(Q, t.v.chart(), "exp_admissible_solve");
    require_same_chart(Q, t.phase.chart(), "exp_admissible_solve");
    if (!t.v.diff(fiber).is_zero() || !t.phase.diff(fiber).is_zero())
        fail(Errc::ValidationError, "graded coefficient and phase must be fiber-independent");
    Scalar ntv = Scalar::tau(Q) * Scalar::rational(Q, Rat(t.grade)) * t.v;
    KForm xi = d(t.v) + (KForm::d_coord(Q, fiber) + d(t.phase)).scaled(ntv);
    size_t n = Q->dim();
    std::vector<Scalar> rhs;
    for (size_t i = 0; i < n; ++i) rhs.push_back(xi.coeff({(uint32_t)i}));
    rhs.push_back(t.v);
    auto c = solve(xig_cols(fr), rhs);
    if (!c)
        fail(Errc::NoSolutionOverFractionField,
             "graded admissibility system has no solution for " + t.v.str());
    ExpAdmissibleResult res(Q);
    res.coeffs = *c;
    for (size_t j = 0; j < fr.size(); ++j) {
        res.X = res.X + fr.at(j).X.scaled((*c)[j]);
        res.phi = res.phi + (*c)[j] * fr.at(j).f;
    }
    certify_components(res.X, res.phi, res.certified, res.refused, res.witness);
    return res;
}

GradedExpTerm graded_exp_bracket(const DiracJacobiStructure& S, const std::string& fiber,
                                 const GradedExpTerm& a, const GradedExpTerm& b) {
    if (!(a.phase == b.phase)) fail(Errc::ValidationError, "graded bracket requires a common phase");
    ExpAdmissibleResult ra = exp_admissible_solve(S, fiber, a);
    if (!ra.certified) fail(Errc::NotAdmissible, "first argument, denominator " + ra.refused);
    ExpAdmissibleResult rb = exp_admissible_solve(S, fiber, b);
    if (!rb.certified) fail(Errc::NotAdmissible, "second argument, denominator " + rb.refused);
    const ChartPtr& Q = S.frame.chart();
    uint32_t fx = (uint32_t)Q->coord_index(fiber);
    Scalar fiber_comp = rb.X.coeff({fx});
    Scalar val = apply_vec(rb.X, a.v) +
                 Scalar::tau(Q) * Scalar::rational(Q, Rat(a.grade)) * a.v *
                     (fiber_comp + apply_vec(rb.X, a.phase)) +
                 a.v * rb.phi;
    return GradedExpTerm{val, a.grade + b.grade, a.phase};
}

} // namespace dj
