#include "doctest.h"

#include "dj/djacobi.hpp"
#include "dj/error.hpp"
#include "dj/expr.hpp"
#include "gen.hpp"

using namespace dj;
using djtest::Rng;

namespace {
ChartPtr uqp() { return Chart::make("uqp", {{"u"}, {"q"}, {"p"}}); }
ChartPtr xyz() { return Chart::make("xyz", {{"x"}, {"y"}, {"z"}}); }
Scalar S(const ChartPtr& c, const std::string& e) { return parse_scalar(e, c); }
KForm df(const ChartPtr& c, const std::string& n) { return KForm::d_coord(c, n); }
KVector dd(const ChartPtr& c, const std::string& n) { return KVector::basis(c, n); }

// du + p dq and its induced bivector/vector pair on the chart (u,q,p).
KForm contact_form(const ChartPtr& c) { return df(c, "u") + df(c, "q").scaled(S(c, "p")); }

KVector contact_bivector(const ChartPtr& c) {
    KVector lam = KVector::zero(c, 2);
    lam.add_term({0, 2}, S(c, "p"));  // p @u^@p
    lam.add_term({1, 2}, S(c, "-1")); // -@q^@p
    return lam;
}

// x1^2 dx1^dx2 graph lifted to extended sections, degenerate along x1 = 0.
DiracJacobiStructure lifted_degenerate_line() {
    auto c = Chart::make("x12", {{"x1"}, {"x2"}});
    KForm w = wedge(df(c, "x1"), df(c, "x2")).scaled(S(c, "x1^2"));
    return dj_from_dirac(graph_two_form(w, {{{"x1", Rat(0)}}}));
}
} // namespace

TEST_CASE("graphs of pairs on both sides") {
    auto c = uqp();
    auto jac = dj_graph_jacobi(contact_bivector(c), dd(c, "u"));
    CHECK(jac.frame.size() == 4);
    CHECK(jac.frame.at(0) ==
          e1_section(dd(c, "p").scaled(S(c, "-p")), S(c, "1"), df(c, "u"), S(c, "0")));
    CHECK(jac.frame.at(1) == e1_section(dd(c, "p"), S(c, "0"), df(c, "q"), S(c, "0")));
    CHECK(jac.frame.at(2) == e1_section(dd(c, "u").scaled(S(c, "p")) - dd(c, "q"), S(c, "0"),
                                        df(c, "p"), S(c, "0")));
    CHECK(jac.frame.at(3) ==
          e1_section(-dd(c, "u"), S(c, "0"), KForm::zero(c, 1), S(c, "1")));

    KForm sig = contact_form(c);
    auto fp = dj_graph_form_pair(d(sig), sig);
    CHECK(fp.frame.size() == 4);
    CHECK(fp.frame.at(0) == e1_section(dd(c, "u"), S(c, "0"), KForm::zero(c, 1), S(c, "-1")));
    CHECK(fp.frame.at(1) ==
          e1_section(dd(c, "q"), S(c, "0"), df(c, "p").scaled(S(c, "-1")), S(c, "-p")));
    CHECK(fp.frame.at(2) == e1_section(dd(c, "p"), S(c, "0"), df(c, "q"), S(c, "0")));
    CHECK(fp.frame.at(3) == e1_section(KVector::zero(c, 1), S(c, "1"), sig, S(c, "0")));

    auto lift = lifted_degenerate_line();
    CHECK(lift.frame.size() == 3);
    CHECK(lift.frame.extended());
    CHECK(lift.loci.size() == 1);

    CHECK_THROWS_WITH_AS(make_dj(graph_two_form(wedge(df(c, "u"), df(c, "q"))).frame),
                         doctest::Contains("extended"), Error);
    CHECK_THROWS_AS(dj_graph_jacobi(contact_bivector(c), contact_bivector(c)), Error);
    CHECK_THROWS_AS(dj_graph_form_pair(sig, sig), Error);
}

TEST_CASE("integrability of graphs matches the side conditions") {
    auto c = uqp();
    CHECK(!integrability_witness(dj_graph_jacobi(contact_bivector(c), dd(c, "u")).frame));
    KForm sig = contact_form(c);
    CHECK(!integrability_witness(dj_graph_form_pair(d(sig), sig).frame));

    // A 2-form paired with a non-primitive for it fails.
    CHECK(integrability_witness(dj_graph_form_pair(KForm::zero(c, 2), sig).frame));

    auto z = xyz();
    KVector l3 = KVector::zero(z, 2);
    l3.add_term({0, 1}, S(z, "1"));
    // Constant bivector with a companion inside its own span passes ...
    CHECK(!integrability_witness(dj_graph_jacobi(l3, dd(z, "x")).frame));
    // ... while a transverse companion breaks the compatibility equation,
    CHECK(integrability_witness(dj_graph_jacobi(l3, dd(z, "z")).frame));
    // and a quadratic bivector failing the closure equation is caught too.
    KVector bad = KVector::zero(z, 2);
    bad.add_term({0, 1}, S(z, "y"));
    bad.add_term({0, 2}, S(z, "-x"));
    CHECK(integrability_witness(dj_graph_jacobi(bad, KVector::zero(z, 1)).frame));

    // Zero bivector with a nonzero companion field.
    auto ts = Chart::make("ts", {{"t"}, {"s"}});
    CHECK(!integrability_witness(
        dj_graph_jacobi(KVector::zero(ts, 2), dd(ts, "t")).frame));

    // Extending a plain structure preserves integrability.
    auto xy = Chart::make("xy", {{"x"}, {"y"}});
    CHECK(!integrability_witness(
        dj_from_dirac(graph_two_form(wedge(df(xy, "x"), df(xy, "y")))).frame));
}

TEST_CASE("regraphing between the two graph presentations") {
    auto c = uqp();
    KForm sig = contact_form(c);

    JacobiPair jp = regraph_jacobi(dj_graph_form_pair(d(sig), sig));
    CHECK(jp.lam == contact_bivector(c));
    CHECK(jp.E == dd(c, "u"));
    CHECK(span_equal(dj_graph_jacobi(jp.lam, jp.E).frame,
                     dj_graph_form_pair(d(sig), sig).frame)
              .equal);

    FormPair fp = regraph_form_pair(dj_graph_jacobi(contact_bivector(c), dd(c, "u")));
    CHECK(fp.omega == d(sig));
    CHECK(fp.sigma == sig);

    // Extended lift of a symplectic graph re-presents as its inverse bivector.
    auto xy = Chart::make("xy", {{"x"}, {"y"}});
    JacobiPair inv =
        regraph_jacobi(dj_from_dirac(graph_two_form(wedge(df(xy, "x"), df(xy, "y")))));
    KVector dxy = wedge(dd(xy, "x"), dd(xy, "y"));
    CHECK(inv.lam == dxy);
    CHECK(inv.E == KVector::zero(xy, 1));

    // Zero form block: nothing to invert.
    CHECK_THROWS_WITH_AS(regraph_jacobi(dj_from_dirac(graph_two_form(KForm::zero(xy, 2)))),
                         doctest::Contains("determinant"), Error);
    // Vector block of a bivector-style lift is singular as well.
    KVector l2 = KVector::zero(xy, 2);
    l2.add_term({0, 1}, S(xy, "1"));
    CHECK_THROWS_AS(regraph_form_pair(dj_from_dirac(graph_bivector(l2))), Error);

    // Coordinate-scaled pair: determinant u^4 is not a certified unit.
    try {
        regraph_form_pair(dj_graph_jacobi(contact_bivector(c).scaled(S(c, "u")),
                                          dd(c, "u").scaled(S(c, "u"))));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::RegraphNotInvertible);
        CHECK(std::string(e.what()).find("vanishes at") != std::string::npos);
    }
}

TEST_CASE("normalized kernel field of a contact form") {
    auto c = uqp();
    CHECK(reeb_solve(contact_form(c)) == dd(c, "u"));

    auto xyt = Chart::make("xyt", {{"x"}, {"y"}, {"th"}});
    KForm sig2 = df(xyt, "th") + df(xyt, "y").scaled(S(xyt, "x"));
    CHECK(reeb_solve(sig2) == dd(xyt, "th"));

    try {
        reeb_solve(df(c, "u"));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotContact);
    }
    auto xy = Chart::make("xy", {{"x"}, {"y"}});
    CHECK_THROWS_WITH_AS(reeb_solve(df(xy, "x")), doctest::Contains("odd"), Error);
    CHECK_THROWS_AS(reeb_solve(KForm::zero(c, 2)), Error);
}

TEST_CASE("admissible pairs against the closed-form images") {
    auto c = uqp();
    auto S1 = dj_graph_jacobi(contact_bivector(c), dd(c, "u"));

    DjAdmissibleResult one = dj_admissible_solve(S1, S(c, "1"));
    CHECK(one.certified);
    CHECK(one.X == -dd(c, "u"));
    CHECK(one.phi == S(c, "0"));

    Rng rng(407);
    for (int rep = 0; rep < 5; ++rep) {
        Scalar f = rng.poly(c);
        DjAdmissibleResult r = dj_admissible_solve(S1, f);
        CHECK(r.certified);
        CHECK(r.X == lambda_tilde(contact_bivector(c), d(f)) - dd(c, "u").scaled(f));
        CHECK(r.phi == apply_vec(dd(c, "u"), f));
    }

    auto lift = lifted_degenerate_line();
    auto lc = lift.frame.chart();
    DjAdmissibleResult bad = dj_admissible_solve(lift, S(lc, "x1^2"));
    CHECK(!bad.certified);
    CHECK(bad.refused == "x1");
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->at("x1") == Rat(0));
    CHECK(bad.X == dd(lc, "x2").scaled(S(lc, "-2/x1")));
    CHECK(bad.phi == S(lc, "0"));

    auto plane = Chart::make("plane", {{"x"}, {"y"}});
    auto flat = dj_from_dirac(graph_two_form(KForm::zero(plane, 2)));
    CHECK_THROWS_AS(dj_admissible_solve(flat, S(plane, "x")), Error);
}

TEST_CASE("scalar bracket from admissible pairs") {
    auto c = uqp();
    auto S1 = dj_graph_jacobi(contact_bivector(c), dd(c, "u"));
    KVector lam = contact_bivector(c);
    KVector E = dd(c, "u");

    Rng rng(408);
    for (int rep = 0; rep < 5; ++rep) {
        Scalar f = rng.poly(c), g = rng.poly(c);
        Scalar fg = dj_bracket(S1, f, g);
        CHECK(fg == biv_eval(lam, d(f), d(g)) + f * apply_vec(E, g) - g * apply_vec(E, f));
        CHECK(dj_bracket(S1, g, f) == -fg);
        CHECK(dj_bracket(S1, f, f) == S(c, "0"));
    }

    // With a vanishing companion field the bracket is the plain bivector one.
    auto xy = Chart::make("xy", {{"x"}, {"y"}});
    KVector l2 = KVector::zero(xy, 2);
    l2.add_term({0, 1}, S(xy, "1"));
    auto S2 = dj_graph_jacobi(l2, KVector::zero(xy, 1));
    auto D2 = graph_bivector(l2);
    CHECK(dj_bracket(S2, S(xy, "x"), S(xy, "y")) == S(xy, "1"));
    for (int rep = 0; rep < 3; ++rep) {
        Scalar f = rng.poly(xy), g = rng.poly(xy);
        CHECK(dj_bracket(S2, f, g) == adm_bracket(D2, f, g));
    }

    auto lift = lifted_degenerate_line();
    CHECK_THROWS_WITH_AS(dj_bracket(lift, S(lift.frame.chart(), "x1^2"),
                                    S(lift.frame.chart(), "x2+3")),
                         doctest::Contains("first argument"), Error);
}

TEST_CASE("bracket satisfies the Jacobi identity") {
    auto c = uqp();
    auto S1 = dj_graph_jacobi(contact_bivector(c), dd(c, "u"));
    Rng rng(409);
    auto residual = [&](const DiracJacobiStructure& S, const Scalar& f, const Scalar& g,
                        const Scalar& h) {
        return dj_bracket(S, dj_bracket(S, f, g), h) + dj_bracket(S, dj_bracket(S, g, h), f) +
               dj_bracket(S, dj_bracket(S, h, f), g);
    };
    for (int rep = 0; rep < 5; ++rep) {
        Scalar f = rng.poly(c, 2), g = rng.poly(c, 2), h = rng.poly(c, 2);
        CHECK(residual(S1, f, g, h).is_zero());
    }

    auto z = xyz();
    KVector l3 = KVector::zero(z, 2);
    l3.add_term({0, 1}, S(z, "1"));
    auto S3 = dj_graph_jacobi(l3, dd(z, "x"));
    for (int rep = 0; rep < 3; ++rep) {
        Scalar f = rng.poly(z, 2), g = rng.poly(z, 2), h = rng.poly(z, 2);
        CHECK(residual(S3, f, g, h).is_zero());
    }
}

TEST_CASE("invariant scalars and their bracket with admissible ones") {
    auto lift = lifted_degenerate_line();
    auto c = lift.frame.chart();

    CHECK(dj_is_basic(lift, S(c, "x1^2*(1+x2)")).basic);
    CHECK(dj_is_basic(lift, S(c, "5")).basic);
    BasicResult nb = dj_is_basic(lift, S(c, "x2"));
    CHECK(!nb.basic);
    REQUIRE(nb.witness.has_value());
    CHECK(nb.witness->at("x1") == Rat(0));

    Scalar psi = S(c, "x1^2*(1+x2)");
    Scalar h = S(c, "x1^4");
    Scalar bh = dj_basic_bracket(lift, psi, h);
    CHECK(bh == S(c, "-4*x1^3"));
    CHECK(dj_is_basic(lift, bh).basic);

    CHECK_THROWS_WITH_AS(dj_basic_bracket(lift, S(c, "x2"), h),
                         doctest::Contains("first argument"), Error);
    CHECK_THROWS_WITH_AS(dj_basic_bracket(lift, psi, S(c, "x1^2")),
                         doctest::Contains("second argument"), Error);

    // Cyclic sum with one invariant slot vanishes identically.
    Scalar f = S(c, "3+x1^3*x2");
    Scalar g = S(c, "x1^4+x1^3");
    Scalar t1 = -dj_basic_bracket(lift, psi, dj_bracket(lift, f, g));
    Scalar t2 = dj_basic_bracket(lift, -dj_basic_bracket(lift, psi, g), f);
    Scalar t3 = dj_basic_bracket(lift, dj_basic_bracket(lift, psi, f), g);
    CHECK((t1 + t2 + t3).is_zero());
}

TEST_CASE("line extension of a structure") {
    auto c = uqp();
    auto S1 = dj_graph_jacobi(contact_bivector(c), dd(c, "u"));
    Diracization dir = diracization(S1);
    CHECK(dir.fiber_coord == "t");
    CHECK(dir.fiber_unit == "et");
    auto ec = dir.structure.frame.chart();
    CHECK(ec->dim() == 4);
    CHECK(!dir.structure.frame.extended());
    CHECK(!integrability_witness(dir.structure.frame));

    // The extension is the graph of d of the weighted contact form.
    Scalar et = Scalar::generator(ec, "et");
    KForm sig_ext = df(ec, "u") + df(ec, "q").scaled(S(ec, "p"));
    auto target = graph_two_form(d(sig_ext.scaled(et)));
    SpanCompare cmp = span_equal(dir.structure.frame, target.frame);
    CHECK(cmp.equal);

    // Weighted functions bracket like their originals.
    Rng rng(410);
    for (int rep = 0; rep < 5; ++rep) {
        Scalar f = rng.poly(c, 2), g = rng.poly(c, 2);
        Scalar lhs = adm_bracket(dir.structure, et * subst(f, ec, {}), et * subst(g, ec, {}));
        CHECK(lhs == et * subst(dj_bracket(S1, f, g), ec, {}));
    }

    // Extending a lifted plain structure and cutting the extra direction
    // recovers the original sections.
    auto lift = lifted_degenerate_line();
    auto base = lift.frame.chart();
    Diracization dl = diracization(lift);
    REQUIRE(dl.structure.frame.size() == 3);
    uint32_t fi = (uint32_t)base->dim(); // fiber coordinate index
    RatPoint cut{{dl.fiber_coord, Rat(0)}};
    auto at0 = [&](const Scalar& s) { return restrict_at(s, cut, base); };
    for (size_t j = 0; j + 1 < dl.structure.frame.size(); ++j) {
        const Section& e = dl.structure.frame.at(j);
        const Section& orig = lift.frame.at(j);
        for (uint32_t i = 0; i < base->dim(); ++i) {
            CHECK(at0(e.X.coeff({i})) == orig.X.coeff({i}));
            CHECK(at0(e.xi.coeff({i})) == orig.xi.coeff({i}));
        }
        CHECK(at0(e.X.coeff({fi})).is_zero());
        CHECK(at0(e.xi.coeff({fi})).is_zero());
    }
    const Section& last = dl.structure.frame.at(2);
    CHECK(last.X.is_zero());
    CHECK(at0(last.xi.coeff({fi})) == Scalar::one(base));
    CHECK(dl.structure.loci == lift.loci);
}
