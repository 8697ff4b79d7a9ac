#include "doctest.h"

#include "dj/error.hpp"
#include "dj/expr.hpp"
#include "dj/kform.hpp"
#include "gen.hpp"

using namespace dj;
using djtest::Rng;

namespace {
ChartPtr xy() { return Chart::make("xy", {{"x"}, {"y"}}); }
ChartPtr xyz() { return Chart::make("xyz", {{"x"}, {"y"}, {"z"}}); }
Scalar S(const ChartPtr& c, const std::string& e) { return parse_scalar(e, c); }
KForm df(const ChartPtr& c, const std::string& n) { return KForm::d_coord(c, n); }
KVector dd(const ChartPtr& c, const std::string& n) { return KVector::basis(c, n); }
} // namespace

TEST_CASE("exterior derivative and contraction basics") {
    auto c = xy();
    // d(x dy) = dx^dy
    KForm xdy = df(c, "y").scaled(S(c, "x"));
    CHECK(d(xdy) == wedge(df(c, "x"), df(c, "y")));
    // i_dx (dx^dy) = dy
    CHECK(contract(dd(c, "x"), wedge(df(c, "x"), df(c, "y"))) == df(c, "y"));
    // antisymmetry through add_term index normalization
    KForm w = KForm::zero(c, 2);
    w.add_term({1, 0}, S(c, "1"));
    CHECK(w == wedge(df(c, "x"), df(c, "y")).scaled(S(c, "-1")));
}

TEST_CASE("d(s*sigma) on the cone chart") {
    auto c = Chart::make("cone", {{"u"}, {"q"}, {"p"}, {"s"}});
    KForm sigma = df(c, "u") + df(c, "q").scaled(S(c, "p"));
    KForm w = d(sigma.scaled(S(c, "s")));
    KForm expect = wedge(df(c, "s"), sigma) + wedge(df(c, "p"), df(c, "q")).scaled(S(c, "s"));
    CHECK(w == expect);
}

TEST_CASE("Lie derivative and bracket") {
    auto c = xy();
    // L_dx (x dy) = dy
    CHECK(lie_derivative(dd(c, "x"), df(c, "y").scaled(S(c, "x"))) == df(c, "y"));
    // [dx, x dy] = dy
    CHECK(lie_bracket(dd(c, "x"), dd(c, "y").scaled(S(c, "x"))) == dd(c, "y"));
    // scaling vector field on a weighted bivector: L_{t@t}(t L0) = t L0
    auto h = Chart::make("h", {{"t"}, {"a"}, {"b"}});
    KVector l0 = wedge(dd(h, "a"), dd(h, "b")).scaled(S(h, "t"));
    KVector tdt = dd(h, "t").scaled(S(h, "t"));
    CHECK(lie_derivative(tdt, l0) == l0);
    // equivalently t L0 + [-t@t, t L0] = 0
    CHECK((l0 + lie_derivative(-tdt, l0)).is_zero());
}

TEST_CASE("bivector contraction convention") {
    auto c = xy();
    KVector lam = wedge(dd(c, "x"), dd(c, "y"));
    CHECK(lambda_tilde(lam, df(c, "x")) == -dd(c, "y"));
    CHECK(lambda_tilde(lam, df(c, "y")) == dd(c, "x"));
    CHECK(biv_eval(lam, df(c, "x"), df(c, "y")) == S(c, "1"));
    CHECK(eval2(wedge(df(c, "x"), df(c, "y")), dd(c, "x"), dd(c, "y")) == S(c, "1"));
}

TEST_CASE("degree cap on multivectors") {
    auto c = xyz();
    KVector biv = wedge(dd(c, "x"), dd(c, "y"));
    CHECK_THROWS_AS(wedge(biv, dd(c, "z")), Error);
    CHECK_THROWS_AS(KVector::zero(c, 3), Error);
    // forms go up to chart dimension
    KForm top = wedge(wedge(df(c, "x"), df(c, "y")), df(c, "z"));
    CHECK(!top.is_zero());
    CHECK_THROWS_AS(wedge(top, df(c, "x")), Error);
}

TEST_CASE("transport across a rational chart map") {
    auto sc = Chart::make("schart", {{"u"}, {"q"}, {"p"}, {"s", false, true}});
    auto rc = Chart::make("rchart", {{"u"}, {"q"}, {"p"}, {"r", false, true}});
    Bindings s_in_r = {{"u", S(rc, "u")}, {"q", S(rc, "q")}, {"p", S(rc, "p")}, {"s", S(rc, "1/r")}};
    Bindings r_in_s = {{"u", S(sc, "u")}, {"q", S(sc, "q")}, {"p", S(sc, "p")}, {"r", S(sc, "1/s")}};
    ChartMap map = make_chart_map(sc, rc, s_in_r, r_in_s);

    // pushforward of @s is -r^2 @r
    CHECK(transport(dd(sc, "s"), map) == dd(rc, "r").scaled(S(rc, "-r^2")));

    // pullback of d(s sigma) is d(r^-1 (du + p dq))
    KForm sigma_s = df(sc, "u") + df(sc, "q").scaled(S(sc, "p"));
    KForm w = d(sigma_s.scaled(S(sc, "s")));
    KForm sigma_r = df(rc, "u") + df(rc, "q").scaled(S(rc, "p"));
    CHECK(transport(w, map) == d(sigma_r.scaled(S(rc, "1/r"))));

    // identity map transports identically
    Bindings id_s;
    for (uint32_t i = 0; i < sc->dim(); ++i)
        id_s[sc->coord(i).name] = Scalar::generator(sc, sc->coord(i).name);
    ChartMap idm = make_chart_map(sc, sc, id_s, id_s);
    CHECK(transport(w, idm) == w);
    KVector v = dd(sc, "p").scaled(S(sc, "s*p"));
    CHECK(transport(v, idm) == v);

    // a non-inverse pair is rejected
    Bindings wrong = r_in_s;
    wrong["r"] = S(sc, "s");
    CHECK_THROWS_AS(make_chart_map(sc, rc, s_in_r, wrong), Error);

    // denominators must be certified on the target
    auto plain = Chart::make("plain", {{"u"}, {"q"}, {"p"}, {"r"}});
    Bindings s_in_plain = {{"u", S(plain, "u")}, {"q", S(plain, "q")}, {"p", S(plain, "p")}, {"s", S(plain, "1/r")}};
    Bindings plain_in_s = {{"u", S(sc, "u")}, {"q", S(sc, "q")}, {"p", S(sc, "p")}, {"r", S(sc, "1/s")}};
    CHECK_THROWS_AS(make_chart_map(sc, plain, s_in_plain, plain_in_s), Error);
}

TEST_CASE("d is a differential and Lie derivative is a derivation") {
    Rng rng(20240817);
    auto c = Chart::make("five", {{"x"}, {"y"}, {"z"}, {"v"}, {"w"}});
    for (uint32_t deg = 0; deg <= 3; ++deg)
        for (int rep = 0; rep < 50; ++rep) {
            KForm w = rng.form(c, deg);
            CHECK(d(d(w)).is_zero());
        }
    auto c3 = xyz();
    for (int rep = 0; rep < 10; ++rep) {
        KVector x = rng.vec(c3);
        KForm a = rng.form(c3, 1);
        KForm b = rng.form(c3, 1);
        CHECK(lie_derivative(x, wedge(a, b)) ==
              wedge(lie_derivative(x, a), b) + wedge(a, lie_derivative(x, b)));
    }
}

TEST_CASE("vector bracket satisfies the Jacobi identity") {
    Rng rng(77);
    auto c = xyz();
    for (int rep = 0; rep < 8; ++rep) {
        KVector x = rng.vec(c), y = rng.vec(c), z = rng.vec(c);
        KVector j = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) +
                    lie_bracket(z, lie_bracket(x, y));
        CHECK(j.is_zero());
    }
}
