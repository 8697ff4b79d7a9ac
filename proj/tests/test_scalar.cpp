#include "doctest.h"

#include "dj/error.hpp"
#include "dj/expr.hpp"
#include "dj/scalar.hpp"

using namespace dj;

namespace {

ChartPtr plane() {
    return Chart::make("plane", {{"x"}, {"y"}});
}

ChartPtr halfline() {
    return Chart::make("halfline", {{"t", false, true}}, {{"et", "t", Rat(1)}});
}

Scalar S(const ChartPtr& c, const std::string& e) { return parse_scalar(e, c); }

} // namespace

TEST_CASE("gaussian rational field") {
    GQ a(Rat(1), Rat(1)), b(Rat(1), Rat(-1));
    CHECK(a * b == GQ(2));
    CHECK(GQ::i() * GQ::i() == GQ(-1));
    CHECK((a / b) * b == a);
    CHECK_THROWS_AS(GQ(0).inv(), Error);
    CHECK(gq_str(GQ(Rat(1), Rat(-2, 3))) == "1-2/3*i");
}

TEST_CASE("scalar canonical fractions") {
    auto c = plane();
    Scalar x = S(c, "x"), y = S(c, "y");

    // gcd cancellation yields the canonical representative
    Scalar r = (x * x - Scalar::one(c)) / (x - Scalar::one(c));
    CHECK(r == x + Scalar::one(c));

    // denominator is monic under graded lex
    Scalar h = Scalar::one(c) / (S(c, "2") * x);
    CHECK(h.den() == x.num());
    CHECK(h.num().constant_value() == GQ(Rat(1, 2)));

    Scalar big = ((x + y).pow(2) * (x - y)) / ((x + y) * (x - y).pow(2) * S(c, "3"));
    CHECK(big * (x - y) * S(c, "3") == (x + y));

    CHECK_THROWS_AS(x / Scalar::zero(c), Error);
    CHECK((x - x).is_zero());
    CHECK(x.pow(-2) * x.pow(2) == Scalar::one(c));
}

TEST_CASE("tau stays formal") {
    auto c = plane();
    Scalar t = Scalar::tau(c);
    CHECK((t * t).str() == "tau^2");
    CHECK(t * t / t == t);
    CHECK(t != Scalar::constant(c, GQ(Rat(0), Rat(2)))); // never expanded to 2*pi*i
}

TEST_CASE("derivatives with quotient rule and exp units") {
    auto c = plane();
    Scalar x = S(c, "x"), y = S(c, "y");
    CHECK((x * x * y).diff("x") == S(c, "2*x*y"));
    CHECK((Scalar::one(c) / x).diff("x") == S(c, "-1/x^2"));
    CHECK((x / y).diff("y") == S(c, "-x/y^2"));
    CHECK_THROWS_AS(x.diff("z"), Error);

    auto h = halfline();
    Scalar t = S(h, "t"), u = S(h, "et");
    CHECK(u.diff("t") == u);
    CHECK((u * u).diff("t") == S(h, "2*et^2"));
    CHECK((t * u).diff("t") == u + t * u);
    CHECK((Scalar::one(h) / u).diff("t") == -(Scalar::one(h) / u));
}

TEST_CASE("substitution") {
    auto c = plane();
    auto b = Chart::make("B", {{"u"}, {"y"}});
    Scalar f = S(c, "x^2+y");
    Scalar img = subst(f, b, {{"x", S(b, "u+1")}});
    CHECK(img == S(b, "u^2+2*u+1+y"));

    // unbound coordinate must exist on the target
    auto only_u = Chart::make("U", {{"u"}});
    CHECK_THROWS_AS(subst(f, only_u, {{"x", S(only_u, "u")}}), Error);

    // denominator killed by the binding
    Scalar g = S(c, "1/x");
    CHECK_THROWS_AS(subst(g, b, {{"x", Scalar::zero(b)}}), Error);
}

TEST_CASE("exp unit substitution rules") {
    auto h = halfline();
    Scalar u = S(h, "et");

    // base frozen at zero: unit collapses to 1 (unflagged base so 0 is in domain)
    auto line = Chart::make("line", {{"t"}}, {{"et", "t", Rat(1)}});
    Scalar ul = S(line, "et");
    auto fiber = line->sliced({{"t", Rat(0)}});
    CHECK(restrict_at(ul + ul, {{"t", Rat(0)}}, fiber) == S(fiber, "2"));

    // base frozen at a nonzero rational: residue symbol on the slice chart
    auto fib2 = h->sliced({{"t", Rat(2)}});
    CHECK(fib2->coord_index("et") == 0);
    CHECK(fib2->coord(0).positive);
    Scalar r = restrict_at(u * u, {{"t", Rat(2)}}, fib2);
    CHECK(r == S(fib2, "et^2"));

    // base renamed to a coordinate with a matching-rate unit
    auto h2 = Chart::make("H2", {{"s", false, true}}, {{"es", "s", Rat(1)}});
    CHECK(subst(u, h2, {{"t", S(h2, "s")}}) == S(h2, "es"));

    // binding that breaks the relation
    auto bare = Chart::make("bare", {{"s"}});
    CHECK_THROWS_AS(subst(u, bare, {{"t", S(bare, "s")}}), Error);
    CHECK_THROWS_AS(subst(u, bare, {{"t", S(bare, "5")}}), Error);

    // positivity violated
    auto hfiber = h->sliced({{"t", Rat(1)}});
    CHECK_THROWS_AS(restrict_at(u, {{"t", Rat(-1)}}, hfiber), Error);
}

TEST_CASE("unit certification verdicts") {
    auto h = halfline();
    CHECK(unit_certify(S(h, "6")).ok());
    CHECK(unit_certify(S(h, "tau")).ok());
    CHECK(unit_certify(S(h, "t^2*et")).ok());
    CHECK(unit_certify(S(h, "1/(t*et)")).ok());
    CHECK(unit_certify(S(h, "1+t")).ok());          // positivity fragment
    CHECK(unit_certify(S(h, "-1-t^2")).ok());       // negative branch
    // et-1 is positive for t>0 but mixes coefficient signs, so no certificate
    CHECK(unit_certify(S(h, "et-1")).status == CertStatus::NoCertificate);

    auto c = plane();
    auto rx = unit_certify(S(c, "x"));
    CHECK(rx.status == CertStatus::Refused);
    CHECK(rx.offending == "x");
    REQUIRE(rx.witness.has_value());
    CHECK(rx.witness->at("x") == 0);

    auto rsum = unit_certify(S(c, "x^2+y^2"));
    CHECK(rsum.status == CertStatus::Refused);
    REQUIRE(rsum.witness.has_value());
    CHECK(rsum.witness->at("x") == 0);
    CHECK(rsum.witness->at("y") == 0);

    CHECK(unit_certify(S(c, "1+x^2")).status == CertStatus::NoCertificate);
}

TEST_CASE("expression parser") {
    auto c = plane();
    CHECK(S(c, " ( x + y ) ^ 2 ") == S(c, "x^2+2*x*y+y^2"));
    CHECK(S(c, "i*i") == S(c, "-1"));
    CHECK(S(c, "x^-2") * S(c, "x^2") == Scalar::one(c));
    CHECK(S(c, "3/2") == Scalar::rational(c, Rat(3, 2)));
    CHECK(S(c, "-x/-y") == S(c, "x/y"));
    CHECK_THROWS_AS(S(c, "x +"), Error);
    CHECK_THROWS_AS(S(c, "q"), Error);
    CHECK_THROWS_AS(S(c, "x^y"), Error);
    CHECK_THROWS_AS(S(c, "1/(x-x)"), Error);
}

TEST_CASE("point evaluation") {
    auto c = plane();
    auto fiber = c->sliced({{"x", Rat(2)}, {"y", Rat(3)}});
    Scalar v = eval_at(S(c, "(x^2+y)/(x-1)"), {{"x", Rat(2)}, {"y", Rat(3)}}, fiber);
    CHECK(v == Scalar::rational(fiber, Rat(7)));
    CHECK_THROWS_AS(eval_at(S(c, "x"), {{"x", Rat(1)}}, fiber), Error); // y unbound

    auto slice = c->sliced({{"x", Rat(0)}});
    CHECK(restrict_at(S(c, "x*y"), {{"x", Rat(0)}}, slice).is_zero());
}

TEST_CASE("nonvanishing point search") {
    auto c = plane();
    auto p = find_point_nonzero(S(c, "x*y-1"));
    REQUIRE(p.has_value());
    CHECK(p->at("x") * p->at("y") != 1);
    CHECK(!find_point_nonzero(Scalar::zero(c)).has_value());
    auto q = find_point_nonzero(S(c, "y"), {{"x", Rat(5)}});
    REQUIRE(q.has_value());
    CHECK(q->at("x") == 5);
    CHECK(q->at("y") != 0);
}
