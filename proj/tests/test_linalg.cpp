#include "doctest.h"

#include "dj/error.hpp"
#include "dj/expr.hpp"
#include "dj/linalg.hpp"

using namespace dj;

namespace {
ChartPtr xy() { return Chart::make("xy", {{"x"}, {"y"}}); }
Scalar S(const ChartPtr& c, const std::string& e) { return parse_scalar(e, c); }
} // namespace

TEST_CASE("rref, rank, nullspace over the fraction field") {
    auto c = xy();
    Mat m = Mat::from_rows(c, {{S(c, "1"), S(c, "2")}, {S(c, "2"), S(c, "4")}});
    CHECK(rank_generic(m) == 1);
    auto ker = nullspace(m);
    REQUIRE(ker.size() == 1);
    CHECK(ker[0][0] == S(c, "-2"));
    CHECK(ker[0][1] == S(c, "1"));

    Mat sym = Mat::from_rows(c, {{S(c, "x"), S(c, "x^2")}, {S(c, "1"), S(c, "x")}});
    CHECK(rank_generic(sym) == 1); // second row is 1/x times the first
    auto ker2 = nullspace(sym);
    REQUIRE(ker2.size() == 1);
    // x * v0 + x^2 * v1 = 0
    CHECK((S(c, "x") * ker2[0][0] + S(c, "x^2") * ker2[0][1]).is_zero());
}

TEST_CASE("solve with free variables pinned to zero") {
    auto c = xy();
    Mat m = Mat::from_rows(c, {{S(c, "1"), S(c, "1"), S(c, "0")},
                               {S(c, "0"), S(c, "x"), S(c, "1")}});
    auto x = solve(m, {S(c, "3"), S(c, "x")});
    REQUIRE(x.has_value());
    // check m x = b
    CHECK(((*x)[0] + (*x)[1]) == S(c, "3"));
    CHECK((S(c, "x") * (*x)[1] + (*x)[2]) == S(c, "x"));

    Mat bad = Mat::from_rows(c, {{S(c, "1"), S(c, "2")}, {S(c, "2"), S(c, "4")}});
    CHECK(!solve(bad, {S(c, "1"), S(c, "3")}).has_value());
}

TEST_CASE("determinant") {
    auto c = xy();
    Mat m = Mat::from_rows(c, {{S(c, "x"), S(c, "1")}, {S(c, "y"), S(c, "x")}});
    CHECK(det(m) == S(c, "x^2-y"));
    Mat sing = Mat::from_rows(c, {{S(c, "1"), S(c, "2")}, {S(c, "2"), S(c, "4")}});
    CHECK(det(sing).is_zero());
    CHECK(det(Mat::identity(c, 3)) == S(c, "1"));
}

TEST_CASE("pivot certification tracks domain-wide rank") {
    auto plain = xy();
    Mat m1 = Mat::from_rows(plain, {{S(plain, "x"), S(plain, "0")},
                                    {S(plain, "0"), S(plain, "1")}});
    auto r1 = rref(m1);
    CHECK(r1.pivot_cols.size() == 2);
    CHECK(!r1.pivots_certified); // x vanishes at x = 0

    auto pos = Chart::make("pos", {{"x", false, true}, {"y"}});
    Mat m2 = Mat::from_rows(pos, {{S(pos, "x"), S(pos, "0")},
                                  {S(pos, "0"), S(pos, "1")}});
    CHECK(rref(m2).pivots_certified);

    // identity block first: certified regardless of the other entries
    Mat m3 = Mat::from_rows(plain, {{S(plain, "1"), S(plain, "0"), S(plain, "x*y")},
                                    {S(plain, "0"), S(plain, "1"), S(plain, "x-y")}});
    CHECK(rref(m3).pivots_certified);
}

TEST_CASE("rank certification is column-order independent") {
    auto plain = xy();
    // the leading column only offers an uncertifiable pivot, but a constant
    // minor sits in the trailing columns
    Mat m = Mat::from_rows(plain, {{S(plain, "0"), S(plain, "1+x^2"), S(plain, "1"), S(plain, "0")},
                                   {S(plain, "1+x^2"), S(plain, "0"), S(plain, "0"), S(plain, "1")}});
    CHECK(!rref(m).pivots_certified);
    auto cert = rank_certified(m);
    CHECK(cert.rank == 2);
    CHECK(cert.certified);

    // a genuinely point-rank-dropping matrix stays uncertified
    Mat m2 = Mat::from_rows(plain, {{S(plain, "x"), S(plain, "x*y")},
                                    {S(plain, "y"), S(plain, "x")}});
    auto cert2 = rank_certified(m2);
    CHECK(cert2.rank == 2);
    CHECK(!cert2.certified);

    Mat zero(plain, 2, 3);
    CHECK(rank_certified(zero).rank == 0);
    CHECK(rank_certified(zero).certified);
}
