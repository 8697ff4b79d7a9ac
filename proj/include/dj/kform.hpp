#pragma once

#include "dj/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace dj {

using MultiIndex = std::vector<uint32_t>; // strictly increasing coordinate indices

// Alternating k-form with Scalar coefficients over the chart's coordinate
// differentials. Only strictly increasing multi-indices are stored; zero
// coefficients are dropped, so equality is structural.
class KForm {
public:
    using Terms = std::map<MultiIndex, Scalar>;

    static KForm zero(ChartPtr chart, uint32_t degree);
    static KForm from_scalar(const Scalar& s); // degree 0
    static KForm d_coord(ChartPtr chart, const std::string& coord);

    const ChartPtr& chart() const { return chart_; }
    uint32_t degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Scalar coeff(const MultiIndex& idx) const;
    // Adds c * dx_{idx} with idx in any order (sign handled); repeated index = 0.
    void add_term(MultiIndex idx, const Scalar& c);

    KForm operator-() const;
    KForm operator+(const KForm& o) const;
    KForm operator-(const KForm& o) const;
    KForm scaled(const Scalar& s) const;
    bool operator==(const KForm& o) const;
    bool operator!=(const KForm& o) const { return !(*this == o); }
    std::string str() const;

private:
    KForm(ChartPtr chart, uint32_t degree) : chart_(std::move(chart)), degree_(degree) {}
    ChartPtr chart_;
    uint32_t degree_;
    Terms terms_;
};

// Multivector field. Degree is capped at 2: the engine never needs higher
// wedge powers of vector fields, and rejecting them keeps every operation
// exact and total.
class KVector {
public:
    using Terms = std::map<MultiIndex, Scalar>;

    static KVector zero(ChartPtr chart, uint32_t degree);
    static KVector basis(ChartPtr chart, const std::string& coord); // coordinate vector field

    const ChartPtr& chart() const { return chart_; }
    uint32_t degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Scalar coeff(const MultiIndex& idx) const;
    void add_term(MultiIndex idx, const Scalar& c);

    KVector operator-() const;
    KVector operator+(const KVector& o) const;
    KVector operator-(const KVector& o) const;
    KVector scaled(const Scalar& s) const;
    bool operator==(const KVector& o) const;
    bool operator!=(const KVector& o) const { return !(*this == o); }
    std::string str() const;

private:
    KVector(ChartPtr chart, uint32_t degree) : chart_(std::move(chart)), degree_(degree) {}
    ChartPtr chart_;
    uint32_t degree_;
    Terms terms_;
};

// --- exterior algebra ---
KForm wedge(const KForm& a, const KForm& b);
KVector wedge(const KVector& a, const KVector& b); // result degree <= 2
KForm d(const KForm& a);
KForm d(const Scalar& f); // df as a 1-form
// Interior product i_X w for a degree-1 vector field X.
KForm contract(const KVector& x, const KForm& w);

// --- evaluations ---
Scalar eval1(const KForm& xi, const KVector& x);                   // xi(X)
Scalar eval2(const KForm& w, const KVector& x, const KVector& y);  // w(X,Y)
Scalar apply_vec(const KVector& x, const Scalar& f);               // X . f
KVector lambda_tilde(const KVector& lam, const KForm& xi);         // Lam(., xi)
Scalar biv_eval(const KVector& lam, const KForm& xi, const KForm& eta); // Lam(xi, eta)

// --- Lie calculus ---
KVector lie_bracket(const KVector& x, const KVector& y); // [X,Y], degree 1 each
KForm lie_derivative(const KVector& x, const KForm& w);  // Cartan formula
KVector lie_derivative(const KVector& x, const KVector& t); // t of degree 1 or 2

// --- chart transport ---
// A rational coordinate change between unit-free charts: every `from`
// coordinate expressed on `to` and vice versa, verified mutually inverse.
struct ChartMap {
    ChartPtr from;
    ChartPtr to;
    Bindings from_in_to; // from-coordinates as scalars on `to`
    Bindings to_in_from; // to-coordinates as scalars on `from`
};
// Validates completeness, certified denominators, and both round trips.
ChartMap make_chart_map(ChartPtr from, ChartPtr to, Bindings from_in_to, Bindings to_in_from);

Scalar transport(const Scalar& f, const ChartMap& map);
KForm transport(const KForm& w, const ChartMap& map);   // pullback along to -> from
KVector transport(const KVector& v, const ChartMap& map); // pushforward from -> to

} // namespace dj
