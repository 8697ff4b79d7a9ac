#pragma once

#include <map>
#include <optional>
#include <string>

#include "dj/poly.hpp"

namespace dj {

// Canonical fraction of polynomials over a chart: gcd(num, den) = 1, den has
// leading coefficient 1 under graded lex, zero is 0/1. Equality of values is
// equality of representations.
class Scalar {
public:
    Scalar() = default;

    static Scalar zero(ChartPtr chart) { return from_poly(Poly::zero(std::move(chart))); }
    static Scalar one(ChartPtr chart) { return constant(std::move(chart), GQ(1)); }
    static Scalar constant(ChartPtr chart, const GQ& v);
    static Scalar rational(ChartPtr chart, const Rat& v) { return constant(std::move(chart), GQ(v)); }
    static Scalar generator(ChartPtr chart, const std::string& name);
    static Scalar tau(ChartPtr chart) { return generator(std::move(chart), Chart::kTauName); }
    static Scalar from_poly(Poly p);
    static Scalar make(Poly num, Poly den);

    const ChartPtr& chart() const { return num_.chart(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    GQ constant_value() const { return num_.constant_value() / den_.constant_value(); }
    bool den_is_one() const { return den_.is_constant(); } // den monic, so constant means 1

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar inv() const;
    Scalar pow(int k) const;
    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar diff(const std::string& coord_name) const;

    std::string str() const;

private:
    Poly num_, den_;
};

using Bindings = std::map<std::string, Scalar>;

// Substitution of coordinates by scalars on the target chart. Unbound
// coordinates and tau carry over by name. An exp unit follows its base:
// unbound base carries the unit over by (name, base, rate); base bound to 0
// sends the unit to 1; base bound to a nonzero rational sends the unit to the
// positive residue coordinate of the same name (see Chart::sliced); base bound
// to a bare coordinate with a matching-rate unit on the target renames the
// unit. Anything else raises SubstitutionIntoExpUnitBase.
Scalar subst(const Scalar& s, const ChartPtr& target, const Bindings& bindings);

// Specialize coordinates to rational values (partial points give slices).
// Throws NotInDomain when a positivity flag is violated. The target chart
// must be chart()->sliced(at) or structurally equal to it.
Scalar restrict_at(const Scalar& s, const RatPoint& at, const ChartPtr& target);

// Full-point evaluation to the residue field; requires every coordinate bound.
Scalar eval_at(const Scalar& s, const RatPoint& at, const ChartPtr& fiber);

enum class CertStatus { Certified, Refused, NoCertificate };

struct UnitCert {
    CertStatus status = CertStatus::NoCertificate;
    std::string offending;            // factor or irreducible part that blocked the certificate
    std::optional<RatPoint> witness;  // in-domain rational zero, when one was found
    bool ok() const { return status == CertStatus::Certified; }
};

// Certificate that s is a nowhere-zero smooth unit on the chart's domain:
// numerator and denominator must both factor as (nonzero constant) * positive
// coordinates * exp units * tau powers, or pass a positivity test. Refusals
// carry an in-domain rational zero when the search finds one.
UnitCert unit_certify(const Scalar& s);

// In-domain rational point where s is defined and nonzero, with the given
// coordinates frozen; small deterministic grid search.
std::optional<RatPoint> find_point_nonzero(const Scalar& s, const RatPoint& fixed = {});

} // namespace dj
