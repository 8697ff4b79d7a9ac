#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dj/chart.hpp"
#include "dj/rat.hpp"

namespace dj {

// Exponent vector over a chart's generator list (coords, units, tau).
using Mono = std::vector<uint32_t>;

// Graded lexicographic, earlier generators ranked higher.
struct GradedLexLess {
    bool operator()(const Mono& a, const Mono& b) const {
        uint64_t da = 0, db = 0;
        for (auto e : a) da += e;
        for (auto e : b) db += e;
        if (da != db) return da < db;
        for (size_t i = 0; i < a.size() && i < b.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return a.size() < b.size();
    }
};

// Sparse polynomial over Q(i) in a chart's generators. Terms never hold a
// zero coefficient; the term map is the canonical form.
class Poly {
public:
    using Terms = std::map<Mono, GQ, GradedLexLess>;

    Poly() = default;
    static Poly zero(ChartPtr chart);
    static Poly constant(ChartPtr chart, const GQ& v);
    static Poly generator(ChartPtr chart, const std::string& name); // coord, unit or tau
    static Poly monomial(ChartPtr chart, Mono m, const GQ& c);

    const ChartPtr& chart() const { return chart_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    GQ constant_value() const; // 0 when zero; requires is_constant otherwise
    size_t term_count() const { return terms_.size(); }

    const Mono& lead_mono() const;
    const GQ& lead_coeff() const;
    uint64_t total_degree() const; // 0 for the zero polynomial
    uint32_t deg_in(size_t gen) const;
    bool uses_gen(size_t gen) const { return deg_in(gen) > 0; }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const GQ& c) const;
    Poly pow(uint32_t k) const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // d/d(coord); exp units chain through d(u)/d(base) = rate*u.
    Poly derivative(const std::string& coord_name) const;

    // Coefficient of gen^k, with gen's exponent removed.
    Poly coeff_of(size_t gen, uint32_t k) const;

    // Exact division; Errc::Internal if the division does not come out exact.
    Poly divexact(const Poly& d) const;

    // Monic (lead coefficient 1) gcd; gcd(0,0) = 0.
    static Poly gcd(const Poly& a, const Poly& b);

    // Leading coefficient scaled to 1 (zero stays zero).
    Poly normalized() const;

    void add_term(const Mono& m, const GQ& c);

    std::string str() const;

private:
    ChartPtr chart_;
    Terms terms_;

    static Poly content_in(const Poly& p, size_t gen);
    static Poly prem(const Poly& a, const Poly& b, size_t gen);
};

} // namespace dj
