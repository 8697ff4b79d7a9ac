#include "dj/scalar.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "dj/error.hpp"

namespace dj {

Scalar Scalar::constant(ChartPtr chart, const GQ& v) {
    return from_poly(Poly::constant(std::move(chart), v));
}

Scalar Scalar::generator(ChartPtr chart, const std::string& name) {
    return from_poly(Poly::generator(std::move(chart), name));
}

Scalar Scalar::from_poly(Poly p) {
    Scalar s;
    s.den_ = Poly::constant(p.chart(), GQ(1));
    s.num_ = std::move(p);
    return s;
}

Scalar Scalar::make(Poly num, Poly den) {
    require_same_chart(num.chart(), den.chart(), "scalar make");
    if (den.is_zero()) fail(Errc::DivisionByZero, "denominator is the zero polynomial");
    if (num.is_zero()) return zero(num.chart());
    Poly g = Poly::gcd(num, den);
    num = num.divexact(g);
    den = den.divexact(g);
    const GQ lc = den.lead_coeff();
    if (!lc.is_one()) {
        GQ inv = lc.inv();
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    Scalar s;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    return s;
}

Scalar Scalar::operator-() const {
    Scalar s;
    s.num_ = -num_;
    s.den_ = den_;
    return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
    return make(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    return make(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator*(const Scalar& o) const { return make(num_ * o.num_, den_ * o.den_); }

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) fail(Errc::DivisionByZero, "scalar division by zero");
    return make(num_ * o.den_, den_ * o.num_);
}

Scalar Scalar::inv() const {
    if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero scalar");
    return make(den_, num_);
}

Scalar Scalar::pow(int k) const {
    if (k < 0) return inv().pow(-k);
    Scalar r = one(chart());
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

Scalar Scalar::diff(const std::string& coord_name) const {
    Poly dn = num_.derivative(coord_name);
    Poly dd = den_.derivative(coord_name);
    return make(dn * den_ - num_ * dd, den_ * den_);
}

std::string Scalar::str() const {
    if (den_is_one()) return num_.str();
    std::string n = num_.str();
    if (num_.term_count() > 1 || n.find('-') != std::string::npos || n.find('*') != std::string::npos)
        n = "(" + n + ")";
    return n + "/(" + den_.str() + ")";
}

namespace {

// Image of one source generator under a substitution.
Scalar gen_image(const ChartPtr& src, const ChartPtr& dst, const Bindings& bindings, size_t g) {
    const std::string& name = src->gen_name(g);
    switch (src->gen_kind(g)) {
        case GenKind::Tau:
            return Scalar::tau(dst);
        case GenKind::Coord: {
            auto it = bindings.find(name);
            if (it != bindings.end()) {
                require_same_chart(it->second.chart(), dst, "binding chart");
                return it->second;
            }
            if (dst->coord_index(name) >= 0) return Scalar::generator(dst, name);
            fail(Errc::UnknownCoordinate, "unbound coordinate '" + name + "' absent from chart " + dst->name());
        }
        case GenKind::Unit: {
            const ExpUnit& u = src->unit_of_gen(g);
            auto it = bindings.find(u.base);
            if (it == bindings.end()) {
                int ui = dst->unit_index(u.name);
                if (ui >= 0) {
                    const ExpUnit& du = dst->units()[static_cast<size_t>(ui)];
                    if (du.base == u.base && du.rate == u.rate) return Scalar::generator(dst, u.name);
                }
                fail(Errc::SubstitutionIntoExpUnitBase,
                     "unit '" + u.name + "' has no matching unit on chart " + dst->name());
            }
            const Scalar& v = it->second;
            if (v.is_zero()) return Scalar::one(dst);
            if (v.is_constant()) {
                // Residue of the unit at a nonzero rational base value; the slice
                // chart carries it as a positive coordinate of the same name.
                int ci = dst->coord_index(u.name);
                if (ci >= 0 && dst->coord(static_cast<size_t>(ci)).positive)
                    return Scalar::generator(dst, u.name);
                fail(Errc::SubstitutionIntoExpUnitBase,
                     "unit '" + u.name + "' over base '" + u.base + "' bound to nonzero constant");
            }
            // Base renamed to another coordinate: needs a matching-rate unit there.
            if (v.den_is_one() && v.num().term_count() == 1) {
                const auto& [m, c] = *v.num().terms().begin();
                size_t nz = 0, which = 0;
                for (size_t i = 0; i < m.size(); ++i)
                    if (m[i] != 0) { nz += m[i]; which = i; }
                if (nz == 1 && c.is_one() && dst->gen_kind(which) == GenKind::Coord) {
                    const std::string& base2 = dst->gen_name(which);
                    int pick = -1;
                    for (size_t ui = 0; ui < dst->units().size(); ++ui) {
                        const ExpUnit& du = dst->units()[ui];
                        if (du.base == base2 && du.rate == u.rate) {
                            if (pick < 0 || du.name == u.name) pick = static_cast<int>(ui);
                        }
                    }
                    if (pick >= 0) return Scalar::generator(dst, dst->units()[static_cast<size_t>(pick)].name);
                }
            }
            fail(Errc::SubstitutionIntoExpUnitBase,
                 "binding of '" + u.base + "' breaks the relation of unit '" + u.name + "'");
        }
    }
    fail(Errc::Internal, "unreachable");
}

Scalar subst_poly(const Poly& p, const ChartPtr& dst, const Bindings& bindings) {
    std::vector<std::optional<Scalar>> images(p.chart()->gen_count());
    Scalar acc = Scalar::zero(dst);
    for (const auto& [m, c] : p.terms()) {
        Scalar term = Scalar::constant(dst, c);
        for (size_t g = 0; g < m.size(); ++g) {
            if (m[g] == 0) continue;
            if (!images[g]) images[g] = gen_image(p.chart(), dst, bindings, g);
            term = term * images[g]->pow(static_cast<int>(m[g]));
        }
        acc = acc + term;
    }
    return acc;
}

} // namespace

Scalar subst(const Scalar& s, const ChartPtr& target, const Bindings& bindings) {
    Scalar n = subst_poly(s.num(), target, bindings);
    Scalar d = subst_poly(s.den(), target, bindings);
    return n / d; // DivisionByZero when the binding kills the denominator
}

Scalar restrict_at(const Scalar& s, const RatPoint& at, const ChartPtr& target) {
    if (!s.chart()->point_in_domain(at))
        fail(Errc::NotInDomain, "point " + point_str(at) + " violates positivity on " + s.chart()->name());
    Bindings b;
    for (const auto& [k, v] : at) b.emplace(k, Scalar::rational(target, v));
    return subst(s, target, b);
}

Scalar eval_at(const Scalar& s, const RatPoint& at, const ChartPtr& fiber) {
    for (const auto& c : s.chart()->coords())
        if (!at.count(c.name)) fail(Errc::NotInDomain, "point does not bind coordinate '" + c.name + "'");
    return restrict_at(s, at, fiber);
}

namespace {

// Residue of p after freezing the coordinates in `at`: bound coordinate
// exponents evaluate to rationals, units over a base frozen at 0 evaluate to
// 1, units over a nonzero frozen base and tau stay formal. Exact in all cases.
Poly residue_at(const Poly& p, const RatPoint& at) {
    const ChartPtr& chart = p.chart();
    Poly r = Poly::zero(chart);
    for (const auto& [m, c] : p.terms()) {
        GQ coeff = c;
        Mono m2 = m;
        bool dead = false;
        for (size_t g = 0; g < m.size() && !dead; ++g) {
            if (m[g] == 0) continue;
            if (chart->gen_kind(g) == GenKind::Coord) {
                auto it = at.find(chart->gen_name(g));
                if (it == at.end()) continue;
                m2[g] = 0;
                if (it->second == 0) {
                    dead = true;
                } else {
                    Rat v(1);
                    for (uint32_t e = 0; e < m[g]; ++e) v *= it->second;
                    coeff *= GQ(v);
                }
            } else if (chart->gen_kind(g) == GenKind::Unit) {
                auto it = at.find(chart->unit_of_gen(g).base);
                if (it != at.end() && it->second == 0) m2[g] = 0; // unit value is exactly 1
            }
        }
        if (!dead) r.add_term(m2, coeff);
    }
    return r;
}

// A formally nonzero residue certifies a nonzero value only when it involves
// at most one transcendental generator (single unit over a nonzero base, or
// tau); joint transcendence is not assumed.
bool residue_certainly_nonzero(const Poly& r, const RatPoint& at) {
    if (r.is_zero()) return false;
    const ChartPtr& chart = r.chart();
    int transcendentals = 0;
    for (size_t g = 0; g < chart->gen_count(); ++g) {
        if (!r.uses_gen(g)) continue;
        if (chart->gen_kind(g) == GenKind::Coord) {
            if (at.count(chart->gen_name(g))) fail(Errc::Internal, "residue retains bound coordinate");
            return false; // free coordinate left: not a point value
        }
        ++transcendentals;
    }
    return transcendentals <= 1;
}

std::vector<Rat> coord_candidates(bool positive) {
    if (positive) return {Rat(1), Rat(2), Rat(1, 2), Rat(3), Rat(1, 3), Rat(4)};
    return {Rat(0), Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(1, 2), Rat(-1, 2), Rat(3)};
}

RatPoint default_point(const ChartPtr& chart) {
    RatPoint p;
    for (const auto& c : chart->coords()) p[c.name] = c.positive ? Rat(1) : Rat(0);
    return p;
}

// Deterministic product grid over the named coordinates.
bool grid_search(const ChartPtr& chart, const std::vector<std::string>& names,
                 const std::function<bool(const RatPoint&)>& accept, RatPoint& out,
                 const RatPoint& fixed) {
    std::vector<std::vector<Rat>> cand;
    for (const auto& n : names) {
        int ci = chart->coord_index(n);
        cand.push_back(coord_candidates(chart->coord(static_cast<size_t>(ci)).positive));
    }
    std::vector<size_t> idx(names.size(), 0);
    size_t budget = 1 << 17;
    while (budget-- > 0) {
        RatPoint p = fixed;
        for (size_t i = 0; i < names.size(); ++i) p[names[i]] = cand[i][idx[i]];
        if (accept(p)) {
            out = p;
            return true;
        }
        size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < cand[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) return false;
    }
    return false;
}

// Coordinates that influence p's value: those appearing directly plus the
// bases of units appearing.
std::vector<std::string> influencing_coords(const Poly& p, const RatPoint& skip) {
    const ChartPtr& chart = p.chart();
    std::vector<std::string> names;
    auto add = [&](const std::string& n) {
        if (skip.count(n)) return;
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    };
    for (size_t g = 0; g < chart->gen_count(); ++g) {
        if (!p.uses_gen(g)) continue;
        if (chart->gen_kind(g) == GenKind::Coord) add(chart->gen_name(g));
        if (chart->gen_kind(g) == GenKind::Unit) add(chart->unit_of_gen(g).base);
    }
    return names;
}

UnitCert poly_unit_cert(const Poly& p) {
    const ChartPtr& chart = p.chart();
    if (p.is_zero()) return {CertStatus::Refused, "0", default_point(chart)};

    Mono content = p.terms().begin()->first;
    for (const auto& [m, c] : p.terms())
        for (size_t g = 0; g < content.size(); ++g) content[g] = std::min(content[g], m[g]);

    for (size_t g = 0; g < content.size(); ++g) {
        if (content[g] == 0) continue;
        if (chart->gen_kind(g) == GenKind::Coord && !chart->coord(g).positive) {
            RatPoint w = default_point(chart);
            w[chart->gen_name(g)] = Rat(0);
            return {CertStatus::Refused, chart->gen_name(g), w};
        }
    }
    Poly core = p.divexact(Poly::monomial(chart, content, GQ(1)));
    if (core.is_constant()) return {CertStatus::Certified, "", std::nullopt};

    // Positivity fragment: same-signed real coefficients over positive generators.
    bool pos = true, neg = true, domain_ok = true;
    for (const auto& [m, c] : core.terms()) {
        if (!c.is_real()) pos = neg = false;
        if (c.re <= 0) pos = false;
        if (c.re >= 0) neg = false;
    }
    for (size_t g = 0; g < chart->gen_count() && domain_ok; ++g) {
        if (!core.uses_gen(g)) continue;
        if (chart->gen_kind(g) == GenKind::Tau) domain_ok = false;
        if (chart->gen_kind(g) == GenKind::Coord && !chart->coord(g).positive) domain_ok = false;
    }
    if ((pos || neg) && domain_ok) return {CertStatus::Certified, "", std::nullopt};

    RatPoint zero_at;
    bool found = grid_search(
        chart, influencing_coords(core, {}),
        [&](const RatPoint& q) {
            return chart->point_in_domain(q) && residue_at(core, q).is_zero();
        },
        zero_at, {});
    if (found) {
        RatPoint w = default_point(chart);
        for (const auto& [k, v] : zero_at) w[k] = v;
        return {CertStatus::Refused, core.str(), w};
    }
    return {CertStatus::NoCertificate, core.str(), std::nullopt};
}

} // namespace

UnitCert unit_certify(const Scalar& s) {
    UnitCert n = poly_unit_cert(s.num());
    if (n.status == CertStatus::Refused) return n;
    UnitCert d = poly_unit_cert(s.den());
    if (d.status == CertStatus::Refused) return d;
    if (n.status == CertStatus::NoCertificate) return n;
    return d;
}

std::optional<RatPoint> find_point_nonzero(const Scalar& s, const RatPoint& fixed) {
    if (s.is_zero()) return std::nullopt;
    const ChartPtr& chart = s.chart();
    if (!chart->point_in_domain(fixed)) return std::nullopt;
    std::vector<std::string> names;
    for (const auto& c : chart->coords())
        if (!fixed.count(c.name)) names.push_back(c.name);
    RatPoint out;
    bool found = grid_search(
        chart, names,
        [&](const RatPoint& q) {
            if (!chart->point_in_domain(q)) return false;
            Poly dn = residue_at(s.den(), q);
            Poly nm = residue_at(s.num(), q);
            return residue_certainly_nonzero(dn, q) && residue_certainly_nonzero(nm, q);
        },
        out, fixed);
    if (!found) return std::nullopt;
    return out;
}

} // namespace dj
