#include "dj/poly.hpp"

#include <algorithm>

#include "dj/error.hpp"

namespace dj {

Poly Poly::zero(ChartPtr chart) {
    Poly p;
    p.chart_ = std::move(chart);
    return p;
}

Poly Poly::constant(ChartPtr chart, const GQ& v) {
    Poly p = zero(std::move(chart));
    if (!v.is_zero()) p.terms_.emplace(Mono(p.chart_->gen_count(), 0), v);
    return p;
}

Poly Poly::generator(ChartPtr chart, const std::string& name) {
    int g = chart->gen_index(name);
    if (g < 0) fail(Errc::UnknownCoordinate, "'" + name + "' not on chart " + chart->name());
    Mono m(chart->gen_count(), 0);
    m[static_cast<size_t>(g)] = 1;
    return monomial(std::move(chart), std::move(m), GQ(1));
}

Poly Poly::monomial(ChartPtr chart, Mono m, const GQ& c) {
    if (m.size() != chart->gen_count()) fail(Errc::Internal, "monomial width off chart");
    Poly p = zero(std::move(chart));
    if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Mono& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](uint32_t e) { return e == 0; });
}

GQ Poly::constant_value() const {
    if (terms_.empty()) return GQ(0);
    if (!is_constant()) fail(Errc::Internal, "constant_value on non-constant");
    return terms_.begin()->second;
}

const Mono& Poly::lead_mono() const {
    if (terms_.empty()) fail(Errc::Internal, "lead of zero polynomial");
    return terms_.rbegin()->first;
}

const GQ& Poly::lead_coeff() const {
    if (terms_.empty()) fail(Errc::Internal, "lead of zero polynomial");
    return terms_.rbegin()->second;
}

uint64_t Poly::total_degree() const {
    if (terms_.empty()) return 0;
    uint64_t d = 0;
    for (auto e : lead_mono()) d += e;
    return d;
}

uint32_t Poly::deg_in(size_t gen) const {
    uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[gen]);
    return d;
}

void Poly::add_term(const Mono& m, const GQ& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r = zero(chart_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    require_same_chart(chart_, o.chart_, "poly +");
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    require_same_chart(chart_, o.chart_, "poly -");
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    require_same_chart(chart_, o.chart_, "poly *");
    Poly r = zero(chart_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Mono m = ma;
            for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Poly Poly::scaled(const GQ& c) const {
    Poly r = zero(chart_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

Poly Poly::pow(uint32_t k) const {
    Poly r = constant(chart_, GQ(1));
    for (uint32_t i = 0; i < k; ++i) r = r * *this;
    return r;
}

Poly Poly::derivative(const std::string& coord_name) const {
    int ci = chart_->coord_index(coord_name);
    if (ci < 0) fail(Errc::UnknownCoordinate, "d/d" + coord_name + " on chart " + chart_->name());
    size_t cg = static_cast<size_t>(ci);

    std::vector<std::pair<size_t, Rat>> chained; // unit generator -> rate
    for (size_t ui = 0; ui < chart_->units().size(); ++ui)
        if (chart_->units()[ui].base == coord_name)
            chained.emplace_back(chart_->dim() + ui, chart_->units()[ui].rate);

    Poly r = zero(chart_);
    for (const auto& [m, c] : terms_) {
        if (m[cg] > 0) {
            Mono m2 = m;
            m2[cg] -= 1;
            r.add_term(m2, c * GQ(Rat(m[cg])));
        }
        for (const auto& [ug, rate] : chained)
            if (m[ug] > 0) r.add_term(m, c * GQ(Rat(m[ug]) * rate));
    }
    return r;
}

Poly Poly::coeff_of(size_t gen, uint32_t k) const {
    Poly r = zero(chart_);
    for (const auto& [m, c] : terms_) {
        if (m[gen] != k) continue;
        Mono m2 = m;
        m2[gen] = 0;
        r.add_term(m2, c);
    }
    return r;
}

Poly Poly::divexact(const Poly& d) const {
    require_same_chart(chart_, d.chart_, "poly divexact");
    if (d.is_zero()) fail(Errc::DivisionByZero, "divexact by zero polynomial");
    Poly q = zero(chart_);
    Poly r = *this;
    const Mono& dm = d.lead_mono();
    const GQ& dc = d.lead_coeff();
    while (!r.is_zero()) {
        const Mono& rm = r.lead_mono();
        Mono qm = rm;
        for (size_t i = 0; i < qm.size(); ++i) {
            if (qm[i] < dm[i]) fail(Errc::Internal, "divexact: not divisible");
            qm[i] -= dm[i];
        }
        GQ qc = r.lead_coeff() / dc;
        Poly t = monomial(chart_, qm, qc);
        q = q + t;
        r = r - t * d;
    }
    return q;
}

Poly Poly::normalized() const {
    if (is_zero()) return *this;
    return scaled(lead_coeff().inv());
}

Poly Poly::content_in(const Poly& p, size_t gen) {
    Poly g = zero(p.chart_);
    uint32_t d = p.deg_in(gen);
    for (uint32_t k = 0; k <= d; ++k) {
        Poly c = p.coeff_of(gen, k);
        if (!c.is_zero()) g = gcd(g, c);
        if (!g.is_zero() && g.is_constant()) break;
    }
    return g;
}

// Pseudo-remainder of a by b in the generator `gen`; both nonzero, deg(a) >= deg(b) > 0.
Poly Poly::prem(const Poly& a, const Poly& b, size_t gen) {
    uint32_t da = a.deg_in(gen), db = b.deg_in(gen);
    Poly lcb = b.coeff_of(gen, db);
    Poly r = a;
    int64_t e = static_cast<int64_t>(da) - static_cast<int64_t>(db) + 1;
    while (!r.is_zero()) {
        uint32_t dr = r.deg_in(gen);
        if (dr < db) break;
        Poly lcr = r.coeff_of(gen, dr);
        Mono shift(a.chart_->gen_count(), 0);
        shift[gen] = dr - db;
        r = r * lcb - b * lcr * monomial(a.chart_, shift, GQ(1));
        --e;
    }
    for (; e > 0; --e) r = r * lcb;
    return r;
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
    require_same_chart(a.chart_, b.chart_, "poly gcd");
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    if (a.is_constant() || b.is_constant()) return constant(a.chart_, GQ(1));

    // Main variable: highest generator present in either operand.
    size_t gen = 0;
    for (size_t g = a.chart_->gen_count(); g-- > 0;) {
        if (a.uses_gen(g) || b.uses_gen(g)) {
            gen = g;
            break;
        }
    }

    Poly ca = content_in(a, gen), cb = content_in(b, gen);
    Poly pa = a.divexact(ca), pb = b.divexact(cb);
    Poly cg = gcd(ca, cb);

    if (pa.deg_in(gen) < pb.deg_in(gen)) std::swap(pa, pb);
    Poly gp = constant(a.chart_, GQ(1));
    while (true) {
        if (pb.deg_in(gen) == 0) break; // primitive and free of gen: unit
        Poly r = prem(pa, pb, gen);
        if (r.is_zero()) {
            gp = pb;
            break;
        }
        pa = pb;
        pb = r.divexact(content_in(r, gen));
    }
    return (cg * gp).normalized();
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        std::string mono;
        for (size_t g = 0; g < m.size(); ++g) {
            if (m[g] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += chart_->gen_name(g);
            if (m[g] > 1) mono += "^" + std::to_string(m[g]);
        }
        std::string cs = gq_str(c);
        std::string term;
        if (mono.empty()) {
            term = (cs.find_first_of("+-", 1) != std::string::npos) ? "(" + cs + ")" : cs;
        } else if (c.is_one()) {
            term = mono;
        } else if (c == GQ(-1)) {
            term = "-" + mono;
        } else {
            bool composite = cs.find_first_of("+-", 1) != std::string::npos;
            term = (composite ? "(" + cs + ")" : cs) + "*" + mono;
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

} // namespace dj
