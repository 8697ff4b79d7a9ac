#include "dj/kform.hpp"

#include "dj/error.hpp"

#include <algorithm>
#include <sstream>

namespace dj {

namespace {

// Sorts idx ascending, returning the permutation sign; 0 on a repeated index.
int normalize_index(MultiIndex& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    return sign;
}

template <typename Terms>
void add_into(Terms& terms, MultiIndex idx, Scalar c, const ChartPtr& chart) {
    for (uint32_t i : idx)
        if (i >= chart->dim()) fail(Errc::Internal, "tensor index out of chart range");
    int sign = normalize_index(idx);
    if (sign == 0 || c.is_zero()) return;
    if (sign < 0) c = -c;
    auto it = terms.find(idx);
    if (it == terms.end()) {
        terms.emplace(std::move(idx), std::move(c));
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

template <typename Terms>
std::string render(const Terms& terms, const ChartPtr& chart, const char* prefix,
                   const char* empty) {
    if (terms.empty()) return empty;
    std::ostringstream out;
    bool first = true;
    for (const auto& [idx, c] : terms) {
        if (!first) out << " + ";
        first = false;
        out << "(" << c.str() << ")";
        for (uint32_t i : idx) out << (idx.empty() ? "" : "*") << prefix << chart->coord(i).name;
    }
    return out.str();
}

void check_degree(uint32_t degree, const ChartPtr& chart, bool is_vector) {
    if (degree > chart->dim())
        fail(Errc::DegreeOverflow, "degree exceeds chart dimension");
    if (is_vector && degree > 2)
        fail(Errc::DegreeOverflow, "multivector degree above 2 is not supported");
}

} // namespace

// --- KForm ---

KForm KForm::zero(ChartPtr chart, uint32_t degree) {
    check_degree(degree, chart, false);
    return KForm(std::move(chart), degree);
}

KForm KForm::from_scalar(const Scalar& s) {
    KForm f(s.chart(), 0);
    if (!s.is_zero()) f.terms_.emplace(MultiIndex{}, s);
    return f;
}

KForm KForm::d_coord(ChartPtr chart, const std::string& coord) {
    int i = chart->coord_index(coord);
    if (i < 0) fail(Errc::UnknownCoordinate, coord + " on " + chart->name());
    KForm f(chart, 1);
    f.terms_.emplace(MultiIndex{static_cast<uint32_t>(i)}, Scalar::one(chart));
    return f;
}

Scalar KForm::coeff(const MultiIndex& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Scalar::zero(chart_) : it->second;
}

void KForm::add_term(MultiIndex idx, const Scalar& c) {
    if (idx.size() != degree_) fail(Errc::DegreeOverflow, "term degree mismatch");
    require_same_chart(chart_, c.chart(), "KForm::add_term");
    add_into(terms_, std::move(idx), c, chart_);
}

KForm KForm::operator-() const {
    KForm r(chart_, degree_);
    for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, -c);
    return r;
}

KForm KForm::operator+(const KForm& o) const {
    require_same_chart(chart_, o.chart_, "KForm::operator+");
    if (degree_ != o.degree_) fail(Errc::DegreeOverflow, "adding forms of different degree");
    KForm r = *this;
    for (const auto& [idx, c] : o.terms_) add_into(r.terms_, idx, c, chart_);
    return r;
}

KForm KForm::operator-(const KForm& o) const { return *this + (-o); }

KForm KForm::scaled(const Scalar& s) const {
    require_same_chart(chart_, s.chart(), "KForm::scaled");
    KForm r(chart_, degree_);
    if (s.is_zero()) return r;
    for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, c * s);
    return r;
}

bool KForm::operator==(const KForm& o) const {
    return degree_ == o.degree_ && chart_->same_as(*o.chart_) && terms_ == o.terms_;
}

std::string KForm::str() const { return render(terms_, chart_, "d", "0"); }

// --- KVector ---

KVector KVector::zero(ChartPtr chart, uint32_t degree) {
    check_degree(degree, chart, true);
    return KVector(std::move(chart), degree);
}

KVector KVector::basis(ChartPtr chart, const std::string& coord) {
    int i = chart->coord_index(coord);
    if (i < 0) fail(Errc::UnknownCoordinate, coord + " on " + chart->name());
    KVector v(chart, 1);
    v.terms_.emplace(MultiIndex{static_cast<uint32_t>(i)}, Scalar::one(chart));
    return v;
}

Scalar KVector::coeff(const MultiIndex& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Scalar::zero(chart_) : it->second;
}

void KVector::add_term(MultiIndex idx, const Scalar& c) {
    if (idx.size() != degree_) fail(Errc::DegreeOverflow, "term degree mismatch");
    require_same_chart(chart_, c.chart(), "KVector::add_term");
    add_into(terms_, std::move(idx), c, chart_);
}

KVector KVector::operator-() const {
    KVector r(chart_, degree_);
    for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, -c);
    return r;
}

KVector KVector::operator+(const KVector& o) const {
    require_same_chart(chart_, o.chart_, "KVector::operator+");
    if (degree_ != o.degree_) fail(Errc::DegreeOverflow, "adding multivectors of different degree");
    KVector r = *this;
    for (const auto& [idx, c] : o.terms_) add_into(r.terms_, idx, c, chart_);
    return r;
}

KVector KVector::operator-(const KVector& o) const { return *this + (-o); }

KVector KVector::scaled(const Scalar& s) const {
    require_same_chart(chart_, s.chart(), "KVector::scaled");
    KVector r(chart_, degree_);
    if (s.is_zero()) return r;
    for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, c * s);
    return r;
}

bool KVector::operator==(const KVector& o) const {
    return degree_ == o.degree_ && chart_->same_as(*o.chart_) && terms_ == o.terms_;
}

std::string KVector::str() const { return render(terms_, chart_, "@", "0"); }

// --- exterior algebra ---

KForm wedge(const KForm& a, const KForm& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    KForm r = KForm::zero(a.chart(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.terms())
        for (const auto& [ib, cb] : b.terms()) {
            MultiIndex idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(std::move(idx), ca * cb);
        }
    return r;
}

KVector wedge(const KVector& a, const KVector& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    KVector r = KVector::zero(a.chart(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.terms())
        for (const auto& [ib, cb] : b.terms()) {
            MultiIndex idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(std::move(idx), ca * cb);
        }
    return r;
}

KForm d(const KForm& a) {
    const ChartPtr& chart = a.chart();
    KForm r = KForm::zero(chart, a.degree() + 1);
    for (const auto& [idx, c] : a.terms())
        for (uint32_t j = 0; j < chart->dim(); ++j) {
            Scalar dc = c.diff(chart->coord(j).name);
            if (dc.is_zero()) continue;
            MultiIndex ext{j};
            ext.insert(ext.end(), idx.begin(), idx.end());
            r.add_term(std::move(ext), dc);
        }
    return r;
}

KForm d(const Scalar& f) { return d(KForm::from_scalar(f)); }

KForm contract(const KVector& x, const KForm& w) {
    if (x.degree() != 1) fail(Errc::DegreeOverflow, "contract expects a degree-1 vector field");
    require_same_chart(x.chart(), w.chart(), "contract");
    if (w.degree() == 0) fail(Errc::DegreeOverflow, "cannot contract into a 0-form");
    KForm r = KForm::zero(w.chart(), w.degree() - 1);
    for (const auto& [idx, c] : w.terms())
        for (size_t m = 0; m < idx.size(); ++m) {
            Scalar xm = x.coeff({idx[m]});
            if (xm.is_zero()) continue;
            MultiIndex rest;
            for (size_t j = 0; j < idx.size(); ++j)
                if (j != m) rest.push_back(idx[j]);
            Scalar term = c * xm;
            if (m % 2 == 1) term = -term;
            r.add_term(std::move(rest), term);
        }
    return r;
}

// --- evaluations ---

Scalar eval1(const KForm& xi, const KVector& x) {
    if (xi.degree() != 1) fail(Errc::DegreeOverflow, "eval1 expects a 1-form");
    KForm c = contract(x, xi);
    return c.coeff({});
}

Scalar eval2(const KForm& w, const KVector& x, const KVector& y) {
    if (w.degree() != 2) fail(Errc::DegreeOverflow, "eval2 expects a 2-form");
    return eval1(contract(x, w), y);
}

Scalar apply_vec(const KVector& x, const Scalar& f) {
    if (x.degree() != 1) fail(Errc::DegreeOverflow, "apply_vec expects a degree-1 vector field");
    require_same_chart(x.chart(), f.chart(), "apply_vec");
    Scalar r = Scalar::zero(f.chart());
    for (const auto& [idx, c] : x.terms())
        r = r + c * f.diff(x.chart()->coord(idx[0]).name);
    return r;
}

KVector lambda_tilde(const KVector& lam, const KForm& xi) {
    if (lam.degree() != 2 || xi.degree() != 1)
        fail(Errc::DegreeOverflow, "lambda_tilde expects a bivector and a 1-form");
    require_same_chart(lam.chart(), xi.chart(), "lambda_tilde");
    // (Lam~ xi)^i = Lam^{ij} xi_j, with the 1-form in the second slot.
    KVector r = KVector::zero(lam.chart(), 1);
    for (const auto& [idx, c] : lam.terms()) {
        uint32_t i = idx[0], j = idx[1]; // i < j, Lam^{ij} = c, Lam^{ji} = -c
        Scalar xi_i = xi.coeff({i}), xi_j = xi.coeff({j});
        if (!xi_j.is_zero()) r.add_term({i}, c * xi_j);
        if (!xi_i.is_zero()) r.add_term({j}, -(c * xi_i));
    }
    return r;
}

Scalar biv_eval(const KVector& lam, const KForm& xi, const KForm& eta) {
    return eval1(xi, lambda_tilde(lam, eta));
}

// --- Lie calculus ---

KVector lie_bracket(const KVector& x, const KVector& y) {
    if (x.degree() != 1 || y.degree() != 1)
        fail(Errc::DegreeOverflow, "lie_bracket expects degree-1 vector fields");
    require_same_chart(x.chart(), y.chart(), "lie_bracket");
    const ChartPtr& chart = x.chart();
    KVector r = KVector::zero(chart, 1);
    for (uint32_t i = 0; i < chart->dim(); ++i) {
        Scalar c = apply_vec(x, y.coeff({i})) - apply_vec(y, x.coeff({i}));
        if (!c.is_zero()) r.add_term({i}, c);
    }
    return r;
}

KForm lie_derivative(const KVector& x, const KForm& w) {
    if (w.degree() == 0) return KForm::from_scalar(apply_vec(x, w.coeff({})));
    return contract(x, d(w)) + d(contract(x, w));
}

KVector lie_derivative(const KVector& x, const KVector& t) {
    if (x.degree() != 1) fail(Errc::DegreeOverflow, "lie_derivative expects a degree-1 direction");
    if (t.degree() == 1) return lie_bracket(x, t);
    if (t.degree() != 2) fail(Errc::DegreeOverflow, "lie_derivative on multivectors of degree 1 or 2 only");
    require_same_chart(x.chart(), t.chart(), "lie_derivative");
    const ChartPtr& chart = x.chart();
    // (L_X T)^{ij} = X.T^{ij} - T^{kj} dX^i/dx_k - T^{ik} dX^j/dx_k
    auto comp = [&](uint32_t i, uint32_t j) -> Scalar {
        if (i == j) return Scalar::zero(chart);
        MultiIndex idx{std::min(i, j), std::max(i, j)};
        Scalar c = t.coeff(idx);
        return i < j ? c : -c;
    };
    KVector r = KVector::zero(chart, 2);
    for (uint32_t i = 0; i < chart->dim(); ++i)
        for (uint32_t j = i + 1; j < chart->dim(); ++j) {
            Scalar v = apply_vec(x, comp(i, j));
            for (uint32_t k = 0; k < chart->dim(); ++k) {
                const std::string& xk = chart->coord(k).name;
                v = v - comp(k, j) * x.coeff({i}).diff(xk);
                v = v - comp(i, k) * x.coeff({j}).diff(xk);
            }
            if (!v.is_zero()) r.add_term({i, j}, v);
        }
    return r;
}

// --- chart transport ---

namespace {

void require_unit_free(const ChartPtr& c, const char* where) {
    if (c->gen_count() != c->dim() + 1)
        fail(Errc::ValidationError, std::string(where) + ": transport requires unit-free charts");
}

void check_bindings(const ChartPtr& src, const ChartPtr& dst, const Bindings& b,
                    const char* where) {
    if (b.size() != src->dim())
        fail(Errc::ValidationError, std::string(where) + ": every coordinate needs a binding");
    for (const auto& [name, expr] : b) {
        if (!src->has_coord(name))
            fail(Errc::UnknownCoordinate, name + " is not a coordinate of " + src->name());
        require_same_chart(dst, expr.chart(), where);
        UnitCert cert = unit_certify(Scalar::from_poly(expr.den()));
        if (!cert.ok())
            fail(Errc::DenominatorNotCertified,
                 "binding " + name + " -> " + expr.str() + " has denominator " +
                     expr.den().str() + " not certified on " + dst->name());
    }
}

} // namespace

ChartMap make_chart_map(ChartPtr from, ChartPtr to, Bindings from_in_to, Bindings to_in_from) {
    require_unit_free(from, "make_chart_map");
    require_unit_free(to, "make_chart_map");
    check_bindings(from, to, from_in_to, "make_chart_map(from_in_to)");
    check_bindings(to, from, to_in_from, "make_chart_map(to_in_from)");
    // Round trips must be the identity in canonical form.
    for (const auto& [name, expr] : to_in_from) {
        Scalar round = subst(expr, to, from_in_to);
        if (round != Scalar::generator(to, name))
            fail(Errc::NotInverse, "round trip of " + name + " gives " + round.str());
    }
    for (const auto& [name, expr] : from_in_to) {
        Scalar round = subst(expr, from, to_in_from);
        if (round != Scalar::generator(from, name))
            fail(Errc::NotInverse, "round trip of " + name + " gives " + round.str());
    }
    return ChartMap{std::move(from), std::move(to), std::move(from_in_to), std::move(to_in_from)};
}

Scalar transport(const Scalar& f, const ChartMap& map) {
    require_same_chart(map.from, f.chart(), "transport");
    return subst(f, map.to, map.from_in_to);
}

KForm transport(const KForm& w, const ChartMap& map) {
    require_same_chart(map.from, w.chart(), "transport");
    if (w.degree() == 0) return KForm::from_scalar(transport(w.coeff({}), map));
    // Pull back: coefficients through the map, each d(from-coord) expanded as
    // the differential of its expression on the target chart.
    std::vector<KForm> dxi;
    for (uint32_t i = 0; i < map.from->dim(); ++i)
        dxi.push_back(d(map.from_in_to.at(map.from->coord(i).name)));
    KForm r = KForm::zero(map.to, w.degree());
    for (const auto& [idx, c] : w.terms()) {
        KForm term = KForm::from_scalar(transport(c, map));
        for (uint32_t i : idx) term = wedge(term, dxi[i]);
        r = r + term;
    }
    return r;
}

KVector transport(const KVector& v, const ChartMap& map) {
    require_same_chart(map.from, v.chart(), "transport");
    if (v.degree() == 0) fail(Errc::DegreeOverflow, "transport of a degree-0 multivector");
    // Push forward basis vectors by the Jacobian of the inverse bindings,
    // expressed on the target chart.
    std::vector<KVector> push(map.from->dim(), KVector::zero(map.to, 1));
    for (uint32_t i = 0; i < map.from->dim(); ++i) {
        const std::string& xi = map.from->coord(i).name;
        for (uint32_t j = 0; j < map.to->dim(); ++j) {
            const std::string& yj = map.to->coord(j).name;
            Scalar jac = map.to_in_from.at(yj).diff(xi);
            if (jac.is_zero()) continue;
            push[i].add_term({j}, transport(jac, map));
        }
    }
    KVector r = KVector::zero(map.to, v.degree());
    for (const auto& [idx, c] : v.terms()) {
        Scalar tc = transport(c, map);
        if (v.degree() == 1) {
            r = r + push[idx[0]].scaled(tc);
        } else {
            r = r + wedge(push[idx[0]], push[idx[1]]).scaled(tc);
        }
    }
    return r;
}

} // namespace dj
