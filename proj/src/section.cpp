#include "dj/section.hpp"

#include "dj/error.hpp"

#include <sstream>

namespace dj {

namespace {

Scalar half(const ChartPtr& c) { return Scalar::rational(c, Rat(1, 2)); }

void require_same_kind(const Section& a, const Section& b, const char* where) {
    require_same_chart(a.chart, b.chart, where);
    if (a.extended != b.extended)
        fail(Errc::KindMismatch, std::string(where) + ": mixing plain and extended sections");
}

Scalar lift_scalar(const Scalar& s, const ChartPtr& target) { return subst(s, target, {}); }

KVector lift_vector(const KVector& v, const ChartPtr& target) {
    KVector r = KVector::zero(target, v.degree());
    for (const auto& [idx, c] : v.terms()) {
        MultiIndex mapped;
        for (uint32_t i : idx) {
            int t = target->coord_index(v.chart()->coord(i).name);
            if (t < 0) fail(Errc::UnknownCoordinate, v.chart()->coord(i).name);
            mapped.push_back(static_cast<uint32_t>(t));
        }
        r.add_term(std::move(mapped), lift_scalar(c, target));
    }
    return r;
}

KForm lift_form(const KForm& w, const ChartPtr& target) {
    KForm r = KForm::zero(target, w.degree());
    for (const auto& [idx, c] : w.terms()) {
        MultiIndex mapped;
        for (uint32_t i : idx) {
            int t = target->coord_index(w.chart()->coord(i).name);
            if (t < 0) fail(Errc::UnknownCoordinate, w.chart()->coord(i).name);
            mapped.push_back(static_cast<uint32_t>(t));
        }
        r.add_term(std::move(mapped), lift_scalar(c, target));
    }
    return r;
}

} // namespace

std::string Section::str() const {
    std::ostringstream out;
    if (extended)
        out << "(" << X.str() << ", " << f.str() << ") + (" << xi.str() << ", " << g.str() << ")";
    else
        out << X.str() << " + " << xi.str();
    return out.str();
}

Section Section::operator+(const Section& o) const {
    require_same_kind(*this, o, "Section::operator+");
    return Section{chart, X + o.X, f + o.f, xi + o.xi, g + o.g, extended};
}

Section Section::operator-(const Section& o) const { return *this + (-o); }

Section Section::operator-() const { return Section{chart, -X, -f, -xi, -g, extended}; }

Section Section::scaled(const Scalar& s) const {
    return Section{chart, X.scaled(s), f * s, xi.scaled(s), g * s, extended};
}

bool Section::operator==(const Section& o) const {
    return extended == o.extended && X == o.X && xi == o.xi && f == o.f && g == o.g;
}

bool Section::is_zero() const { return X.is_zero() && xi.is_zero() && f.is_zero() && g.is_zero(); }

Section cou_section(const KVector& X, const KForm& xi) {
    require_same_chart(X.chart(), xi.chart(), "cou_section");
    if (X.degree() != 1 || xi.degree() != 1)
        fail(Errc::DegreeOverflow, "sections carry a degree-1 vector and a 1-form");
    return Section{X.chart(), X, Scalar::zero(X.chart()), xi, Scalar::zero(X.chart()), false};
}

Section e1_section(const KVector& X, const Scalar& f, const KForm& xi, const Scalar& g) {
    require_same_chart(X.chart(), xi.chart(), "e1_section");
    require_same_chart(X.chart(), f.chart(), "e1_section");
    require_same_chart(X.chart(), g.chart(), "e1_section");
    if (X.degree() != 1 || xi.degree() != 1)
        fail(Errc::DegreeOverflow, "sections carry a degree-1 vector and a 1-form");
    return Section{X.chart(), X, f, xi, g, true};
}

Section cou_zero(const ChartPtr& chart) {
    return cou_section(KVector::zero(chart, 1), KForm::zero(chart, 1));
}

Section e1_zero(const ChartPtr& chart) {
    return e1_section(KVector::zero(chart, 1), Scalar::zero(chart), KForm::zero(chart, 1),
                      Scalar::zero(chart));
}

Scalar pairing(const Section& a, const Section& b, PairSign sign) {
    require_same_kind(a, b, "pairing");
    const ChartPtr& c = a.chart;
    Scalar first = eval1(a.xi, b.X);  // i_{X2} xi1
    Scalar second = eval1(b.xi, a.X); // i_{X1} xi2
    if (sign == PairSign::Minus) {
        if (a.extended)
            fail(Errc::MinusPairingUndefinedForE1, "minus pairing on extended sections");
        return half(c) * (first - second);
    }
    Scalar r = half(c) * (first + second);
    if (a.extended) r = r + half(c) * (a.g * b.f + b.g * a.f);
    return r;
}

Section courant_bracket(const Section& a, const Section& b) {
    require_same_kind(a, b, "courant_bracket");
    if (a.extended) fail(Errc::KindMismatch, "courant_bracket expects plain sections");
    const ChartPtr& c = a.chart;
    KVector X = lie_bracket(a.X, b.X);
    Scalar anti = eval1(a.xi, b.X) - eval1(b.xi, a.X);
    KForm xi = lie_derivative(a.X, b.xi) - lie_derivative(b.X, a.xi) + d(anti).scaled(half(c));
    return cou_section(X, xi);
}

Section ext_courant_bracket(const Section& a, const Section& b) {
    require_same_kind(a, b, "ext_courant_bracket");
    if (!a.extended) fail(Errc::KindMismatch, "ext_courant_bracket expects extended sections");
    const ChartPtr& c = a.chart;
    const Scalar h = half(c);
    Scalar i21 = eval1(a.xi, b.X); // i_{X2} xi1
    Scalar i12 = eval1(b.xi, a.X); // i_{X1} xi2

    KVector X = lie_bracket(a.X, b.X);
    Scalar f = apply_vec(a.X, b.f) - apply_vec(b.X, a.f);
    KForm xi = lie_derivative(a.X, b.xi) - lie_derivative(b.X, a.xi) +
               d(i21 - i12).scaled(h) + b.xi.scaled(a.f) - a.xi.scaled(b.f) +
               (d(a.f).scaled(b.g) - d(b.f).scaled(a.g) - d(b.g).scaled(a.f) +
                d(a.g).scaled(b.f))
                   .scaled(h);
    Scalar g = apply_vec(a.X, b.g) - apply_vec(b.X, a.g) +
               h * (i21 - i12 - b.f * a.g + a.f * b.g);
    return e1_section(X, f, xi, g);
}

ChartPtr weighted_line_extension(const ChartPtr& base, std::string* fiber_coord,
                                 std::string* fiber_unit) {
    auto taken = [&](const std::string& n) {
        if (base->has_coord(n)) return true;
        for (uint32_t g = 0; g < base->gen_count(); ++g)
            if (base->gen_name(g) == n) return true;
        return false;
    };
    std::string t = "t";
    while (taken(t)) t += "_";
    std::string et = "e" + t;
    while (taken(et)) et += "_";

    std::vector<Coord> coords;
    for (uint32_t i = 0; i < base->dim(); ++i) coords.push_back(base->coord(i));
    coords.push_back(Coord{t, false, false});
    std::vector<ExpUnit> units;
    for (uint32_t g = 0; g < base->gen_count(); ++g)
        if (base->gen_kind(g) == GenKind::Unit) units.push_back(base->unit_of_gen(g));
    units.push_back(ExpUnit{et, t, Rat(1)});
    if (fiber_coord) *fiber_coord = t;
    if (fiber_unit) *fiber_unit = et;
    return Chart::make(base->name() + "_x_line", coords, units);
}

Section u_embed(const Section& e, const ChartPtr& extended_chart) {
    if (!e.extended) fail(Errc::KindMismatch, "u_embed expects an extended section");
    // Recover the fiber coordinate: the unique coordinate of the extension
    // that the base chart lacks and that carries a rate-1 unit.
    std::string t, et;
    for (uint32_t i = 0; i < extended_chart->dim(); ++i) {
        const std::string& n = extended_chart->coord(i).name;
        if (!e.chart->has_coord(n)) {
            t = n;
            break;
        }
    }
    if (t.empty()) fail(Errc::ChartMismatch, "extension chart adds no fiber coordinate");
    for (uint32_t g = 0; g < extended_chart->gen_count(); ++g)
        if (extended_chart->gen_kind(g) == GenKind::Unit &&
            extended_chart->unit_of_gen(g).base == t)
            et = extended_chart->unit_of_gen(g).name;
    if (et.empty()) fail(Errc::ChartMismatch, "fiber coordinate has no exponential unit");

    KVector X = lift_vector(e.X, extended_chart) +
                KVector::basis(extended_chart, t).scaled(lift_scalar(e.f, extended_chart));
    Scalar weight = Scalar::generator(extended_chart, et);
    KForm xi = (lift_form(e.xi, extended_chart) +
                KForm::d_coord(extended_chart, t).scaled(lift_scalar(e.g, extended_chart)))
                   .scaled(weight);
    return cou_section(X, xi);
}

Mat StructureFrame::coefficient_matrix() const {
    uint32_t n = chart_->dim();
    size_t cols = extended_ ? 2 * n + 2 : 2 * n;
    Mat m(chart_, sections_.size(), cols);
    for (size_t r = 0; r < sections_.size(); ++r) {
        const Section& s = sections_[r];
        size_t col = 0;
        for (uint32_t i = 0; i < n; ++i) m.at(r, col++) = s.X.coeff({i});
        if (extended_) m.at(r, col++) = s.f;
        for (uint32_t i = 0; i < n; ++i) m.at(r, col++) = s.xi.coeff({i});
        if (extended_) m.at(r, col++) = s.g;
    }
    return m;
}

StructureFrame StructureFrame::validate(const std::vector<Section>& sections) {
    if (sections.empty()) fail(Errc::ValidationError, "empty frame");
    StructureFrame fr;
    fr.chart_ = sections.front().chart;
    fr.extended_ = sections.front().extended;
    for (const Section& s : sections) {
        require_same_chart(fr.chart_, s.chart, "StructureFrame::validate");
        if (s.extended != fr.extended_)
            fail(Errc::KindMismatch, "frame mixes plain and extended sections");
    }
    size_t expected = fr.chart_->dim() + (fr.extended_ ? 1 : 0);
    if (sections.size() != expected)
        fail(Errc::ValidationError, "frame must have " + std::to_string(expected) +
                                        " sections, got " + std::to_string(sections.size()));
    fr.sections_ = sections;

    for (size_t i = 0; i < sections.size(); ++i)
        for (size_t j = i; j < sections.size(); ++j) {
            Scalar p = pairing(sections[i], sections[j], PairSign::Plus);
            if (!p.is_zero())
                fail(Errc::NotIsotropic, "generators " + std::to_string(i) + "," +
                                             std::to_string(j) + " pair to " + p.str());
        }

    RankCert cert = rank_certified(fr.coefficient_matrix());
    if (cert.rank != sections.size())
        fail(Errc::RankNotCertified, "frame rank " + std::to_string(cert.rank) + " below " +
                                         std::to_string(sections.size()));
    if (!cert.certified)
        fail(Errc::RankNotCertified,
             "no unit-certified maximal minor; pivot " + cert.refused_pivot);
    return fr;
}

std::optional<std::vector<Scalar>> StructureFrame::solve_in_span(const Section& s) const {
    require_same_chart(chart_, s.chart, "solve_in_span");
    if (s.extended != extended_) fail(Errc::KindMismatch, "solve_in_span: section kind differs");
    uint32_t n = chart_->dim();
    std::vector<Scalar> rhs;
    for (uint32_t i = 0; i < n; ++i) rhs.push_back(s.X.coeff({i}));
    if (extended_) rhs.push_back(s.f);
    for (uint32_t i = 0; i < n; ++i) rhs.push_back(s.xi.coeff({i}));
    if (extended_) rhs.push_back(s.g);
    return solve(coefficient_matrix().transposed(), rhs);
}

Section StructureFrame::combine(const std::vector<Scalar>& coeffs) const {
    if (coeffs.size() != sections_.size()) fail(Errc::Internal, "combine: coefficient count");
    Section acc = extended_ ? e1_zero(chart_) : cou_zero(chart_);
    for (size_t i = 0; i < coeffs.size(); ++i) acc = acc + sections_[i].scaled(coeffs[i]);
    return acc;
}

namespace {

bool certified_combination(const StructureFrame& host, const Section& s) {
    auto c = host.solve_in_span(s);
    if (!c) return false;
    for (const Scalar& x : *c)
        if (!unit_certify(Scalar::from_poly(x.den())).ok()) return false;
    return true;
}

} // namespace

SpanCompare span_equal(const StructureFrame& a, const StructureFrame& b) {
    if (!a.chart()->same_as(*b.chart()) || a.extended() != b.extended())
        return {false, "frames live on different charts or kinds"};
    for (size_t i = 0; i < a.size(); ++i)
        if (!certified_combination(b, a.at(i))) return {false, a.at(i).str()};
    for (size_t i = 0; i < b.size(); ++i)
        if (!certified_combination(a, b.at(i))) return {false, b.at(i).str()};
    return {true, ""};
}

namespace {

Scalar const_scalar(const ChartPtr& chart, const GQ& v) { return Scalar::constant(chart, v); }

GQ constant_of(const Scalar& s, const char* where) {
    if (!s.is_constant())
        fail(Errc::ValidationError,
             std::string(where) + ": pointwise image needs constant coefficients, got " + s.str());
    return s.constant_value();
}

// Trims zero rows of a reduced matrix, keeping the column count.
Mat nonzero_rows(const Mat& m) {
    std::vector<size_t> keep;
    for (size_t r = 0; r < m.rows(); ++r) {
        bool zero = true;
        for (size_t c = 0; c < m.cols(); ++c) zero &= m.at(r, c).is_zero();
        if (!zero) keep.push_back(r);
    }
    Mat out(m.chart(), keep.size(), m.cols());
    for (size_t r = 0; r < keep.size(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) out.at(r, c) = m.at(keep[r], c);
    return out;
}

bool row_space_equal(const Mat& a, const Mat& b) {
    if (a.cols() != b.cols()) return false;
    return nonzero_rows(rref(a).m) == nonzero_rows(rref(b).m);
}

} // namespace

StructureFrame linear_image(const StructureFrame& frame, const std::vector<std::vector<GQ>>& map,
                            const ChartPtr& target, ImageDirection direction) {
    const ChartPtr& source = frame.chart();
    uint32_t n = source->dim();
    uint32_t m = target->dim();
    // The matrix always sends the forward-direction source to its target:
    //   forward:  rows = target dim, cols = frame-chart dim;
    //   backward: the frame lives on the map's target, so rows = frame-chart
    //             dim and cols = image-chart dim.
    uint32_t exp_rows = direction == ImageDirection::Forward ? m : n;
    uint32_t exp_cols = direction == ImageDirection::Forward ? n : m;
    if (map.size() != exp_rows)
        fail(Errc::ValidationError, "linear map has " + std::to_string(map.size()) +
                                        " rows, expected " + std::to_string(exp_rows));
    for (const auto& row : map)
        if (row.size() != exp_cols)
            fail(Errc::ValidationError, "linear map has a row of " + std::to_string(row.size()) +
                                            " entries, expected " + std::to_string(exp_cols));

    size_t k = frame.size();
    bool ext = frame.extended();

    // Constant coefficient blocks of the frame.
    auto Xc = [&](size_t j, uint32_t i) { return constant_of(frame.at(j).X.coeff({i}), "linear_image"); };
    auto Xic = [&](size_t j, uint32_t i) { return constant_of(frame.at(j).xi.coeff({i}), "linear_image"); };
    auto fc = [&](size_t j) { return constant_of(frame.at(j).f, "linear_image"); };
    auto gc = [&](size_t j) { return constant_of(frame.at(j).g, "linear_image"); };

    auto combo = [&](auto&& entry, const std::vector<Scalar>& v) {
        Scalar acc = Scalar::zero(target);
        for (size_t j = 0; j < k; ++j) acc = acc + const_scalar(target, entry(j)) * v[j];
        return acc;
    };

    std::vector<std::vector<Scalar>> image_rows;
    size_t out_cols = ext ? 2 * m + 2 : 2 * m;

    if (direction == ImageDirection::Forward) {
        // Unknowns (c, zeta): xi(c) = map^T zeta; image (map X(c), f(c)) + (zeta, g(c)).
        Mat sys(target, n, k + m);
        for (uint32_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < k; ++j) sys.at(i, j) = const_scalar(target, Xic(j, i));
            for (uint32_t a = 0; a < m; ++a) sys.at(i, k + a) = const_scalar(target, -map[a][i]);
        }
        for (const auto& v : nullspace(sys)) {
            std::vector<Scalar> row(out_cols, Scalar::zero(target));
            size_t col = 0;
            for (uint32_t a = 0; a < m; ++a) { // map . X(c)
                Scalar acc = Scalar::zero(target);
                for (uint32_t i = 0; i < n; ++i)
                    acc = acc + combo([&](size_t j) { return map[a][i] * Xc(j, i); }, v);
                row[col++] = acc;
            }
            if (ext) row[col++] = combo(fc, v);
            for (uint32_t a = 0; a < m; ++a) row[col++] = v[k + a];
            if (ext) row[col++] = combo(gc, v);
            image_rows.push_back(std::move(row));
        }
    } else {
        // Unknowns (c, Y): X(c) = map Y; image (Y, f(c)) + (map^T xi(c), g(c)).
        Mat sys(target, n, k + m);
        for (uint32_t a = 0; a < n; ++a) {
            for (size_t j = 0; j < k; ++j) sys.at(a, j) = const_scalar(target, Xc(j, a));
            for (uint32_t i = 0; i < m; ++i) sys.at(a, k + i) = const_scalar(target, -map[a][i]);
        }
        for (const auto& v : nullspace(sys)) {
            std::vector<Scalar> row(out_cols, Scalar::zero(target));
            size_t col = 0;
            for (uint32_t i = 0; i < m; ++i) row[col++] = v[k + i];
            if (ext) row[col++] = combo(fc, v);
            for (uint32_t i = 0; i < m; ++i) { // map^T xi(c)
                Scalar acc = Scalar::zero(target);
                for (uint32_t a = 0; a < n; ++a)
                    acc = acc + combo([&](size_t j) { return map[a][i] * Xic(j, a); }, v);
                row[col++] = acc;
            }
            if (ext) row[col++] = combo(gc, v);
            image_rows.push_back(std::move(row));
        }
    }
    if (image_rows.empty()) fail(Errc::Internal, "linear image produced an empty span");

    Mat span = nonzero_rows(rref(Mat::from_rows(target, image_rows)).m);
    uint32_t dim_out = target->dim();
    std::vector<Section> out;
    for (size_t r = 0; r < span.rows(); ++r) {
        KVector X = KVector::zero(target, 1);
        KForm xi = KForm::zero(target, 1);
        size_t col = 0;
        for (uint32_t i = 0; i < dim_out; ++i) X.add_term({i}, span.at(r, col++));
        Scalar f = ext ? span.at(r, col++) : Scalar::zero(target);
        for (uint32_t i = 0; i < dim_out; ++i) xi.add_term({i}, span.at(r, col++));
        Scalar g = ext ? span.at(r, col++) : Scalar::zero(target);
        out.push_back(ext ? e1_section(X, f, xi, g) : cou_section(X, xi));
    }
    StructureFrame result = StructureFrame::validate(out);

    if (!ext) {
        // Projection identities of the pointwise theory, checked on the result.
        Mat coeffs = result.coefficient_matrix();
        size_t kk = result.size();
        Mat xblock(target, kk, dim_out), xiblock(target, kk, dim_out);
        for (size_t r = 0; r < kk; ++r)
            for (uint32_t i = 0; i < dim_out; ++i) {
                xblock.at(r, i) = coeffs.at(r, i);
                xiblock.at(r, i) = coeffs.at(r, dim_out + i);
            }
        // L cap V*: combinations with zero vector part; annihilator vs X-span.
        auto check = [&](const Mat& proj_block, const Mat& other_block) {
            std::vector<std::vector<Scalar>> inter_rows;
            for (const auto& v : nullspace(other_block.transposed())) {
                std::vector<Scalar> row(dim_out, Scalar::zero(target));
                for (uint32_t i = 0; i < dim_out; ++i)
                    for (size_t j = 0; j < kk; ++j)
                        row[i] = row[i] + v[j] * proj_block.at(j, i);
                inter_rows.push_back(std::move(row));
            }
            Mat inter = inter_rows.empty() ? Mat(target, 0, dim_out)
                                           : Mat::from_rows(target, inter_rows);
            std::vector<std::vector<Scalar>> ann = nullspace(inter);
            Mat ann_m = ann.empty() ? Mat(target, 0, dim_out) : Mat::from_rows(target, ann);
            Mat proj = other_block;
            if (!row_space_equal(proj, ann_m))
                fail(Errc::Internal, "projection identity failed on image frame");
        };
        // rho_V(L) = (L cap V*)^o : X-span vs annihilator of forms with X = 0.
        check(xiblock, xblock);
        // rho_V*(L) = (L cap V)^o : xi-span vs annihilator of vectors with xi = 0.
        check(xblock, xiblock);
    }
    return result;
}

} // namespace dj
