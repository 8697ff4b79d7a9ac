#include "dj/linalg.hpp"

#include "dj/error.hpp"

#include <sstream>

namespace dj {

Mat::Mat(ChartPtr chart, size_t rows, size_t cols)
    : chart_(std::move(chart)), rows_(rows), cols_(cols), a_(rows * cols, Scalar::zero(chart_)) {}

Mat Mat::from_rows(ChartPtr chart, const std::vector<std::vector<Scalar>>& rows) {
    size_t nc = rows.empty() ? 0 : rows.front().size();
    Mat m(chart, rows.size(), nc);
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc) fail(Errc::Internal, "ragged matrix rows");
        for (size_t c = 0; c < nc; ++c) {
            require_same_chart(chart, rows[r][c].chart(), "Mat::from_rows");
            m.at(r, c) = rows[r][c];
        }
    }
    return m;
}

Mat Mat::identity(ChartPtr chart, size_t n) {
    Mat m(chart, n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(chart);
    return m;
}

Scalar& Mat::at(size_t r, size_t c) {
    if (r >= rows_ || c >= cols_) fail(Errc::Internal, "matrix index out of range");
    return a_[r * cols_ + c];
}

const Scalar& Mat::at(size_t r, size_t c) const {
    if (r >= rows_ || c >= cols_) fail(Errc::Internal, "matrix index out of range");
    return a_[r * cols_ + c];
}

Mat Mat::transposed() const {
    Mat t(chart_, cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

Mat Mat::hcat(const Mat& other) const {
    if (other.rows_ != rows_) fail(Errc::Internal, "hcat row mismatch");
    require_same_chart(chart_, other.chart_, "Mat::hcat");
    Mat m(chart_, rows_, cols_ + other.cols_);
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c) m.at(r, c) = at(r, c);
        for (size_t c = 0; c < other.cols_; ++c) m.at(r, cols_ + c) = other.at(r, c);
    }
    return m;
}

bool Mat::operator==(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

std::string Mat::str() const {
    std::ostringstream out;
    for (size_t r = 0; r < rows_; ++r) {
        out << "[";
        for (size_t c = 0; c < cols_; ++c) {
            if (c) out << ", ";
            out << at(r, c).str();
        }
        out << "]";
        if (r + 1 < rows_) out << "\n";
    }
    return out.str();
}

namespace {

// Pivot quality: 2 = nonzero constant, 1 = certified unit, 0 = merely nonzero.
int pivot_quality(const Scalar& s) {
    if (s.is_zero()) return -1;
    if (s.is_constant()) return 2;
    return unit_certify(s).ok() ? 1 : 0;
}

} // namespace

RrefResult rref(const Mat& m) {
    RrefResult res{m, {}, true, {}};
    Mat& a = res.m;
    size_t lead = 0;
    for (size_t col = 0; col < a.cols() && lead < a.rows(); ++col) {
        size_t best = a.rows();
        int best_q = -1;
        for (size_t r = lead; r < a.rows(); ++r) {
            int q = pivot_quality(a.at(r, col));
            if (q > best_q) {
                best_q = q;
                best = r;
                if (q == 2) break;
            }
        }
        if (best_q < 0) continue; // column already clear
        if (best != lead)
            for (size_t c = 0; c < a.cols(); ++c) std::swap(a.at(lead, c), a.at(best, c));
        if (best_q == 0 && res.pivots_certified) {
            res.pivots_certified = false;
            res.refused_pivot = a.at(lead, col).str();
        }
        Scalar inv = a.at(lead, col).inv();
        for (size_t c = 0; c < a.cols(); ++c) a.at(lead, c) = a.at(lead, c) * inv;
        for (size_t r = 0; r < a.rows(); ++r) {
            if (r == lead) continue;
            Scalar f = a.at(r, col);
            if (f.is_zero()) continue;
            for (size_t c = 0; c < a.cols(); ++c)
                a.at(r, c) = a.at(r, c) - f * a.at(lead, c);
        }
        res.pivot_cols.push_back(col);
        ++lead;
    }
    return res;
}

size_t rank_generic(const Mat& m) { return rref(m).pivot_cols.size(); }

RankCert rank_certified(const Mat& m) {
    Mat a = m;
    std::vector<bool> row_done(a.rows(), false), col_done(a.cols(), false);
    RankCert res{0, true, {}};
    for (;;) {
        size_t br = a.rows(), bc = a.cols();
        int best_q = -1;
        for (size_t r = 0; r < a.rows() && best_q < 2; ++r) {
            if (row_done[r]) continue;
            for (size_t c = 0; c < a.cols(); ++c) {
                if (col_done[c]) continue;
                int q = pivot_quality(a.at(r, c));
                if (q > best_q) {
                    best_q = q;
                    br = r;
                    bc = c;
                    if (q == 2) break;
                }
            }
        }
        if (best_q < 0) break; // remaining block is zero
        if (best_q == 0 && res.certified) {
            res.certified = false;
            res.refused_pivot = a.at(br, bc).str();
        }
        Scalar inv = a.at(br, bc).inv();
        for (size_t r = 0; r < a.rows(); ++r) {
            if (row_done[r] || r == br) continue;
            Scalar f = a.at(r, bc) * inv;
            if (f.is_zero()) continue;
            for (size_t c = 0; c < a.cols(); ++c)
                if (!col_done[c]) a.at(r, c) = a.at(r, c) - f * a.at(br, c);
        }
        row_done[br] = true;
        col_done[bc] = true;
        ++res.rank;
    }
    return res;
}

std::vector<std::vector<Scalar>> nullspace(const Mat& m) {
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : r.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Scalar> v(m.cols(), Scalar::zero(m.chart()));
        v[free_col] = Scalar::one(m.chart());
        for (size_t k = 0; k < r.pivot_cols.size(); ++k)
            v[r.pivot_cols[k]] = -r.m.at(k, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Scalar>> solve(const Mat& m, const std::vector<Scalar>& b) {
    if (b.size() != m.rows()) fail(Errc::Internal, "solve: rhs length mismatch");
    Mat rhs(m.chart(), m.rows(), 1);
    for (size_t r = 0; r < m.rows(); ++r) rhs.at(r, 0) = b[r];
    RrefResult red = rref(m.hcat(rhs));
    for (size_t c : red.pivot_cols)
        if (c == m.cols()) return std::nullopt; // pivot in the rhs column
    std::vector<Scalar> x(m.cols(), Scalar::zero(m.chart()));
    for (size_t k = 0; k < red.pivot_cols.size(); ++k)
        x[red.pivot_cols[k]] = red.m.at(k, m.cols());
    return x;
}

Scalar det(const Mat& m) {
    if (m.rows() != m.cols()) fail(Errc::Internal, "det of non-square matrix");
    Mat a = m;
    Scalar d = Scalar::one(m.chart());
    for (size_t col = 0; col < a.cols(); ++col) {
        size_t piv = a.rows();
        for (size_t r = col; r < a.rows(); ++r)
            if (!a.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv == a.rows()) return Scalar::zero(m.chart());
        if (piv != col) {
            for (size_t c = 0; c < a.cols(); ++c) std::swap(a.at(col, c), a.at(piv, c));
            d = -d;
        }
        d = d * a.at(col, col);
        Scalar inv = a.at(col, col).inv();
        for (size_t r = col + 1; r < a.rows(); ++r) {
            Scalar f = a.at(r, col) * inv;
            if (f.is_zero()) continue;
            for (size_t c = col; c < a.cols(); ++c)
                a.at(r, c) = a.at(r, c) - f * a.at(col, c);
        }
    }
    return d;
}

} // namespace dj
