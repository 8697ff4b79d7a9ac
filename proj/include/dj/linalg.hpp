#pragma once

#include "dj/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dj {

// Dense matrix over the scalar fraction field of one chart.
class Mat {
public:
    Mat(ChartPtr chart, size_t rows, size_t cols);
    static Mat from_rows(ChartPtr chart, const std::vector<std::vector<Scalar>>& rows);
    static Mat identity(ChartPtr chart, size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const ChartPtr& chart() const { return chart_; }
    Scalar& at(size_t r, size_t c);
    const Scalar& at(size_t r, size_t c) const;

    Mat transposed() const;
    Mat hcat(const Mat& other) const;
    bool operator==(const Mat& o) const;
    std::string str() const;

private:
    ChartPtr chart_;
    size_t rows_, cols_;
    std::vector<Scalar> a_;
};

struct RrefResult {
    Mat m;
    std::vector<size_t> pivot_cols;
    // True when every pivot used during elimination was certified nonvanishing
    // on the whole chart domain; then rank(m) is constant, not just generic.
    bool pivots_certified;
    std::string refused_pivot;
};

// Reduced row echelon form over the fraction field. Pivot selection prefers
// nonzero constants, then certified units, so that constant-rank claims come
// out certified whenever the matrix allows it.
RrefResult rref(const Mat& m);

size_t rank_generic(const Mat& m);

struct RankCert {
    size_t rank; // generic rank over the fraction field
    bool certified;
    std::string refused_pivot;
};

// Constant-rank certificate independent of column order: greedy elimination
// picking, at each step, the remaining entry with the best nonvanishing
// certificate (nonzero constant, then certified unit). Succeeds whenever the
// matrix has some maximal minor whose pivot chain is certified.
RankCert rank_certified(const Mat& m);

// Basis of {v : m v = 0} as rows; empty when the kernel is trivial.
std::vector<std::vector<Scalar>> nullspace(const Mat& m);

// One solution of m x = b with all free variables set to zero; nullopt when
// the system is inconsistent over the fraction field.
std::optional<std::vector<Scalar>> solve(const Mat& m, const std::vector<Scalar>& b);

Scalar det(const Mat& m);

} // namespace dj
