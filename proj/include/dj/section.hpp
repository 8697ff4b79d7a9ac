#pragma once

#include "dj/kform.hpp"
#include "dj/linalg.hpp"
#include "dj/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dj {

// A section of the double of the tangent bundle: X + xi, optionally extended
// by the two scalar slots (f paired with the tangent side, g with the
// cotangent side) used by the Jacobi-flavoured theory.
struct Section {
    ChartPtr chart;
    KVector X;  // degree 1
    Scalar f;   // extended only
    KForm xi;   // degree 1
    Scalar g;   // extended only
    bool extended = false;

    std::string str() const;
    Section operator+(const Section& o) const;
    Section operator-(const Section& o) const;
    Section operator-() const;
    Section scaled(const Scalar& s) const;
    bool operator==(const Section& o) const;
    bool is_zero() const;
};

Section cou_section(const KVector& X, const KForm& xi);
Section e1_section(const KVector& X, const Scalar& f, const KForm& xi, const Scalar& g);
Section cou_zero(const ChartPtr& chart);
Section e1_zero(const ChartPtr& chart);

enum class PairSign { Plus, Minus };

// Symmetric / antisymmetric canonical pairings; the antisymmetric one is
// undefined on extended sections.
Scalar pairing(const Section& a, const Section& b, PairSign sign);

// [X1 + xi1, X2 + xi2] with the antisymmetric exact correction term.
Section courant_bracket(const Section& a, const Section& b);

// Extended bracket on extended sections (all four component formulas).
Section ext_courant_bracket(const Section& a, const Section& b);

// Chart for the product with a line carrying an exponential weight; the new
// coordinate and unit names avoid collisions deterministically.
ChartPtr weighted_line_extension(const ChartPtr& base, std::string* fiber_coord = nullptr,
                                 std::string* fiber_unit = nullptr);

// The bracket-preserving embedding of extended sections into plain sections
// over the weighted line extension: (X,f) + (xi,g) becomes
// (X + f @t) + e^t (xi + g dt).
Section u_embed(const Section& e, const ChartPtr& extended_chart);

// A validated global frame presenting a maximal isotropic subbundle:
// pairwise plus-pairings vanish and the coefficient matrix has certified
// constant rank n (plain) or n+1 (extended).
class StructureFrame {
public:
    static StructureFrame validate(const std::vector<Section>& sections);

    const ChartPtr& chart() const { return chart_; }
    bool extended() const { return extended_; }
    size_t size() const { return sections_.size(); }
    const Section& at(size_t i) const { return sections_[i]; }
    const std::vector<Section>& sections() const { return sections_; }

    // Rows = sections, columns = [X components | f] [xi components | g].
    Mat coefficient_matrix() const;
    // Coefficients expressing s in this frame over the fraction field.
    std::optional<std::vector<Scalar>> solve_in_span(const Section& s) const;
    Section combine(const std::vector<Scalar>& coeffs) const;

private:
    StructureFrame() = default;
    ChartPtr chart_;
    bool extended_ = false;
    std::vector<Section> sections_;
};

struct SpanCompare {
    bool equal;
    std::string witness; // failing generator (rendered) when not equal
};
// Mutual span membership with unit-certified coefficient denominators.
SpanCompare span_equal(const StructureFrame& a, const StructureFrame& b);

// Pointwise image of a frame under a constant-coefficient linear map between
// charts; all frame coefficients must be constants.
enum class ImageDirection { Forward, Backward };
StructureFrame linear_image(const StructureFrame& frame, const std::vector<std::vector<GQ>>& map,
                            const ChartPtr& target, ImageDirection direction);

} // namespace dj
