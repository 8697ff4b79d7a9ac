#pragma once

#include "dj/djacobi.hpp"
#include "dj/preq.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dj {

// Coordinate model of a contact manifold (u, q_i, p_i) with the 1-form
// du + sum p_i dq_i, together with the charts of its two one-sided
// completions: the zero end carries the radial coordinate s (the boundary
// s = 0 stays inside the chart domain), the infinity end carries the
// inverted radial coordinate r, and the two strictly positive copies
// overlap through s = 1/r.
struct LebrunFamily {
    int n;             // number of (q, p) pairs
    ChartPtr contact;  // (u, q_1..q_n, p_1..p_n)
    KForm sigma;       // du + sum p_i dq_i on the contact chart
    ChartPtr s_chart;  // contact coordinates plus s, unflagged
    ChartPtr r_chart;  // contact coordinates plus r, unflagged
    ChartPtr s_pos;    // overlap copy with s > 0 flagged
    ChartPtr r_pos;    // overlap copy with r > 0 flagged
};

LebrunFamily make_lebrun(int n = 1);

// du + sum p_i dq_i on any chart carrying coordinates named u, q_i, p_i.
KForm contact_form(const ChartPtr& c, int n);

// The degree-1-homogeneous bivector r[d/du ^ (r d/dr + sum p_i d/dp_i)
// + sum d/dp_i ^ d/dq_i] on any chart carrying u, q_i, p_i and the named
// radial coordinate.  Oriented so that its graph is exactly the s = 1/r
// transport of the boundary-form graph (the bivector inverse of the
// transported 2-form under this library's graph conventions).
KVector homogeneous_bivector(const ChartPtr& c, int n, const std::string& radial);

// Graph of d(unit * (du + sum p dq)) on a fresh chart extending the
// contact coordinates by t and the exponential unit over it.
DiracStructure symplectization(const LebrunFamily& F);

// Graph of d(s * (du + sum p dq)) on the closed zero-end chart, with the
// boundary s = 0 declared as a rank-drop locus.
DiracStructure closure_zero(const LebrunFamily& F);

// Bivector graph of the homogeneous bivector on the closed infinity-end
// chart, with r = 0 declared as a rank-drop locus.
DiracStructure lebrun_poisson(const LebrunFamily& F);

// Both closed ends plus a transport certificate over the overlap: the
// zero-end graph, pushed through s = 1/r onto the positive r-chart, must
// span the bivector graph there.
struct GluedDirac {
    DiracStructure zero_end;
    DiracStructure infinity_end;
    DiracStructure overlap_from_zero; // transported two-form graph on r > 0
    DiracStructure overlap_poisson;   // bivector graph on r > 0
    bool overlap_equal = false;
};

GluedDirac glued_dirac(const LebrunFamily& F);

// The pair (homogeneous bivector - r d/dth ^ d/dr, d/dth) on a chart
// carrying u, q_i, p_i, the named radial coordinate, and the named
// angular coordinate; this is the graph presentation of the structure the
// bundle data over the r-chart induces on its circle extension.
JacobiPair circle_bundle_pair(const ChartPtr& c, int n, const std::string& radial,
                              const std::string& angular);

// Its graph on the circle extension of the infinity-end chart, with the
// r = 0 locus carried over.
DiracJacobiStructure lebrun_jacobi(const LebrunFamily& F);

// Validated bundle data over the two ends: zero curvature, zero potential,
// and the anchored pair (0, -s * contact form) respectively
// (-r d/dr, 0).
PreqData preq_zero_end(const LebrunFamily& F);
PreqData preq_infinity_end(const LebrunFamily& F);

// Is df annihilated along the sliced locus by every tangent direction the
// structure pairs to zero there?  The directions solve sum c_k xi_k = 0
// with the frame covectors restricted to the slice.
bool boundary_basic(const DiracStructure& S, const RatPoint& locus, const Scalar& f);

struct BoundaryReport {
    std::vector<std::vector<Scalar>> kernel; // tangent directions at the sample point
    bool kernel_is_contact = false;          // spans the kernel of the contact form there
    std::vector<std::pair<std::string, bool>> basics; // sample expression -> verdict
};

// Characteristic data of the zero end along its boundary: the pointwise
// kernel at the origin compared against the contact kernel, and a sample
// table of boundary-basic verdicts.
BoundaryReport char_boundary_check(const LebrunFamily& F);

// Degree-<=1 Taylor truncation of every coefficient at the point.
// Throws NonPolynomialAtPoint when a coefficient's denominator vanishes
// at the point.
KVector linearize_at_point(const KVector& T, const RatPoint& p);

// Chart with the radial and angular coordinates replaced by rectangular
// ones (x, y); every other coordinate is kept in order.
ChartPtr pinched_chart(const ChartPtr& polar, const std::string& radial,
                       const std::string& angular);

// Rewrites a multivector through the radial square map: the radial
// coordinate becomes x^2 + y^2, the scaled radial field x d/dx + y d/dy
// is half of the image of twice the radial one, and the angular field
// becomes x d/dy - y d/dx.  Throws FractionalPowerResidue when a
// denominator survives the substitution or a coefficient depends on the
// angular coordinate.
KVector pinch_multivector(const KVector& T, const std::string& radial,
                          const std::string& angular, const ChartPtr& rect);

struct PinchedPair {
    KVector biv;
    KVector vec;
    KVector degeneracy;      // image of the angular direction
    RatPoint center;         // binding where the image collapses
    bool center_verified = false; // degeneracy restricts to zero on `center`
};

// Transports a pair and reports the degenerate direction of the map.
PinchedPair pinch_pair(const KVector& biv, const KVector& vec, const std::string& radial,
                       const std::string& angular, const ChartPtr& rect);

// (lam / f, E / f - lam(., d(1/f))): the rescaled pair induced by
// dividing the bracket's arguments by the factor.
JacobiPair conformal_transform(const JacobiPair& J, const Scalar& f);

struct ContactReport {
    bool nondegenerate = false;
    Scalar det; // determinant of the structure matrix on the residue chart
    explicit ContactReport(const ChartPtr& residue) : det(Scalar::zero(residue)) {}
};

// Is the pair's bundle map (xi, g) -> (lam(., xi) - g E, xi(E))
// invertible at the point?  Exact determinant over the residue field.
ContactReport contact_check(const JacobiPair& J, const RatPoint& p);

} // namespace dj
