#pragma once

#include "dj/algebroid.hpp"
#include "dj/djacobi.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dj {

// Circle-bundle data over a plain structure: a closed curvature 2-form, an
// anchored pair presenting the matching cochain, and a primitive 1-form for
// the connection on the trivialized bundle (connection = dfiber + pull of
// the potential, with the fiber field of pairing 1 against it).
struct PreqData {
    DiracStructure base;
    KForm curvature;   // 2-form on the base chart
    AnchorRep pair;    // (A, alpha) on the base chart, isotropic
    KForm potential;   // 1-form with d(potential) = curvature
    LCochain1 beta;    // derived cochain of the pair against the base frame
    ChartPtr total;    // base chart x circle fiber
    std::string fiber; // name of the appended periodic coordinate
};

// Validates the three defining identities exactly: d(potential) = curvature,
// alpha(A) = 0, and the curvature matching residual of the derived cochain
// vanishes on every frame pair.
PreqData make_preq_data(const DiracStructure& base, const KForm& curvature, const AnchorRep& pair,
                        const KForm& potential);

// Base chart with one appended periodic coordinate (collision-avoided name).
ChartPtr circle_extension(const ChartPtr& base, std::string* fiber_coord = nullptr);

// Bundle-projection lifts: coefficients substituted by generator name.
Scalar pull_scalar(const PreqData& d, const Scalar& f);
KForm pull_form(const PreqData& d, const KForm& w);
KVector lift_vector(const PreqData& d, const KVector& v);
// X minus potential(X) times the fiber field.
KVector lift_horizontal(const PreqData& d, const KVector& v);
// dfiber + pull(potential).
KForm connection_form(const PreqData& d);

// The induced structure on the total chart: for every base generator X + xi
// the section (X^H + beta(X+xi) E, 0) + (pull xi, 0), together with
// (-E,0)+(0,1) and (-A^H,1)+(connection - pull alpha, 0). The result is
// revalidated and checked closed under the extended bracket.
DiracJacobiStructure build_Lbar(const PreqData& d);

// Fraction-field generators of the intersection of the frame span with the
// tangent factor (zero covector components and zero scalar slots).
std::vector<KVector> dj_tangent_intersection(const DiracJacobiStructure& S);

struct ForwardWitness {
    bool found = false;
    std::vector<Scalar> coeffs; // frame coefficients on the total chart
    std::string residual;       // failure description when not found
};
// Seeks a frame combination of the total structure projecting onto the
// target base section: base vector components, both scalar slots and the
// pulled-back covector match, the covector has no fiber component, and the
// fiber vector component is unconstrained.
ForwardWitness forward_image_witness(const PreqData& d, const DiracJacobiStructure& total_structure,
                                     const Section& target);

// User-supplied leafwise data for the non-precontact classification branch.
struct LcpInput {
    KForm gamma_tilde; // base 1-form: kills every anchor image, takes 1 on A
    KForm omega_leaf;  // base 2-form: matches the pairing table, kills A
};
struct LeafClass {
    bool precontact = false;
    KForm one_form;                // the classifying 1-form on the total chart
    std::optional<KForm> two_form; // companion 2-form in the non-precontact case
};
// Classifies the leaf through a fully bound rational base point by whether
// the pair's vector member lies in the span of the evaluated anchors; the
// precontact branch solves a covector companion for it over the fraction
// field, the other branch verifies and assembles the supplied leafwise data.
LeafClass leaf_classify(const PreqData& d, const RatPoint& p,
                        const std::optional<LcpInput>& supplied = std::nullopt);

// Generator-wise transform (X,f)+(xi,g) -> (X,f)+(xi + i_X dgamma + f gamma,
// g - gamma(X)); gamma need not be closed.
DiracJacobiStructure ext_bfield(const DiracJacobiStructure& S, const KForm& gamma);

// X of the pulled-back function: horizontal lift of the base hamiltonian
// field plus (beta-pairing minus the function) times the fiber field;
// verified to solve the admissibility system on the total chart.
KVector preq_hamiltonian(const PreqData& d, const Scalar& g);

// Finitely supported grade decomposition with base-chart coefficients; the
// fiber field acts on grade k by k tau.
struct GradedFunction {
    std::map<int, Scalar> parts;
    bool operator==(const GradedFunction& o) const { return parts == o.parts; }
};
GradedFunction make_graded(std::vector<std::pair<int, Scalar>> parts);
GradedFunction graded_add(const GradedFunction& a, const GradedFunction& b);
GradedFunction graded_scale(const Scalar& c, const GradedFunction& a);

// The grade-wise action of an admissible base function g: on grade k the
// coefficient h goes to -(X_g.h + k tau (beta-pairing - g - potential(X_g)) h).
GradedFunction rep_apply(const PreqData& d, const Scalar& g, const GradedFunction& phi);

// Covariant derivative along base frame generators acting on grade -1
// coefficients: D_i h = X_i.h + tau (potential(X_i) - beta_i) h.
struct LConnection {
    PreqData data;
    Mat pairing_table; // antisymmetric table of the base frame
};
LConnection lconn(const PreqData& d);
Scalar lconn_apply(const LConnection& D, size_t i, const Scalar& h);

struct CurvatureReport {
    Scalar action;   // (D_i D_j - D_j D_i - D_[i,j]) applied to the sample
    Scalar expected; // tau times the pairing table entry times the sample
    bool matches = false;
};
CurvatureReport lconn_curvature(const LConnection& D, size_t i, size_t j, const Scalar& h);

// -(D along X_g + dg + tau g) on a grade -1 element whose coefficient is
// covariantly constant along the kernel directions of the base frame,
// checked generically and on each declared locus slice.
GradedFunction lconn_rep(const LConnection& D, const Scalar& g, const GradedFunction& s);

// v times the exponential of (grade tau (fiber + phase)): coefficient and
// phase on the total chart, both fiber-independent.
struct GradedExpTerm {
    Scalar v;
    int grade = 0;
    Scalar phase;
};

struct ExpAdmissibleResult {
    bool certified = false;
    KVector X;    // hamiltonian part with the common exponential factor removed
    Scalar phi;   // scalar companion, same normalization
    std::vector<Scalar> coeffs;
    std::string refused;
    std::optional<RatPoint> witness;

    explicit ExpAdmissibleResult(const ChartPtr& chart)
        : X(KVector::zero(chart, 1)), phi(Scalar::zero(chart)) {}
};
// Admissibility system of the graded term over the structure frame with the
// exponential factor cancelled: covector side d v + grade tau v (dfiber +
// dphase), scalar side v.
ExpAdmissibleResult exp_admissible_solve(const DiracJacobiStructure& S, const std::string& fiber,
                                         const GradedExpTerm& t);

// Scalar bracket of two graded terms sharing one phase; the result carries
// the grade sum and the common phase.
GradedExpTerm graded_exp_bracket(const DiracJacobiStructure& S, const std::string& fiber,
                                 const GradedExpTerm& a, const GradedExpTerm& b);

} // namespace dj
