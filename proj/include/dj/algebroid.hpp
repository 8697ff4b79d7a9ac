#pragma once

#include "dj/dirac.hpp"

namespace dj {

// A 1-cochain on a structure frame: its values against the frame generators.
struct LCochain1 {
    std::vector<Scalar> values;

    LCochain1 operator+(const LCochain1& o) const;
    LCochain1 operator-() const;
    bool operator==(const LCochain1& o) const { return values == o.values; }
};

// Pullback of a 1-form along the anchor: values gamma(X_i).
LCochain1 rho_pullback(const DiracStructure& L, const KForm& gamma);

// Value of the cochain on an arbitrary section, resolved in the frame over
// the fraction field (NoSolutionOverFractionField when it does not resolve).
Scalar cochain_eval(const DiracStructure& L, const LCochain1& beta, const Section& s);

// Frame differential. On scalars (dL f)_i = X_i.f; on 1-cochains
// (dL b)(e_i,e_j) = X_i.b_j - X_j.b_i - <b,[e_i,e_j]> with the bracket
// resolved in the frame (BracketNotInSpan when the frame is not closed under
// it); on 2-cochain tables the value c(e_i,e_j,e_k) is stored at [k](i,j).
LCochain1 dL(const DiracStructure& L, const Scalar& f);
Mat dL(const DiracStructure& L, const LCochain1& beta);
std::vector<Mat> dL(const DiracStructure& L, const Mat& two_cochain);

// Antisymmetric pairing table Y(e_i,e_j) = <e_i,e_j>_-.
Mat upsilon(const DiracStructure& L);

// residual(e_i,e_j) = Omega(X_i,X_j) - Y(e_i,e_j) - (dL beta)(e_i,e_j);
// all-zero exactly when the curvature matching condition holds.
Mat preq_residual(const DiracStructure& L, const KForm& Omega, const LCochain1& beta);

// A cochain presented as a vector/1-form pair via b_i = 2<A + alpha, e_i>_+.
struct AnchorRep {
    KVector A;
    KForm alpha;
};

// Which coordinate slots of A (vector_slots) and alpha (form_slots) the
// affine solver may use; everything else is pinned to zero.
struct SplitHint {
    std::vector<std::string> vector_slots;
    std::vector<std::string> form_slots;
};

LCochain1 beta_from_pair(const DiracStructure& L, const AnchorRep& rep);
// Solves 2<A + alpha, e_i>_+ = b_i on the declared slots and verifies
// alpha(A) = 0 exactly; SolverNeedsExplicitPair on any failure.
AnchorRep beta_to_pair(const DiracStructure& L, const LCochain1& beta, const SplitHint& hint);

} // namespace dj
