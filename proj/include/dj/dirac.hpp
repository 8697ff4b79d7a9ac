#pragma once

#include "dj/section.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dj {

// A Dirac structure presented by a validated frame of plain sections, plus
// the user-declared rank-jump sites of the characteristic distribution
// (partial rational coordinate bindings: a full point or a hyperplane slice).
struct DiracStructure {
    StructureFrame frame;
    std::vector<RatPoint> loci;
};

DiracStructure make_dirac(StructureFrame frame, std::vector<RatPoint> loci = {});

// Graph frames: {@i + w(@i, .)} for a 2-form, {lambda(., dxi) + dxi} for a
// bivector (covector slot second).
DiracStructure graph_two_form(const KForm& w, std::vector<RatPoint> loci = {});
DiracStructure graph_bivector(const KVector& lam, std::vector<RatPoint> loci = {});

struct IntegrabilityWitness {
    size_t i, j, k;
    Scalar value; // <[e_i,e_j], e_k>_plus
};

// Closure of the frame span under the bracket matching the frame kind:
// nullopt when every triple pairing <[e_i,e_j],e_k> (i<j, all k) vanishes.
std::optional<IntegrabilityWitness> integrability_witness(const StructureFrame& fr);

// Exact basis of the characteristic space L cap T_pM at a full rational
// point, as coefficient vectors indexed by the chart coordinates; entries
// live on the sliced (coordinate-free) residue chart.
std::vector<std::vector<Scalar>> char_dist_at_point(const DiracStructure& S, const RatPoint& p);

struct AdmissibleResult {
    bool certified = false;       // X is smooth on the whole domain
    KVector X;                    // hamiltonian representative over the fraction field
    std::vector<Scalar> coeffs;   // frame coefficients of X + df
    std::string refused;          // denominator that blocked the certificate
    std::optional<RatPoint> witness; // its in-domain zero when one was found

    explicit AdmissibleResult(const ChartPtr& chart) : X(KVector::zero(chart, 1)) {}
};

// Solves X + df in the frame span over the fraction field.
AdmissibleResult admissible_solve(const DiracStructure& S, const Scalar& f);

// {f,g} = X_g . f for certified-admissible f, g; checks the hamiltonian
// postcondition -[X_f,X_g] + d{f,g} lies in the frame span.
Scalar adm_bracket(const DiracStructure& S, const Scalar& f, const Scalar& g);

struct BasicResult {
    bool basic = true;
    std::optional<RatPoint> witness; // point where df fails to kill L cap TM
    std::string reason;
};

// df must annihilate the fraction-field kernel of the form block and, at each
// declared locus, the characteristic space of the sliced coefficients.
BasicResult is_basic(const DiracStructure& S, const Scalar& f);

// {{f,g},h} + {{g,h},f} + {{h,f},g}.
Scalar jacobi_residual(const DiracStructure& S, const Scalar& f, const Scalar& g, const Scalar& h);

} // namespace dj
