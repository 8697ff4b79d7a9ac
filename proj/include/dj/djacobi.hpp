#pragma once

#include "dj/dirac.hpp"

namespace dj {

// A Dirac-Jacobi structure: validated extended frame of rank n+1, with
// user-declared degenerate loci as in DiracStructure.
struct DiracJacobiStructure {
    StructureFrame frame;
    std::vector<RatPoint> loci;
};

DiracJacobiStructure make_dj(StructureFrame frame, std::vector<RatPoint> loci = {});

struct JacobiPair {
    KVector lam; // bivector
    KVector E;   // degree-1 companion field
};
struct FormPair {
    KForm omega; // 2-form
    KForm sigma; // 1-form
};

// Graph of the bundle map (xi,g) -> (lam(.,xi) - gE, xi(E)).
DiracJacobiStructure dj_graph_jacobi(const KVector& lam, const KVector& E,
                                     std::vector<RatPoint> loci = {});
// Graph of the bundle map (X,f) -> (i_X omega + f sigma, -sigma(X)).
DiracJacobiStructure dj_graph_form_pair(const KForm& omega, const KForm& sigma,
                                        std::vector<RatPoint> loci = {});
// Extension of a plain structure by the unit scalar direction.
DiracJacobiStructure dj_from_dirac(const DiracStructure& L);

// Re-presents the structure as a graph over the covector (resp. vector)
// factor, extracting the defining pair; requires the corresponding
// coefficient block to be invertible with a unit-certified determinant.
JacobiPair regraph_jacobi(const DiracJacobiStructure& S);
FormPair regraph_form_pair(const DiracJacobiStructure& S);

// Unique E with sigma(E) = 1 and i_E d sigma = 0 on an odd-dimensional chart
// whose top coefficient sigma ^ (d sigma)^m is a certified unit.
KVector reeb_solve(const KForm& sigma);

struct DjAdmissibleResult {
    bool certified = false;
    KVector X;
    Scalar phi;
    std::vector<Scalar> coeffs;
    std::string refused;
    std::optional<RatPoint> witness;

    explicit DjAdmissibleResult(const ChartPtr& chart)
        : X(KVector::zero(chart, 1)), phi(Scalar::zero(chart)) {}
};

// Solves (X, phi) + (df, f) in the frame span over the fraction field.
DjAdmissibleResult dj_admissible_solve(const DiracJacobiStructure& S, const Scalar& f);

// {f,g} = X_g.f + f phi_g for certified-admissible f,g; checks that the
// bracket of the two admissible sections is exactly
// ([X_f,X_g], X_f.phi_g - X_g.phi_f) + (-d{f,g}, -{f,g}).
Scalar dj_bracket(const DiracJacobiStructure& S, const Scalar& f, const Scalar& g);

// psi is basic when X.psi + psi f = 0 for every (X,f) in the kernel part of
// the frame (zero covector and zero second scalar slot), generically and on
// each declared locus.
BasicResult dj_is_basic(const DiracJacobiStructure& S, const Scalar& psi);

// {psi,h} = X_h.psi + psi phi_h for basic psi and admissible h.
Scalar dj_basic_bracket(const DiracJacobiStructure& S, const Scalar& psi, const Scalar& h);

struct Diracization {
    DiracStructure structure; // on the weighted line extension chart
    std::string fiber_coord;
    std::string fiber_unit;
};

// Plain structure {(X_i + f_i @t) + e^t (xi_i + g_i dt)} on chart x line.
Diracization diracization(const DiracJacobiStructure& S);

} // namespace dj
