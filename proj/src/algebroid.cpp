#include "dj/algebroid.hpp"

#include "dj/error.hpp"

#include <sstream>

namespace dj {

namespace {

void require_cochain(const DiracStructure& L, const LCochain1& b, const char* where) {
    if (b.values.size() != L.frame.size())
        fail(Errc::ValidationError, std::string(where) + ": cochain length differs from frame rank");
    for (const Scalar& v : b.values) require_same_chart(v.chart(), L.frame.chart(), where);
}

// <b, s> with s resolved in the frame; reports through the given error code.
Scalar eval_resolved(const DiracStructure& L, const LCochain1& b, const Section& s, Errc ec) {
    auto c = L.frame.solve_in_span(s);
    if (!c) fail(ec, "section does not resolve in the frame: " + s.str());
    Scalar out = Scalar::zero(L.frame.chart());
    for (size_t j = 0; j < b.values.size(); ++j) out = out + (*c)[j] * b.values[j];
    return out;
}

} // namespace

LCochain1 LCochain1::operator+(const LCochain1& o) const {
    if (values.size() != o.values.size())
        fail(Errc::ValidationError, "cochain sum with mismatched lengths");
    LCochain1 out;
    for (size_t i = 0; i < values.size(); ++i) out.values.push_back(values[i] + o.values[i]);
    return out;
}

LCochain1 LCochain1::operator-() const {
    LCochain1 out;
    for (const Scalar& v : values) out.values.push_back(-v);
    return out;
}

LCochain1 rho_pullback(const DiracStructure& L, const KForm& gamma) {
    require_same_chart(L.frame.chart(), gamma.chart(), "rho_pullback");
    if (gamma.degree() != 1) fail(Errc::DegreeOverflow, "rho_pullback expects a 1-form");
    LCochain1 out;
    for (size_t j = 0; j < L.frame.size(); ++j)
        out.values.push_back(eval1(gamma, L.frame.at(j).X));
    return out;
}

Scalar cochain_eval(const DiracStructure& L, const LCochain1& beta, const Section& s) {
    require_cochain(L, beta, "cochain_eval");
    return eval_resolved(L, beta, s, Errc::NoSolutionOverFractionField);
}

LCochain1 dL(const DiracStructure& L, const Scalar& f) {
    require_same_chart(L.frame.chart(), f.chart(), "dL");
    LCochain1 out;
    for (size_t j = 0; j < L.frame.size(); ++j)
        out.values.push_back(apply_vec(L.frame.at(j).X, f));
    return out;
}

Mat dL(const DiracStructure& L, const LCochain1& beta) {
    require_cochain(L, beta, "dL");
    size_t k = L.frame.size();
    Mat out(L.frame.chart(), k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) {
            Section br = courant_bracket(L.frame.at(i), L.frame.at(j));
            Scalar v = apply_vec(L.frame.at(i).X, beta.values[j]) -
                       apply_vec(L.frame.at(j).X, beta.values[i]) -
                       eval_resolved(L, beta, br, Errc::BracketNotInSpan);
            out.at(i, j) = v;
            out.at(j, i) = -v;
        }
    return out;
}

std::vector<Mat> dL(const DiracStructure& L, const Mat& two_cochain) {
    size_t k = L.frame.size();
    if (two_cochain.rows() != k || two_cochain.cols() != k)
        fail(Errc::ValidationError, "dL: 2-cochain table does not match the frame rank");
    require_same_chart(two_cochain.chart(), L.frame.chart(), "dL");
    // c with one slot resolved in the frame: row r of the table contracted
    // with the resolution coefficients of s.
    auto slot_eval = [&](const Section& s, size_t r) {
        auto c = L.frame.solve_in_span(s);
        if (!c) fail(Errc::BracketNotInSpan, "bracket does not resolve in the frame: " + s.str());
        Scalar out = Scalar::zero(L.frame.chart());
        for (size_t l = 0; l < k; ++l) out = out + (*c)[l] * two_cochain.at(l, r);
        return out;
    };
    std::vector<Mat> out(k, Mat(L.frame.chart(), k, k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) {
            Section bij = courant_bracket(L.frame.at(i), L.frame.at(j));
            for (size_t r = j + 1; r < k; ++r) {
                Section bir = courant_bracket(L.frame.at(i), L.frame.at(r));
                Section bjr = courant_bracket(L.frame.at(j), L.frame.at(r));
                Scalar v = apply_vec(L.frame.at(i).X, two_cochain.at(j, r)) -
                           apply_vec(L.frame.at(j).X, two_cochain.at(i, r)) +
                           apply_vec(L.frame.at(r).X, two_cochain.at(i, j)) -
                           slot_eval(bij, r) + slot_eval(bir, j) - slot_eval(bjr, i);
                // Fill all six index orders of the alternating value.
                out[r].at(i, j) = v;
                out[r].at(j, i) = -v;
                out[j].at(r, i) = v;
                out[j].at(i, r) = -v;
                out[i].at(j, r) = v;
                out[i].at(r, j) = -v;
            }
        }
    return out;
}

Mat upsilon(const DiracStructure& L) {
    size_t k = L.frame.size();
    Mat out(L.frame.chart(), k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) {
            Scalar v = pairing(L.frame.at(i), L.frame.at(j), PairSign::Minus);
            out.at(i, j) = v;
            out.at(j, i) = -v;
        }
    return out;
}

Mat preq_residual(const DiracStructure& L, const KForm& Omega, const LCochain1& beta) {
    require_same_chart(L.frame.chart(), Omega.chart(), "preq_residual");
    if (Omega.degree() != 2) fail(Errc::DegreeOverflow, "preq_residual expects a 2-form");
    // A top-degree form is closed outright; d would overflow the degree cap.
    if (Omega.chart()->dim() > 2 && !d(Omega).is_zero())
        fail(Errc::OmegaNotClosed, "curvature form is not closed: " + Omega.str());
    Mat up = upsilon(L);
    Mat db = dL(L, beta);
    size_t k = L.frame.size();
    Mat out(L.frame.chart(), k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            out.at(i, j) =
                eval2(Omega, L.frame.at(i).X, L.frame.at(j).X) - up.at(i, j) - db.at(i, j);
        }
    return out;
}

LCochain1 beta_from_pair(const DiracStructure& L, const AnchorRep& rep) {
    const ChartPtr& c = L.frame.chart();
    require_same_chart(c, rep.A.chart(), "beta_from_pair");
    require_same_chart(c, rep.alpha.chart(), "beta_from_pair");
    LCochain1 out;
    for (size_t j = 0; j < L.frame.size(); ++j) {
        const Section& e = L.frame.at(j);
        out.values.push_back(eval1(rep.alpha, e.X) + eval1(e.xi, rep.A));
    }
    return out;
}

AnchorRep beta_to_pair(const DiracStructure& L, const LCochain1& beta, const SplitHint& hint) {
    require_cochain(L, beta, "beta_to_pair");
    const ChartPtr& c = L.frame.chart();
    // Unknowns: the declared A components followed by the declared alpha
    // components; everything else stays zero.
    std::vector<uint32_t> vslots, fslots;
    for (const std::string& name : hint.vector_slots) {
        if (!c->has_coord(name))
            fail(Errc::ValidationError, "beta_to_pair: unknown vector slot " + name);
        vslots.push_back((uint32_t)c->coord_index(name));
    }
    for (const std::string& name : hint.form_slots) {
        if (!c->has_coord(name))
            fail(Errc::ValidationError, "beta_to_pair: unknown form slot " + name);
        fslots.push_back((uint32_t)c->coord_index(name));
    }
    size_t k = L.frame.size(), nu = vslots.size() + fslots.size();
    Mat a(c, k, nu);
    std::vector<Scalar> rhs;
    for (size_t j = 0; j < k; ++j) {
        const Section& e = L.frame.at(j);
        for (size_t s = 0; s < vslots.size(); ++s) a.at(j, s) = e.xi.coeff({vslots[s]});
        for (size_t s = 0; s < fslots.size(); ++s)
            a.at(j, vslots.size() + s) = e.X.coeff({fslots[s]});
        rhs.push_back(beta.values[j]);
    }
    auto sol = solve(a, rhs);
    if (!sol)
        fail(Errc::SolverNeedsExplicitPair,
             "no pair on the declared slots matches the cochain");
    KVector A = KVector::zero(c, 1);
    for (size_t s = 0; s < vslots.size(); ++s)
        A = A + KVector::basis(c, c->coord(vslots[s]).name).scaled((*sol)[s]);
    KForm alpha = KForm::zero(c, 1);
    for (size_t s = 0; s < fslots.size(); ++s)
        alpha.add_term({fslots[s]}, (*sol)[vslots.size() + s]);
    Scalar iso = eval1(alpha, A);
    if (!iso.is_zero())
        fail(Errc::SolverNeedsExplicitPair,
             "solved pair is not isotropic: alpha(A) = " + iso.str());
    return AnchorRep{A, alpha};
}

} // namespace dj
