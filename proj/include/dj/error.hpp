#pragma once

#include <stdexcept>
#include <string>

namespace dj {

// Engine-level failure codes. Preconditions that a caller can always avoid
// throw Error; semi-decidable outcomes (certification, integrability, ...)
// are returned as verdict structs by the operations that produce them.
enum class Errc {
    DivisionByZero,
    UnknownCoordinate,
    SubstitutionIntoExpUnitBase,
    ChartMismatch,
    DegreeOverflow,
    NotInverse,
    DenominatorNotCertified,
    KindMismatch,
    MinusPairingUndefinedForE1,
    NotIsotropic,
    RankNotCertified,
    BracketNotInSpan,
    OmegaNotClosed,
    SolverNeedsExplicitPair,
    RegraphNotInvertible,
    NotContact,
    XiANotSolvable,
    SuppliedDataInvalid,
    NonPolynomialAtPoint,
    FractionalPowerResidue,
    NotInDomain,
    PointOutsideDomain,
    NoSolutionOverFractionField,
    NotAdmissible,
    NotBasic,
    ParseError,
    UnknownReference,
    ValidationError,
    Internal,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::UnknownCoordinate: return "UnknownCoordinate";
        case Errc::SubstitutionIntoExpUnitBase: return "SubstitutionIntoExpUnitBase";
        case Errc::ChartMismatch: return "ChartMismatch";
        case Errc::DegreeOverflow: return "DegreeOverflow";
        case Errc::NotInverse: return "NotInverse";
        case Errc::DenominatorNotCertified: return "DenominatorNotCertified";
        case Errc::KindMismatch: return "KindMismatch";
        case Errc::MinusPairingUndefinedForE1: return "MinusPairingUndefinedForE1";
        case Errc::NotIsotropic: return "NotIsotropic";
        case Errc::RankNotCertified: return "RankNotCertified";
        case Errc::BracketNotInSpan: return "BracketNotInSpan";
        case Errc::OmegaNotClosed: return "OmegaNotClosed";
        case Errc::SolverNeedsExplicitPair: return "SolverNeedsExplicitPair";
        case Errc::RegraphNotInvertible: return "RegraphNotInvertible";
        case Errc::NotContact: return "NotContact";
        case Errc::XiANotSolvable: return "XiANotSolvable";
        case Errc::SuppliedDataInvalid: return "SuppliedDataInvalid";
        case Errc::NonPolynomialAtPoint: return "NonPolynomialAtPoint";
        case Errc::FractionalPowerResidue: return "FractionalPowerResidue";
        case Errc::NotInDomain: return "NotInDomain";
        case Errc::PointOutsideDomain: return "PointOutsideDomain";
        case Errc::NoSolutionOverFractionField: return "NoSolutionOverFractionField";
        case Errc::NotAdmissible: return "NotAdmissible";
        case Errc::NotBasic: return "NotBasic";
        case Errc::ParseError: return "ParseError";
        case Errc::UnknownReference: return "UnknownReference";
        case Errc::ValidationError: return "ValidationError";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

} // namespace dj
