#include "povcal/errors.hpp"
#include "povcal/tolerances.hpp"

namespace povcal {

namespace {
Tolerances g_tolerances;
}

const Tolerances& tolerances() { return g_tolerances; }

void set_tolerances(const Tolerances& t) { g_tolerances = t; }

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::DegeneracyResolutionFailed: return "DegeneracyResolutionFailed";
    case Errc::BackendMismatch: return "BackendMismatch";
    case Errc::InvalidEffect: return "InvalidEffect";
    case Errc::InvalidState: return "InvalidState";
    case Errc::NotComparable: return "NotComparable";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::InvalidAtom: return "InvalidAtom";
    case Errc::PartialFunction: return "PartialFunction";
    case Errc::InvalidKernel: return "InvalidKernel";
    case Errc::InvalidProbability: return "InvalidProbability";
    case Errc::MaskViolation: return "MaskViolation";
    case Errc::UnknownGenerator: return "UnknownGenerator";
    case Errc::InvalidGenerator: return "InvalidGenerator";
    case Errc::MonotonicityViolation: return "MonotonicityViolation";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::NotDeterministicKernel: return "NotDeterministicKernel";
    case Errc::NotASmearing: return "NotASmearing";
    case Errc::EmptyFamily: return "EmptyFamily";
    case Errc::NotFaithful: return "NotFaithful";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace povcal
