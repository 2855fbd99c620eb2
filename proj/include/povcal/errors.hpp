#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace povcal {

enum class Errc {
  NonFinite,
  NonHermitian,
  DimMismatch,
  NotCommuting,
  DegeneracyResolutionFailed,
  BackendMismatch,
  InvalidEffect,
  InvalidState,
  NotComparable,
  NotNormalized,
  DuplicateLabel,
  InvalidAtom,
  PartialFunction,
  InvalidKernel,
  InvalidProbability,
  MaskViolation,
  UnknownGenerator,
  InvalidGenerator,
  MonotonicityViolation,
  NumericalFailure,
  NotDeterministicKernel,
  NotASmearing,
  EmptyFamily,
  NotFaithful,
  ParseError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace povcal
