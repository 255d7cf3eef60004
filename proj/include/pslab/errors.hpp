#pragma once

#include <stdexcept>
#include <string>

namespace pslab {

// Validation errors map to CLI exit code 2, numerical failures to 3.
struct ValidationError : std::runtime_error {
  std::string code;
  ValidationError(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

struct NumericalError : std::runtime_error {
  std::string code;
  NumericalError(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

#define PSLAB_VALIDATION_ERROR(NAME)                          \
  struct NAME : ValidationError {                             \
    explicit NAME(const std::string& msg = "")                \
        : ValidationError(#NAME, msg) {}                      \
  }

#define PSLAB_NUMERICAL_ERROR(NAME)                           \
  struct NAME : NumericalError {                              \
    explicit NAME(const std::string& msg = "")                \
        : NumericalError(#NAME, msg) {}                       \
  }

PSLAB_VALIDATION_ERROR(DivisionByZeroFunction);
PSLAB_VALIDATION_ERROR(TruncationTooSmall);
PSLAB_VALIDATION_ERROR(SingularLeadingTerm);
PSLAB_VALIDATION_ERROR(ConstantInput);
PSLAB_VALIDATION_ERROR(ZeroDifferential);
PSLAB_VALIDATION_ERROR(NotAPole);
PSLAB_VALIDATION_ERROR(DegenerateGauge);
PSLAB_VALIDATION_ERROR(SectionInvariant);
PSLAB_VALIDATION_ERROR(AlreadyTransverse);
PSLAB_VALIDATION_ERROR(NotRegularSingular);
PSLAB_VALIDATION_ERROR(ZeroLeadingTerm);
PSLAB_VALIDATION_ERROR(WrongClass);
PSLAB_VALIDATION_ERROR(RamifiedConventionRequired);
PSLAB_VALIDATION_ERROR(NotIrregular);
PSLAB_VALIDATION_ERROR(HypothesisViolated);
PSLAB_VALIDATION_ERROR(DegreeCapExceeded);
PSLAB_VALIDATION_ERROR(BadInput);

PSLAB_NUMERICAL_ERROR(ResonanceOverflow);
PSLAB_NUMERICAL_ERROR(PoleTooClose);
PSLAB_NUMERICAL_ERROR(ToleranceNotMet);
PSLAB_NUMERICAL_ERROR(MatchingFailed);
PSLAB_NUMERICAL_ERROR(ResidueUnreachable);

#undef PSLAB_VALIDATION_ERROR
#undef PSLAB_NUMERICAL_ERROR

}  // namespace pslab
