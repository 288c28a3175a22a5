#pragma once

#include <stdexcept>
#include <string>

namespace hpol {

/// Base class for every error raised by the library. The `kind()` tag is what
/// the command-line runner maps onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define HPOL_DEFINE_ERROR(Name, tag)                          \
  class Name : public Error {                                 \
   public:                                                    \
    using Error::Error;                                       \
    const char* kind() const noexcept override { return tag; } \
  };

HPOL_DEFINE_ERROR(DomainError, "domain")
HPOL_DEFINE_ERROR(ConfigError, "config")
HPOL_DEFINE_ERROR(BudgetError, "budget")
HPOL_DEFINE_ERROR(EstimationError, "estimation")
HPOL_DEFINE_ERROR(InvalidInput, "invalid-input")
HPOL_DEFINE_ERROR(InvalidLift, "invalid-lift")
HPOL_DEFINE_ERROR(NotApplicable, "not-applicable")
HPOL_DEFINE_ERROR(PreconditionError, "precondition")
HPOL_DEFINE_ERROR(WindowError, "window")
HPOL_DEFINE_ERROR(NumericError, "numeric")
HPOL_DEFINE_ERROR(ConstructionError, "construction")
HPOL_DEFINE_ERROR(UnclassifiedError, "unclassified")
HPOL_DEFINE_ERROR(UnknownSystem, "unknown-system")

#undef HPOL_DEFINE_ERROR

}  // namespace hpol
