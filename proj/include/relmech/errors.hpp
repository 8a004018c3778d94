#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace relmech {

/// Base class of every error raised by the library.
///
/// Integrators fill `last_good_tau` when a failure interrupts a run so that
/// callers can report how far the integration got.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  double last_good_tau = std::numeric_limits<double>::quiet_NaN();
};

#define RELMECH_DEFINE_ERROR(Name)      \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

// Point outside the domain of a field (e.g. r <= 2M for Schwarzschild).
RELMECH_DEFINE_ERROR(DomainError);
RELMECH_DEFINE_ERROR(DimensionMismatch);
RELMECH_DEFINE_ERROR(SingularMetric);
RELMECH_DEFINE_ERROR(SingularJacobian);
RELMECH_DEFINE_ERROR(ZeroTimeVelocity);
RELMECH_DEFINE_ERROR(ConstraintUnreachable);
RELMECH_DEFINE_ERROR(ProjectiveInfinity);
RELMECH_DEFINE_ERROR(ZeroVector);
RELMECH_DEFINE_ERROR(NonMonotoneTime);
RELMECH_DEFINE_ERROR(NonPositiveG);
RELMECH_DEFINE_ERROR(DegenerateLagrangian);
RELMECH_DEFINE_ERROR(StepRejected);
RELMECH_DEFINE_ERROR(InvalidArgument);
RELMECH_DEFINE_ERROR(Unsupported);

#undef RELMECH_DEFINE_ERROR

}  // namespace relmech
