#pragma once

#include <stdexcept>
#include <string>

namespace emsq {

// Common base so callers can catch every domain failure in one handler.
// Each concrete kind maps to one failure mode of the pipeline; the CLI
// translates kinds into exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// covariance matrix deviates from the (V11,V11,V33,V33,+-V13) pattern
struct NotNormalForm : Error { using Error::Error; };

// state violates nu >= 1/2 or an occupation came out negative
struct Unphysical : Error { using Error::Error; };

struct SingularCovariance : Error { using Error::Error; };

// formula pole reached (e.g. conditional-entropy denominator at V33^2 = 1)
struct DegenerateState : Error { using Error::Error; };

// a radicand or pivot went bad beyond the tolerance that absorbs roundoff
struct NumericallyIllConditioned : Error { using Error::Error; };

// scattering denominator vanished at this (parameter, frequency) point
struct DenominatorSingular : Error { using Error::Error; };

struct IntegrationFailure : Error { using Error::Error; };

struct CholeskyFailure : Error { using Error::Error; };

// pumps-on/off batches are inconsistent with each other or too small
struct BatchMismatch : Error { using Error::Error; };

struct InsufficientPoints : Error { using Error::Error; };

// calibration design matrix is rank deficient (all abscissae equal)
struct DegenerateDesign : Error { using Error::Error; };

struct EmptyRange : Error { using Error::Error; };

}  // namespace emsq
