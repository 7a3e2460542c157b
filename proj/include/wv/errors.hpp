#pragma once

#include <stdexcept>

namespace wv {

// Base class for all toolkit failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical machinery failed on admissible input (CLI exit code 1).
struct NumericalError : Error { using Error::Error; };

// Bad input, configuration, or admissibility problem (CLI exit code 2).
struct InputError : Error { using Error::Error; };

struct NonFiniteCoefficient : NumericalError { using NumericalError::NumericalError; };
struct StepUnderflow : NumericalError { using NumericalError::NumericalError; };
struct ToleranceNotReached : NumericalError { using NumericalError::NumericalError; };
struct NonFiniteIntegrand : NumericalError { using NumericalError::NumericalError; };
struct TailNotConvergent : NumericalError { using NumericalError::NumericalError; };
struct NonMonotoneTail : NumericalError { using NumericalError::NumericalError; };
struct MethodDisagreement : NumericalError { using NumericalError::NumericalError; };
struct InequalityViolated : NumericalError { using NumericalError::NumericalError; };
struct MonotonicityViolated : NumericalError { using NumericalError::NumericalError; };

struct InvalidParameters : InputError { using InputError::InputError; };
struct InsufficientSamples : InputError { using InputError::InputError; };
struct ProfileNegative : InputError { using InputError::InputError; };
struct EnvelopeNotIntegrable : InputError { using InputError::InputError; };
struct ConditionsFailed : InputError { using InputError::InputError; };
struct MissingFiberDiameter : InputError { using InputError::InputError; };
struct ConfigError : InputError { using InputError::InputError; };

}  // namespace wv
