#pragma once

#include <stdexcept>
#include <string>

namespace qaept {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions (CLI exit code 2).
struct ValidationError : Error {
  using Error::Error;
};

/// Numerical failure: non-convergence, tolerance violation, solver breakdown
/// (CLI exit code 3).
struct NumericError : Error {
  using Error::Error;
};

/// The requested construction needs the discrete-spectrum regime
/// (CLI exit code 4).
struct SpectrumError : Error {
  using Error::Error;
};

/// Grid-related failure: overflow, mismatch, too narrow (CLI exit code 5).
struct GridError : Error {
  using Error::Error;
};

// -- specfun --
struct NonConvergence : NumericError { using NumericError::NumericError; };
struct PoleParameter : ValidationError { using ValidationError::ValidationError; };
struct Overflow : NumericError { using NumericError::NumericError; };

// -- lsode --
struct StepFailure : NumericError { using NumericError::NumericError; };
struct WronskianViolation : NumericError { using NumericError::NumericError; };
struct OutOfSpan : ValidationError { using ValidationError::ValidationError; };
struct DomainViolation : ValidationError { using ValidationError::ValidationError; };

// -- arnold --
struct FocalPoint : NumericError { using NumericError::NumericError; };
struct OutOfImage : ValidationError { using ValidationError::ValidationError; };
struct NonPositive : NumericError { using NumericError::NumericError; };

// -- quantum / invariants --
struct GridOverflow : GridError { using GridError::GridError; };
struct GridTooNarrow : GridError { using GridError::GridError; };
struct GridMismatch : GridError { using GridError::GridError; };
struct ContinuousSpectrum : SpectrumError { using SpectrumError::SpectrumError; };
struct Overdamped : SpectrumError { using SpectrumError::SpectrumError; };

// -- propagator --
struct SolveFailure : NumericError { using NumericError::NumericError; };
struct BoundaryLeak : NumericError { using NumericError::NumericError; };

}  // namespace qaept
