#pragma once

#include <stdexcept>
#include <string>

namespace fracrenew {

// Invalid argument / out-of-domain input.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A truncated expansion hit its term budget before the stopping rule fired.
struct NonConvergent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical Laplace inversion produced non-finite nodes or an error estimate
// above the requested tolerance.
struct InversionUnstable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RootFindFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvolutionAccuracy : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitUnstable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fracrenew
