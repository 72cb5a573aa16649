#pragma once

#include <stdexcept>
#include <string>

namespace regkit {

// Invalid or incomplete configuration (experiment files, missing envelope parts).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed (non-convergence, singular system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The regularized problem is singular at this tuning value; callers are
// expected to move along the grid.
class IllPosedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace regkit
