#pragma once

#include <stdexcept>
#include <string>

namespace pfc {

// Invalid user-supplied configuration; detected before any computation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a usable result (singular matrix,
// diverged iteration, violated structural check).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The computation ran, but the proof did not go through.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfc
