#pragma once

#include <stdexcept>
#include <string>

namespace slitsim {

/// Invalid physical argument: a precondition on a value was violated.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent setup: mismatched grids, under-resolved masks, bad scenario
/// files, detector windows that cannot hold the beam.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A runtime numerical guard tripped (aliasing at the grid edge, analysis
/// window too short, degenerate input).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slitsim
