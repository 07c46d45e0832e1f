#pragma once

#include <stdexcept>
#include <string>

namespace tcsim {

// Malformed value objects (non-monotone grids, mismatched lengths).
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Inputs outside an operation's mathematical domain (log of a value < 1,
// evaluation outside [0,1], x outside [0,1] for genetic integrands).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad run configuration (unknown ids, invalid coupling pairing, dt out of range).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace tcsim
