#pragma once

#include <stdexcept>
#include <string>

namespace grcgan {

/// Raised when tensor or matrix shapes do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a NaN or infinity shows up in a forward value, a loss, or a
/// gradient.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Misuse of the autodiff graph (non-scalar loss, backward after release).
class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid configuration, spec, or manifest content.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace grcgan
