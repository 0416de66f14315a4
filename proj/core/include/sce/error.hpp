#pragma once

#include <stdexcept>
#include <string>

namespace sce {

/// Bad input: out-of-domain parameters, malformed sizes, invalid geometry.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to produce a result within its tolerances.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace sce
