#pragma once

#include <stdexcept>
#include <string>

namespace frusloop {

/// Shapes of matrices, vectors or spin states do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter is outside the domain an operation is defined on.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Loop placement ran out of its retry budget (the weight matrix is saturated).
class SaturationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed wcnf or JSON input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace detail
}  // namespace frusloop
