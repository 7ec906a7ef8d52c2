#pragma once

#include <stdexcept>
#include <string>

namespace fch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid size, bad length...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Residual converged but the spectrum decays algebraically (peakon/cuspon-like limit).
class NonSmoothLimit : public Error {
 public:
  using Error::Error;
};

/// A coefficient became NaN or Inf during time stepping.
class NonFinite : public Error {
 public:
  using Error::Error;
};

class NoBreaking : public Error {
 public:
  using Error::Error;
};

/// Fewer usable modes than required by a spectral fit.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// The whole fit window lies below the noise floor.
class NoiseFloor : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fch
