#pragma once

#include <stdexcept>
#include <string>

namespace phasekit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of refinements before meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A sampled state was evaluated outside its node range.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Closed-form kernel requested above the configured order cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A truncated spectrum carries more tail mass than the caller allows.
class TailTooHeavy : public Error {
 public:
  using Error::Error;
};

class GridTooSmall : public Error {
 public:
  using Error::Error;
};

class ZeroField : public Error {
 public:
  using Error::Error;
};

/// Scale-integral reconstruction changed too much when its window was doubled.
class WindowSensitive : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace phasekit
