#pragma once

#include <stdexcept>
#include <string>

namespace detwork {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent spectrum input.
class InvalidSpectrum : public Error {
 public:
  using Error::Error;
};

/// A configurable size guard (array length, enumeration count) was exceeded.
class ResourceLimitExceeded : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to an operation (bad n, bad delta, bad distribution, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested operation does not apply to this input
/// (e.g. lcm construction with an occupied ground level).
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// A requested work shift violates the shell-capacity criterion.
class InfeasibleShift : public Error {
 public:
  using Error::Error;
};

/// A protocol table failed structural verification.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

/// Occupied support equals the full basis; the entropy fixed point is undefined.
class FullSupport : public Error {
 public:
  using Error::Error;
};

/// No sign change of the entropy difference was found on the scan grid.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed. Never expected.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace detwork
