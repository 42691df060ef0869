#pragma once

#include <stdexcept>
#include <string>

namespace hicu {

/// Base for every error raised by the library. The CLI maps the concrete
/// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array shapes, kernel extents or regions that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid or infeasible configuration (rank, stage schedule, mask budget).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input that is well-shaped but numerically unusable (e.g. a rank-deficient
/// basis handed to the Householder complement).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Failure of a plug-in denoiser: crash, timeout, protocol violation or
/// non-finite output.
class DenoiserError : public Error {
 public:
  using Error::Error;
};

/// File format and filesystem problems.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Truncated payload; a distinct IoError so callers can tell it apart.
class TruncationError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace hicu
