#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pfw {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, parameters or configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The fixed-point loop of an implicit step did not reach its tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(double residual, int iterations)
      : Error("fixed-point iteration did not converge after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(residual) + ")"),
        residual_(residual),
        iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// A non-finite value appeared in the evolving fields.
class Divergence : public Error {
 public:
  using Error::Error;
};

/// Snapshot or data file could not be decoded.
class FormatError : public Error {
 public:
  enum class Kind { bad_magic, unsupported_version, truncated, io };
  FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace pfw
