#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters or arguments outside the model's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve or asymptotic tail estimate did not settle.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Operation requested in the wrong thermodynamic phase.
class PhaseError : public Error {
 public:
  using Error::Error;
};

/// A squared excitation energy came out negative.
class NonrealError : public Error {
 public:
  using Error::Error;
};

/// Exact-diagonalization basis larger than the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Observables moved when the boson Fock cutoff was raised.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid sweep configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Output file could not be written.
class IOError : public Error {
 public:
  using Error::Error;
};

}  // namespace dicke
