#pragma once

#include <stdexcept>
#include <string>

namespace gplab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Cholesky factorization failed even after jitter escalation.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature grid too coarse for the requested frequency band.
class QuadratureResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spectral truncation leaves more eigenvalue mass than the caller tolerates.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gplab
