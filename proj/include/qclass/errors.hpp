#pragma once

#include <stdexcept>
#include <string>

namespace qclass {

// Base class for all library errors. The CLI maps each subclass to a
// distinct process exit code.
class QClassError : public std::runtime_error {
 public:
  explicit QClassError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files / unknown fields / wrong JSON types.  Exit code 2.
class SchemaError : public QClassError {
 public:
  using QClassError::QClassError;
};

// Physically invalid data: non-Hermitian matrices, trace deficits,
// negative probabilities, bad simplex points.  Exit code 3.
class ValidationError : public QClassError {
 public:
  using QClassError::QClassError;
};

// Kernel moduli outside their admissible region.  Exit code 4.
class ModuliDomainError : public QClassError {
 public:
  using QClassError::QClassError;
};

// Unreadable/unwritable paths.  Exit code 5.
class IoError : public QClassError {
 public:
  using QClassError::QClassError;
};

}  // namespace qclass
