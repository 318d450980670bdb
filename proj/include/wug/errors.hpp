#pragma once

#include <stdexcept>
#include <string>

namespace wug {

// Shape or rank mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN or Inf produced or consumed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an API precondition (e.g. non-scalar loss).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input text could not be turned into model symbols or records.
class IngestionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that breaks a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChecksumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Checkpoint does not belong to the requested seed / configuration.
class ProvenanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wug
