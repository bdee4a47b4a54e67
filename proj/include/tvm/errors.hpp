#pragma once

#include <stdexcept>
#include <string>

namespace tvm {

/// Argument outside the mathematical domain of an operation (densities
/// outside [0,1], coordinates outside {1..r}, degenerate parameters).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Problem too large for the requested representation or exact method.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Internal bookkeeping found to disagree with a from-scratch recomputation.
class ConsistencyError : public std::logic_error {
 public:
  ConsistencyError(const std::string& what, long long vertex = -1)
      : std::logic_error(what), vertex_(vertex) {}
  /// First offending vertex, or -1 when not vertex specific.
  long long vertex() const noexcept { return vertex_; }

 private:
  long long vertex_;
};

/// Caller violated a precondition that is not a pure domain issue
/// (mismatched initial states, invalid experiment specification).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Experiment specification rejected; the message lists every bad field.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File system failure; carries the offending path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace tvm
