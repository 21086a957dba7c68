#pragma once

#include <stdexcept>
#include <string>

namespace renorm {

// Root-finder non-convergence, Newton divergence, eigen-solver failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on a domain object: degenerate interval, non-monotone
// zoom, sector violation, missing cycle when one is required.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed persisted document; the message names the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : std::runtime_error("schema error in field '" + field + "': " + what),
        field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace renorm
