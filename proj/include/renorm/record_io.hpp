#pragma once

// Run configuration and the persisted fixed-point document.

#include <iosfwd>
#include <string>

#include "renorm/records.hpp"

namespace renorm {

inline constexpr const char* kVersion = "0.1.0";

struct Tolerances {
  double newton = 1e-10;
  double cycle = 1e-12;
  double fd_step = 1e-6;
};

struct RunConfig {
  double alpha = 2.0;
  int period = 2;
  std::string sigma_name = "doubling";  // "doubling", "first" or a list such as "2,3,1"
  int degree = kDefaultDegree;
  Tolerances tol;
  std::string output_dir = ".";

  // Throws DomainError on a non-positive tolerance, degree < 16 or a bad sigma.
  void validate() const;
  UnimodalPermutation sigma() const;
};

// Output directory from RENORM_OUTPUT_DIR, "." when unset.
std::string default_output_dir();

// JSON document with fields alpha, sigma, degree, t_star, coeffs, residual,
// eigenvalues, delta, expanding_count and provenance {version, config,
// timestamp}. The timestamp is the only field that differs between runs.
std::string record_to_json(const FixedPointRecord& record, const RunConfig& config, bool with_timestamp = true);

// Throws SchemaError naming the first missing or ill-typed field.
FixedPointRecord record_from_json(const std::string& text);

void write_record(const std::string& path, const FixedPointRecord& record, const RunConfig& config);
FixedPointRecord read_record(const std::string& path);

}  // namespace renorm
