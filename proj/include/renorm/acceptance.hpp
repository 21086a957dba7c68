#pragma once

// The acceptance suite: thirteen numbered criteria, each reported as one
// PASS/FAIL line. Shared by `renorm verify` and the acceptance test binary.

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "renorm/record_io.hpp"

namespace renorm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic text: no timings, no addresses
  double seconds = 0.0;
};

struct CriterionInfo {
  int id;
  const char* name;
};

// Ids 1..13 with their short names (oracle-delta, operator-delta, ...).
const std::vector<CriterionInfo>& acceptance_criteria();

// Accepts ids ("5") or names ("conjugacy"); throws DomainError on unknown ones.
std::set<int> parse_criteria(const std::vector<std::string>& selectors);

// Runs the selected criteria (all when empty) in id order. The config sets
// degree and tolerances; every criterion fixes its own alpha. Progress lines
// go to `log` when it is non-null.
std::vector<CriterionResult> run_acceptance(const RunConfig& config, const std::set<int>& selected = {},
                                            std::ostream* log = nullptr);

// "PASS  5 conjugacy: detail" per criterion; byte-identical across runs.
std::string format_report(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace renorm
