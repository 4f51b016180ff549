#pragma once

#include "nsdiag/check_report.hpp"

#include <map>
#include <string>
#include <vector>

namespace nsdiag {

// Canned check suites over deterministic synthetic families and short
// Taylor-Green solver runs. quick shrinks family sizes, never tolerances.
struct SuiteConfig {
  bool quick = false;
  std::uint64_t seed = 1;
  std::map<std::string, double> cap_overrides; // by suite name
};

std::vector<std::string> suite_names(); // lemma21 ... main-bound, all

std::vector<CheckReport> run_suite(const std::string& name, const SuiteConfig& cfg);

} // namespace nsdiag
