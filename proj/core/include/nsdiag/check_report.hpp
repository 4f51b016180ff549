#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nsdiag {

// One inequality evaluation: ratio = lhs / rhs_no_constant, the empirical
// stand-in for the inequality's non-explicit constant.
struct CheckCase {
  std::string input_digest;
  double lhs = 0.0;
  double rhs_no_constant = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
};

struct CheckReport {
  std::string check;
  double cap = 50.0;
  std::vector<CheckCase> cases;
  // extra acceptance constraint beyond the ratio cap (e.g. R-independence band)
  bool aux_pass = true;
  std::string aux_note;

  void add_case(std::string digest, double lhs, double rhs);
  std::size_t counted() const; // non-degenerate cases
  double max_ratio() const;
  double median_ratio() const;
  bool pass() const; // all ratios finite, max <= cap, aux_pass

  // version/config_digest are embedded when non-empty
  std::string to_json(const std::string& toolkit_version = "",
                      const std::string& config_digest = "") const;
};

std::string reports_csv_summary(const std::vector<CheckReport>& reports);

std::uint64_t fnv1a64(std::string_view s);
std::string hex_digest(std::string_view s);

} // namespace nsdiag
