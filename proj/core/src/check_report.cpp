#include "nsdiag/check_report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nsdiag {

namespace {

// fixed-format doubles keep report bytes identical across reruns
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

} // namespace

void CheckReport::add_case(std::string digest, double lhs, double rhs) {
  CheckCase c;
  c.input_digest = std::move(digest);
  c.lhs = lhs;
  c.rhs_no_constant = rhs;
  if (rhs > 1e-14 && std::isfinite(rhs)) {
    c.ratio = lhs / rhs;
  } else {
    c.degenerate = true;
    c.ratio = 0.0;
  }
  cases.push_back(std::move(c));
}

std::size_t CheckReport::counted() const {
  std::size_t k = 0;
  for (const auto& c : cases)
    if (!c.degenerate) ++k;
  return k;
}

double CheckReport::max_ratio() const {
  double m = 0.0;
  for (const auto& c : cases)
    if (!c.degenerate) m = std::max(m, c.ratio);
  return m;
}

double CheckReport::median_ratio() const {
  std::vector<double> r;
  for (const auto& c : cases)
    if (!c.degenerate) r.push_back(c.ratio);
  if (r.empty()) return 0.0;
  std::sort(r.begin(), r.end());
  const std::size_t m = r.size();
  return m % 2 ? r[m / 2] : 0.5 * (r[m / 2 - 1] + r[m / 2]);
}

bool CheckReport::pass() const {
  for (const auto& c : cases)
    if (!c.degenerate && !std::isfinite(c.ratio)) return false;
  return max_ratio() <= cap && aux_pass;
}

std::string CheckReport::to_json(const std::string& toolkit_version,
                                 const std::string& config_digest) const {
  nlohmann::ordered_json j;
  if (!toolkit_version.empty()) j["toolkit_version"] = toolkit_version;
  if (!config_digest.empty()) j["config_digest"] = config_digest;
  j["check"] = check;
  j["cap"] = fmt(cap);
  j["cases"] = nlohmann::ordered_json::array();
  for (const auto& c : cases) {
    nlohmann::ordered_json jc;
    jc["input"] = c.input_digest;
    jc["lhs"] = fmt(c.lhs);
    jc["rhs_no_constant"] = fmt(c.rhs_no_constant);
    jc["ratio"] = fmt(c.ratio);
    jc["degenerate"] = c.degenerate;
    j["cases"].push_back(jc);
  }
  j["ratios"] = nlohmann::ordered_json::array();
  for (const auto& c : cases)
    if (!c.degenerate) j["ratios"].push_back(fmt(c.ratio));
  j["counted"] = counted();
  j["max_ratio"] = fmt(max_ratio());
  j["median_ratio"] = fmt(median_ratio());
  if (!aux_note.empty()) {
    j["aux_pass"] = aux_pass;
    j["aux_note"] = aux_note;
  }
  j["pass"] = pass();
  return j.dump(2);
}

std::string reports_csv_summary(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "check,cases,max_ratio,cap,pass\n";
  for (const auto& r : reports)
    os << r.check << ',' << r.counted() << ',' << fmt(r.max_ratio()) << ',' << fmt(r.cap) << ','
       << (r.pass() ? "true" : "false") << '\n';
  return os.str();
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_digest(std::string_view s) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

} // namespace nsdiag
