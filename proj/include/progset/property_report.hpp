#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace progset {

struct Violation {
  std::string kind;      // e.g. "WeilViolation"
  std::string location;  // tuple, pair or element that failed
  double magnitude = 0;
  double bound = 0;
};

/// Outcome of one verification suite. Only the first violation (in
/// enumeration order) is kept so reports are schedule independent.
struct PropertyReport {
  std::string suite;
  bool passed = true;
  std::uint64_t checks = 0;
  double max_residual = 0;  // largest deviation from an exact identity
  double max_ratio = 0;     // largest |value| / bound for inequality suites
  std::optional<Violation> violation;
  std::vector<std::pair<std::string, std::string>> info;

  void fail(Violation v) {
    passed = false;
    if (!violation) violation = std::move(v);
  }
  void note(std::string key, std::string value) { info.emplace_back(std::move(key), std::move(value)); }

  std::string info_value(const std::string& key) const {
    for (const auto& [k, v] : info)
      if (k == key) return v;
    return {};
  }
};

}  // namespace progset
