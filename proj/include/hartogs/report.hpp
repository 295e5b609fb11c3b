#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hartogs {

/// Machine-readable outcome of one verification suite.
///
/// `pass` is the conjunction of details["conditions"], which always holds
/// "statistic_within_bound" (statistic <= bound) plus any suite-specific checks.
struct CheckReport {
  std::string suite;
  nlohmann::json params = nlohmann::json::object();
  double statistic = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();
};

inline void settle(CheckReport& r, const std::vector<std::pair<std::string, bool>>& extra = {}) {
  nlohmann::json conditions = nlohmann::json::object();
  conditions["statistic_within_bound"] = r.statistic <= r.bound;
  for (const auto& [name, ok] : extra) conditions[name] = ok;
  bool all = true;
  for (const auto& [name, ok] : conditions.items()) all = all && ok.get<bool>();
  r.details["conditions"] = std::move(conditions);
  r.pass = all;
}

/// Replaces the bound and re-evaluates the primary condition.
inline void override_bound(CheckReport& r, double bound) {
  r.bound = bound;
  auto& conditions = r.details["conditions"];
  conditions["statistic_within_bound"] = r.statistic <= r.bound;
  bool all = true;
  for (const auto& [name, ok] : conditions.items()) all = all && ok.get<bool>();
  r.pass = all;
}

inline void to_json(nlohmann::json& j, const CheckReport& r) {
  j = nlohmann::json{{"suite", r.suite},         {"params", r.params}, {"statistic", r.statistic},
                     {"bound", r.bound},         {"pass", r.pass},     {"n_samples", r.n_samples},
                     {"seed", r.seed},           {"details", r.details}};
}

}  // namespace hartogs
