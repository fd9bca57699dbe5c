#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "swrr/store.hpp"

namespace swrr {

/// Coverage of a plan as percentages of all functions, in tenths of a percent.
/// The four heuristic columns are apportioned by largest remainder so they
/// add up to `protected_tenths` exactly.
struct CoverageReport {
  std::size_t total_functions = 0;
  std::size_t protected_count = 0;
  std::size_t logging_count = 0;
  std::size_t pointer_count = 0;
  std::size_t propagation_count = 0;
  std::size_t indirect_count = 0;
  int protected_tenths = 0;
  int logging_tenths = 0;
  int pointer_tenths = 0;
  int propagation_tenths = 0;
  int indirect_tenths = 0;

  double protected_pct() const { return protected_tenths / 10.0; }
  double logging_pct() const { return logging_tenths / 10.0; }
  double pointer_pct() const { return pointer_tenths / 10.0; }
  double propagation_pct() const { return propagation_tenths / 10.0; }
  double indirect_pct() const { return indirect_tenths / 10.0; }
  friend bool operator==(const CoverageReport &, const CoverageReport &) = default;
};

inline CoverageReport coverage_from_counts(std::size_t total, std::size_t logging, std::size_t pointer,
                                           std::size_t propagation, std::size_t indirect) {
  CoverageReport r;
  r.total_functions = total;
  r.logging_count = logging;
  r.pointer_count = pointer;
  r.propagation_count = propagation;
  r.indirect_count = indirect;
  r.protected_count = logging + pointer + propagation + indirect;
  if (total == 0)
    return r;
  const std::uint64_t n = total;
  r.protected_tenths = static_cast<int>((2000 * r.protected_count + n) / (2 * n));
  const std::array<std::size_t, 4> counts{logging, pointer, propagation, indirect};
  std::array<int, 4> tenths{};
  std::array<std::uint64_t, 4> rem{};
  int sum = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    tenths[i] = static_cast<int>(1000 * counts[i] / n);
    rem[i] = 1000 * counts[i] % n;
    sum += tenths[i];
  }
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (int extra = r.protected_tenths - sum, k = 0; extra > 0; --extra, ++k)
    ++tenths[order[k]];
  r.logging_tenths = tenths[0];
  r.pointer_tenths = tenths[1];
  r.propagation_tenths = tenths[2];
  r.indirect_tenths = tenths[3];
  return r;
}

inline CoverageReport coverage(const SwrrMapFile &m) {
  std::size_t logging = 0, pointer = 0, propagation = 0, indirect = 0;
  for (const auto &row : m.rows) {
    if (row.protection == Protection::Indirect) {
      ++indirect;
      continue;
    }
    if (row.protection != Protection::Direct)
      continue;
    const auto h = parse_heuristic(row.heuristic);
    if (h == Heuristic::ErrorLogging)
      ++logging;
    else if (h == Heuristic::NullReturn)
      ++pointer;
    else
      ++propagation;
  }
  return coverage_from_counts(m.rows.size(), logging, pointer, propagation, indirect);
}

inline CoverageReport coverage(const ProgramModel &pm, const SwrrPlan &plan) {
  return coverage(map_from_plan(pm, plan));
}

namespace detail {
inline std::string tenths_text(int t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%d.%d%%", t / 10, t % 10);
  return buf;
}
} // namespace detail

inline std::string render_text(const CoverageReport &r) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-10s %10s %10s %10s %10s %10s\n", "Functions", "Protected", "Logging",
                "Pointer", "Prop.", "Indirect");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-10zu %10s %10s %10s %10s %10s\n", r.total_functions,
                detail::tenths_text(r.protected_tenths).c_str(), detail::tenths_text(r.logging_tenths).c_str(),
                detail::tenths_text(r.pointer_tenths).c_str(), detail::tenths_text(r.propagation_tenths).c_str(),
                detail::tenths_text(r.indirect_tenths).c_str());
  out += buf;
  return out;
}

inline nlohmann::json to_json(const CoverageReport &r) {
  nlohmann::json j;
  j["total_functions"] = r.total_functions;
  j["counts"] = {{"protected", r.protected_count},
                 {"logging", r.logging_count},
                 {"pointer", r.pointer_count},
                 {"propagation", r.propagation_count},
                 {"indirect", r.indirect_count}};
  j["protected_pct"] = r.protected_pct();
  j["logging_pct"] = r.logging_pct();
  j["pointer_pct"] = r.pointer_pct();
  j["propagation_pct"] = r.propagation_pct();
  j["indirect_pct"] = r.indirect_pct();
  return j;
}

} // namespace swrr
