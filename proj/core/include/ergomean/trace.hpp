#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ergomean {

struct TraceEntry {
  std::int64_t n = 0;
  double delta_to_reference = 0.0;
  double diameter_bound = 0.0;
};

// Log-spaced checkpoints: powers of two up to n_max, plus n = 100 (the
// standard comparison point for decay-ratio assertions), plus n_max itself.
inline std::vector<std::int64_t> checkpoint_schedule(std::int64_t n_max) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n <= n_max && n > 0; n *= 2) out.push_back(n);
  if (n_max >= 100) out.push_back(100);
  out.push_back(n_max);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Record of one inductive-mean run: per-checkpoint distance to the
// reference point together with the running diameter estimate.
template <typename P>
struct ConvergenceTrace {
  std::vector<TraceEntry> entries;
  P reference;
  P final_point;
  std::int64_t n_max = 0;
  bool system_ergodic = true;
  std::vector<std::string> warnings;

  double final_delta() const {
    return entries.empty() ? 0.0 : entries.back().delta_to_reference;
  }

  std::optional<double> delta_at(std::int64_t n) const {
    for (const auto& e : entries) {
      if (e.n == n) return e.delta_to_reference;
    }
    return std::nullopt;
  }
};

}  // namespace ergomean
