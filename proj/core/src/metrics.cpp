#include "zc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zc {

double percentile_nearest_rank(std::vector<double> values, double pct) {
  if (values.empty())
    throw std::invalid_argument("percentile: empty sample");
  if (pct <= 0 || pct > 100)
    throw std::invalid_argument("percentile: pct outside (0, 100]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
  if (rank == 0) rank = 1;
  return values[rank - 1];
}

double goodput_bps(double payload_bits, double window_us) {
  if (window_us <= 0)
    throw std::invalid_argument("goodput: empty window");
  return payload_bits / window_us * 1e6;
}

DelaySummary interaccess_delay(const std::vector<double>& success_starts_us) {
  if (success_starts_us.size() < 2)
    throw std::invalid_argument(
        "interaccess_delay: need at least two successes");
  std::vector<double> gaps;
  gaps.reserve(success_starts_us.size() - 1);
  for (std::size_t i = 1; i < success_starts_us.size(); ++i)
    gaps.push_back(success_starts_us[i] - success_starts_us[i - 1]);
  DelaySummary out;
  double sum = 0;
  for (double g : gaps) sum += g;
  out.mean_us = sum / gaps.size();
  out.p50_us = percentile_nearest_rank(gaps, 50);
  out.p99_us = percentile_nearest_rank(gaps, 99);
  return out;
}

std::optional<double> detect_convergence(
    const std::vector<SlotOutcomeRecord>& trace, int stations, int capacity,
    int horizon_rounds) {
  if (stations < 1 || capacity < 1) return std::nullopt;
  // settle[i]: index of station i's first delivered transmission after its
  // last failed one.
  std::vector<long long> last_fail(stations, -1);
  std::vector<long long> settle(stations, -1);
  for (std::size_t r = 0; r < trace.size(); ++r) {
    const auto& rec = trace[r];
    for (std::size_t j = 0; j < rec.transmitters.size(); ++j) {
      const int id = rec.transmitters[j];
      if (id < 0 || id >= stations) continue;
      if (rec.delivered[j]) {
        if (settle[id] < 0) settle[id] = static_cast<long long>(r);
      } else {
        last_fail[id] = static_cast<long long>(r);
        settle[id] = -1;
      }
    }
  }
  long long candidate = -1;
  for (int i = 0; i < stations; ++i) {
    if (settle[i] < 0) return std::nullopt;
    candidate = std::max(candidate, settle[i]);
  }
  const long long confirm_until =
      candidate + static_cast<long long>(horizon_rounds) * capacity;
  if (confirm_until >= static_cast<long long>(trace.size()))
    return std::nullopt;
  for (long long r = candidate + 1; r <= confirm_until; ++r)
    if (trace[r].kind == SlotKind::Collision) return std::nullopt;
  const auto& rec = trace[candidate];
  return rec.wall_time_us + rec.duration_us;
}

}  // namespace zc
