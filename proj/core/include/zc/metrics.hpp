#pragma once

#include <map>
#include <optional>
#include <vector>

#include "zc/medium.hpp"

namespace zc {

struct StationMetrics {
  int station = -1;
  long long successes = 0;
  long long collisions = 0;
  double mean_iad_us = 0;  // 0 when fewer than two successes
  double payload_bits = 0;
};

struct MetricsReport {
  double goodput_bps = 0;
  double mean_iad_us = 0;  // per-station means, averaged over stations
  std::map<int, double> delay_percentiles_us;  // keys 50, 95, 99
  std::optional<double> convergence_us;
  long long collisions_total = 0;
  long long collisions_after_convergence = 0;
  long long slots_idle = 0;
  long long slots_success = 0;
  long long slots_collision = 0;
  double duration_us = 0;
  double window_start_us = 0;  // steady-state measurement window start
  std::vector<StationMetrics> per_station;
};

// Nearest-rank percentile over a copy of the values (exact order statistic,
// no interpolation). Throws std::invalid_argument on an empty input.
double percentile_nearest_rank(std::vector<double> values, double pct);

// Payload bits over a time window, in bits per second. Throws
// std::invalid_argument on an empty window.
double goodput_bps(double payload_bits, double window_us);

struct DelaySummary {
  double mean_us = 0;
  double p50_us = 0;
  double p99_us = 0;
};

// Gaps between successive successful transmission starts of one station.
// Throws std::invalid_argument with fewer than two successes.
DelaySummary interaccess_delay(const std::vector<double>& success_starts_us);

// Wall time at which all `stations` held distinct slots, recovered from a
// slot trace of a single-domain run: for each station, its first delivered
// transmission after its last failed one; the latest such completion is the
// candidate, confirmed by `horizon` further rounds without a collision.
// nullopt if any station never settles or the trace ends inside the
// confirmation horizon.
std::optional<double> detect_convergence(
    const std::vector<SlotOutcomeRecord>& trace, int stations, int capacity,
    int horizon_rounds = 3);

}  // namespace zc
