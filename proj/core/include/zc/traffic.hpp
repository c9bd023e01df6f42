#pragma once

#include <optional>

namespace zc {

enum class TrafficKind { Backlogged, PeriodicCbr, SparsePeriodic };

struct TrafficSource {
  TrafficKind kind = TrafficKind::Backlogged;
  int packet_bytes = 2346;
  double period_us = 0;        // periodic kinds only
  double start_offset_us = 0;  // phase of the first periodic arrival
};

struct Arrival {
  double time_us = 0;
  int bytes = 0;
};

// Earliest arrival at or after `now_us`. Backlogged sources always deliver
// immediately; periodic sources deliver at start_offset + k * period.
// Throws std::invalid_argument for a periodic source with period <= 0.
std::optional<Arrival> next_arrival(const TrafficSource& src, double now_us);

}  // namespace zc
