#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zc/medium.hpp"
#include "zc/protocol.hpp"
#include "zc/timing.hpp"
#include "zc/traffic.hpp"

namespace zc {

enum class Protocol { Zc, Csma, Tdma };

// Which stations carry traffic and to whom.
//  All:   every station sources traffic to the next station (ring).
//  Pairs: stations (2i, 2i+1); the even one sources traffic to its partner.
enum class FlowMode { All, Pairs };

struct TopologySpec {
  bool single_domain = true;
  double gamma = 1.0;  // random-graph edge probability when not single-domain
};

struct ArrivalWindow {
  int station = 0;
  double join_s = 0;
  double leave_s = 0;
};

struct ExperimentConfig {
  Protocol protocol = Protocol::Zc;
  int N = 64;
  int M = 8;
  TrafficSource traffic;
  int frame_overhead_bytes = 0;  // headers added on air atop packet_bytes
  bool stagger_offsets = false;  // per-station uniform phase in [0, period)
  std::optional<TimingParameters> explicit_timing;
  FaultModel fault;
  TopologySpec topology;
  FlowMode flow_mode = FlowMode::All;
  double duration_s = 20.0;
  std::vector<std::uint64_t> seeds{1};
  ReselectionMode reselection = ReselectionMode::Immediate;
  int recycle_rounds = 10;
  bool access_point = false;  // station 0 becomes an AP anchored at slot 0
  // Stations listed here are active only inside their windows; all others
  // are active for the whole run.
  std::vector<ArrivalWindow> arrival_schedule;

  // Slot durations: explicit_timing if given, otherwise composed from the
  // 802.11b PHY constants for packet_bytes + frame_overhead_bytes on air.
  TimingParameters timing() const;

  // Throws std::invalid_argument with a field-level message.
  void validate() const;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

std::string to_string(Protocol p);

}  // namespace zc
