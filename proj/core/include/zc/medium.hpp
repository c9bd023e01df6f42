#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "zc/rng.hpp"
#include "zc/timing.hpp"

namespace zc {

struct ConnectivityGraph {
  int node_count = 0;
  std::vector<std::vector<std::uint8_t>> adjacency;  // symmetric, no self-loops
  std::vector<std::pair<int, int>> flow_pairs;       // always adjacent
  std::vector<std::array<double, 2>> coords;         // reporting only

  static ConnectivityGraph complete(int n);
  bool adjacent(int a, int b) const { return a != b && adjacency[a][b] != 0; }
};

// node_count/2 disjoint flow pairs (2i, 2i+1) forced adjacent; every other
// unordered pair adjacent independently with probability gamma. Coordinates
// are drawn uniformly in a 200 x 200 m area but do not influence adjacency.
// Throws std::invalid_argument for odd node_count or gamma outside [0, 1].
ConnectivityGraph random_topology(int node_count, double gamma, Rng& rng);

struct FaultModel {
  double p1 = 0;  // idle mini-slot sensed busy
  double p2 = 0;  // idle mini-slot double-counted
  double p3 = 0;  // busy slot sensed idle
  bool none() const { return p1 == 0 && p2 == 0 && p3 == 0; }
  void validate() const;  // throws if any probability is outside [0, 1]
};

// Sensed observation sequence for one virtual slot.
enum class Sensed { Busy, Idle, IdleIdle };

// Idle truth: busy w.p. p1, else a double-counted (idle, idle) w.p. p2, else
// idle. Busy truth: idle w.p. p3, else busy. Each call is one independent
// station-slot sensing event.
Sensed sense(bool truth_busy, const FaultModel& fm, Rng& rng);

enum class SlotKind { Idle, Success, Collision };

struct Transmission {
  int src = -1;
  int dst = -1;  // -1 = broadcast (beacon); decodes iff src is sole transmitter
};

struct SlotOutcomeRecord {
  double wall_time_us = 0;
  double duration_us = 0;
  SlotKind kind = SlotKind::Idle;
  std::vector<int> transmitters;        // sorted station ids
  std::vector<std::uint8_t> delivered;  // parallel to transmitters
  // per-node channel view: 0 idle, 1 decodable (one adjacent transmitter),
  // 2 collided (two or more adjacent transmitters)
  std::vector<std::uint8_t> per_receiver;
};

// Resolves one virtual slot: a transmission decodes at its destination iff no
// other transmitter is adjacent to that destination. The slot is charged t_b
// if any transmission failed anywhere, t_g if any succeeded, else t_v.
SlotOutcomeRecord resolve_slot(const std::vector<Transmission>& txs,
                               const ConnectivityGraph& graph,
                               const TimingParameters& t, double wall_time_us);

}  // namespace zc
