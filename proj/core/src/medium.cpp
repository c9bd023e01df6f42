#include "zc/medium.hpp"

#include <algorithm>
#include <stdexcept>

namespace zc {

ConnectivityGraph ConnectivityGraph::complete(int n) {
  ConnectivityGraph g;
  g.node_count = n;
  g.adjacency.assign(n, std::vector<std::uint8_t>(n, 1));
  for (int i = 0; i < n; ++i) g.adjacency[i][i] = 0;
  return g;
}

ConnectivityGraph random_topology(int node_count, double gamma, Rng& rng) {
  if (node_count < 2 || node_count % 2 != 0)
    throw std::invalid_argument("random_topology: node_count must be even");
  if (gamma < 0 || gamma > 1)
    throw std::invalid_argument("random_topology: gamma outside [0, 1]");
  ConnectivityGraph g;
  g.node_count = node_count;
  g.adjacency.assign(node_count, std::vector<std::uint8_t>(node_count, 0));
  g.coords.resize(node_count);
  for (auto& c : g.coords) c = {200.0 * rng.unit(), 200.0 * rng.unit()};
  for (int i = 0; i < node_count; ++i)
    for (int j = i + 1; j < node_count; ++j)
      if (rng.chance(gamma)) g.adjacency[i][j] = g.adjacency[j][i] = 1;
  for (int i = 0; i + 1 < node_count; i += 2) {
    g.adjacency[i][i + 1] = g.adjacency[i + 1][i] = 1;
    g.flow_pairs.emplace_back(i, i + 1);
  }
  return g;
}

void FaultModel::validate() const {
  for (double p : {p1, p2, p3})
    if (p < 0 || p > 1)
      throw std::invalid_argument("fault model: probability outside [0, 1]");
}

Sensed sense(bool truth_busy, const FaultModel& fm, Rng& rng) {
  if (truth_busy) return rng.chance(fm.p3) ? Sensed::Idle : Sensed::Busy;
  if (rng.chance(fm.p1)) return Sensed::Busy;
  if (rng.chance(fm.p2)) return Sensed::IdleIdle;
  return Sensed::Idle;
}

SlotOutcomeRecord resolve_slot(const std::vector<Transmission>& txs,
                               const ConnectivityGraph& graph,
                               const TimingParameters& t, double wall_time_us) {
  SlotOutcomeRecord rec;
  rec.wall_time_us = wall_time_us;
  rec.per_receiver.assign(graph.node_count, 0);
  for (int r = 0; r < graph.node_count; ++r) {
    int heard = 0;
    for (const auto& tx : txs)
      if (graph.adjacent(tx.src, r)) ++heard;
    rec.per_receiver[r] = heard == 0 ? 0 : (heard == 1 ? 1 : 2);
  }
  bool any_fail = false, any_success = false;
  std::vector<std::pair<int, std::uint8_t>> results;
  for (const auto& tx : txs) {
    bool decoded;
    if (tx.dst < 0) {
      decoded = txs.size() == 1;  // broadcast: clean only if alone on air
    } else {
      int heard = 0;
      for (const auto& other : txs)
        if (graph.adjacent(other.src, tx.dst)) ++heard;
      decoded = heard == 1 && graph.adjacent(tx.src, tx.dst);
    }
    (decoded ? any_success : any_fail) = true;
    results.emplace_back(tx.src, decoded ? 1 : 0);
  }
  std::sort(results.begin(), results.end());
  for (auto& [src, ok] : results) {
    rec.transmitters.push_back(src);
    rec.delivered.push_back(ok);
  }
  if (txs.empty()) {
    rec.kind = SlotKind::Idle;
    rec.duration_us = t.t_v;
  } else if (any_fail) {
    rec.kind = SlotKind::Collision;
    rec.duration_us = t.t_b;
  } else {
    rec.kind = SlotKind::Success;
    rec.duration_us = t.t_g;
  }
  return rec;
}

}  // namespace zc
