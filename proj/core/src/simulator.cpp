#include "zc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "zc/baselines.hpp"
#include "zc/protocol.hpp"
#include "zc/rng.hpp"
#include "zc/traffic.hpp"

namespace zc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DeliveryLog {
  std::vector<double> times_us;
  std::vector<double> bits;
  std::vector<double> delays_us;  // enqueue -> completion
};

struct StationLog {
  long long successes = 0;
  long long collisions = 0;
  double payload_bits = 0;  // within the measurement window (filled late)
  std::vector<double> success_starts_us;
};

// Traffic plumbing shared by all engines.
struct Feed {
  bool has_source = false;
  TrafficSource src;
  int dst = -1;
  std::deque<double> queue;  // enqueue times of waiting packets
  long long arrivals_emitted = 0;

  double next_periodic() const {
    return src.start_offset_us + arrivals_emitted * src.period_us;
  }
  // Enqueue everything due by `now`; backlogged sources always hold one
  // packet whose enqueue time is when the head position became free.
  void pump(double now) {
    if (!has_source) return;
    if (src.kind == TrafficKind::Backlogged) {
      if (queue.empty()) queue.push_back(now);
      return;
    }
    while (next_periodic() <= now) {
      queue.push_back(next_periodic());
      ++arrivals_emitted;
    }
  }
  double next_arrival_after(double now) const {
    if (!has_source) return kInf;
    if (src.kind == TrafficKind::Backlogged)
      return queue.empty() ? now : kInf;
    return next_periodic();
  }
};

struct Windows {
  std::vector<ArrivalWindow> spans;  // empty = always active
  std::size_t idx = 0;
  bool active = false;

  bool always_on() const { return spans.empty(); }
};

void finalize_metrics(MetricsReport& m, const ExperimentConfig& cfg,
                      const DeliveryLog& dlog, std::vector<StationLog>& slog,
                      double wall_us) {
  m.duration_us = wall_us;
  m.window_start_us = m.convergence_us.value_or(0.0);
  double bits = 0;
  for (std::size_t i = 0; i < dlog.times_us.size(); ++i)
    if (dlog.times_us[i] >= m.window_start_us) bits += dlog.bits[i];
  const double window = wall_us - m.window_start_us;
  m.goodput_bps = window > 0 ? goodput_bps(bits, window) : 0.0;

  double iad_sum = 0;
  int iad_n = 0;
  for (int i = 0; i < static_cast<int>(slog.size()); ++i) {
    StationMetrics sm;
    sm.station = i;
    sm.successes = slog[i].successes;
    sm.collisions = slog[i].collisions;
    std::vector<double> starts;
    for (double s : slog[i].success_starts_us)
      if (s >= m.window_start_us) starts.push_back(s);
    if (starts.size() >= 2) {
      sm.mean_iad_us = interaccess_delay(starts).mean_us;
      iad_sum += sm.mean_iad_us;
      ++iad_n;
    }
    sm.payload_bits =
        static_cast<double>(starts.size()) * 8.0 * cfg.traffic.packet_bytes;
    m.per_station.push_back(sm);
  }
  m.mean_iad_us = iad_n > 0 ? iad_sum / iad_n : 0.0;

  std::vector<double> delays;
  for (std::size_t i = 0; i < dlog.delays_us.size(); ++i)
    if (dlog.times_us[i] >= m.window_start_us)
      delays.push_back(dlog.delays_us[i]);
  if (!delays.empty())
    for (double p : {50.0, 95.0, 99.0})
      m.delay_percentiles_us[static_cast<int>(p)] =
          percentile_nearest_rank(delays, p);
}

std::vector<Windows> build_windows(const ExperimentConfig& cfg) {
  std::vector<Windows> w(cfg.M);
  for (const auto& span : cfg.arrival_schedule)
    w[span.station].spans.push_back(span);
  for (auto& wi : w)
    std::sort(wi.spans.begin(), wi.spans.end(),
              [](const auto& a, const auto& b) { return a.join_s < b.join_s; });
  return w;
}

std::vector<Feed> build_feeds(const ExperimentConfig& cfg, Rng& setup_rng) {
  std::vector<Feed> feeds(cfg.M);
  for (int i = 0; i < cfg.M; ++i) {
    Feed& f = feeds[i];
    const bool is_ap = cfg.access_point && i == 0;
    const bool sources = !is_ap && (cfg.flow_mode == FlowMode::All ||
                                    (cfg.flow_mode == FlowMode::Pairs &&
                                     i % 2 == 0));
    f.has_source = sources;
    f.src = cfg.traffic;
    if (cfg.flow_mode == FlowMode::Pairs)
      f.dst = i % 2 == 0 ? i + 1 : i - 1;
    else
      f.dst = is_ap ? -1 : (i + 1) % cfg.M;
    if (f.dst == i) f.dst = -1;  // degenerate one-station ring: broadcast
    if (cfg.stagger_offsets && f.src.kind != TrafficKind::Backlogged)
      f.src.start_offset_us += setup_rng.unit() * f.src.period_us;
  }
  return feeds;
}

// ---------------------------------------------------------------------------
// Slot-reservation protocol engine
// ---------------------------------------------------------------------------

RunResult simulate_zc(const ExperimentConfig& cfg, std::uint64_t seed,
                      bool keep_trace) {
  const TimingParameters t = cfg.timing();
  const double dur_us = cfg.duration_s * 1e6;
  const int N = cfg.N;
  const int M = cfg.M;

  Rng setup_rng = Rng::stream(seed, 1u << 20);
  const ConnectivityGraph graph =
      cfg.topology.single_domain
          ? ConnectivityGraph::complete(M)
          : random_topology(M, cfg.topology.gamma, setup_rng);
  std::vector<Feed> feeds = build_feeds(cfg, setup_rng);
  std::vector<Windows> windows = build_windows(cfg);

  std::vector<StationState> st;
  std::vector<Rng> rng;
  std::vector<int> offset(M, 0);  // sensing drift (double-counted mini-slots)
  st.reserve(M);
  for (int i = 0; i < M; ++i) {
    const bool is_ap = cfg.access_point && i == 0;
    st.emplace_back(i, N, cfg.reselection,
                    is_ap ? StationRole::AccessPoint : StationRole::Ordinary,
                    is_ap ? 0 : -1, cfg.recycle_rounds);
    rng.push_back(Rng::stream(seed, i));
  }

  RunResult out;
  DeliveryLog dlog;
  std::vector<StationLog> slog(M);
  MetricsReport& m = out.metrics;

  const bool track_convergence =
      cfg.topology.single_domain && cfg.fault.none();
  bool conv_final = false;
  bool conv_pending = false;
  double conv_time = 0;
  long long conv_slot = 0;

  double wall = 0;
  std::vector<Transmission> txs;
  std::vector<std::uint8_t> transmitted(M, 0);
  std::vector<std::uint8_t> delivered(M, 0);

  for (long long g = 0; wall < dur_us; ++g) {
    // Activation windows: fresh state and a full scan on every join.
    for (int i = 0; i < M; ++i) {
      Windows& w = windows[i];
      if (w.always_on()) {
        if (g == 0) {
          w.active = true;
          st[i].on_arrival();
        }
        continue;
      }
      if (w.active && wall >= w.spans[w.idx].leave_s * 1e6) {
        w.active = false;
        ++w.idx;
        feeds[i].queue.clear();
      }
      if (!w.active && w.idx < w.spans.size() &&
          wall >= w.spans[w.idx].join_s * 1e6) {
        w.active = true;
        const bool is_ap = cfg.access_point && i == 0;
        st[i] = StationState(
            i, N, cfg.reselection,
            is_ap ? StationRole::AccessPoint : StationRole::Ordinary,
            is_ap ? 0 : -1, cfg.recycle_rounds);
        st[i].on_arrival();
        feeds[i].arrivals_emitted = std::max(
            0LL, static_cast<long long>(std::ceil(
                     (wall - feeds[i].src.start_offset_us) /
                     std::max(feeds[i].src.period_us, 1.0))));
      }
    }

    // Arrivals, then transmit decisions.
    txs.clear();
    std::fill(transmitted.begin(), transmitted.end(), 0);
    for (int i = 0; i < M; ++i) {
      if (!windows[i].active) continue;
      feeds[i].pump(wall);
      if (st[i].scanning()) continue;
      const int local = static_cast<int>((g + offset[i]) % N);
      const bool qne = !feeds[i].queue.empty();
      if (local == 0) st[i].round_boundary(qne, rng[i]);
      if (st[i].decide_transmit(local, qne, rng[i])) {
        txs.push_back({i, feeds[i].dst});
        transmitted[i] = 1;
      }
    }

    SlotOutcomeRecord rec = resolve_slot(txs, graph, t, wall);
    switch (rec.kind) {
      case SlotKind::Idle: ++m.slots_idle; break;
      case SlotKind::Success: ++m.slots_success; break;
      case SlotKind::Collision:
        ++m.slots_collision;
        ++m.collisions_total;
        if (conv_final) ++m.collisions_after_convergence;
        break;
    }

    // Deliveries and per-transmitter outcomes.
    std::fill(delivered.begin(), delivered.end(), 0);
    for (std::size_t j = 0; j < rec.transmitters.size(); ++j)
      delivered[rec.transmitters[j]] = rec.delivered[j];
    const double slot_end = wall + rec.duration_us;
    for (const auto& tx : txs) {
      const int i = tx.src;
      if (delivered[i]) {
        ++slog[i].successes;
        slog[i].success_starts_us.push_back(wall);
        if (!feeds[i].queue.empty()) {
          dlog.times_us.push_back(slot_end);
          dlog.bits.push_back(8.0 * feeds[i].src.packet_bytes);
          dlog.delays_us.push_back(slot_end - feeds[i].queue.front());
          feeds[i].queue.pop_front();
        }
      } else {
        ++slog[i].collisions;
      }
    }

    // Observations.
    for (int i = 0; i < M; ++i) {
      if (!windows[i].active) continue;
      const int local = static_cast<int>((g + offset[i]) % N);
      if (transmitted[i]) {
        SlotObservation obs;
        obs.slot_index = local;
        obs.kind = rec.kind == SlotKind::Success
                       ? SlotObservation::Kind::BusySuccess
                       : SlotObservation::Kind::BusyCollision;
        obs.own = delivered[i] ? SlotObservation::Own::Success
                               : SlotObservation::Own::Collision;
        st[i].on_slot_observed(obs, rng[i]);
        continue;
      }
      bool truth_busy = false;
      bool neighborhood_clean = true;
      for (const auto& tx : txs)
        if (graph.adjacent(tx.src, i)) {
          truth_busy = true;
          if (!delivered[tx.src]) neighborhood_clean = false;
        }
      const Sensed s = cfg.fault.none()
                           ? (truth_busy ? Sensed::Busy : Sensed::Idle)
                           : sense(truth_busy, cfg.fault, rng[i]);
      SlotObservation obs;
      obs.slot_index = local;
      switch (s) {
        case Sensed::Busy:
          // A phantom busy carries no decodable frame, but the station cannot
          // tell it from a reservation in progress: it backs off the slot.
          obs.kind = (!truth_busy || neighborhood_clean)
                         ? SlotObservation::Kind::BusySuccess
                         : SlotObservation::Kind::BusyCollision;
          st[i].on_slot_observed(obs, rng[i]);
          break;
        case Sensed::Idle:
          obs.kind = SlotObservation::Kind::Empty;
          st[i].on_slot_observed(obs, rng[i]);
          break;
        case Sensed::IdleIdle:
          obs.kind = SlotObservation::Kind::Empty;
          st[i].on_slot_observed(obs, rng[i]);
          obs.slot_index = (local + 1) % N;
          st[i].on_slot_observed(obs, rng[i]);
          ++offset[i];  // the station's slot count has drifted ahead
          break;
      }
    }

    // Convergence: every active contender holds a slot, confirmed by a
    // collision-free horizon.
    if (track_convergence && !conv_final) {
      if (rec.kind == SlotKind::Collision) {
        conv_pending = false;
      } else {
        bool all_owned = true;
        for (int i = 0; i < M && all_owned; ++i) {
          if (!windows[i].active) continue;
          const bool contender =
              feeds[i].has_source || (cfg.access_point && i == 0);
          if (contender && st[i].owned_count() == 0) all_owned = false;
        }
        if (all_owned && !conv_pending) {
          conv_pending = true;
          conv_time = slot_end;
          conv_slot = g;
        }
        if (conv_pending && g - conv_slot >= 3LL * N) {
          conv_final = true;
          m.convergence_us = conv_time;
        }
      }
    }

    if (keep_trace) out.trace.push_back(rec);
    wall = slot_end + t.t_s;
  }

  finalize_metrics(m, cfg, dlog, slog, wall);
  return out;
}

// ---------------------------------------------------------------------------
// CSMA engine (event-driven, DCF-style)
// ---------------------------------------------------------------------------

RunResult simulate_csma(const ExperimentConfig& cfg, std::uint64_t seed,
                        bool keep_trace) {
  PhyParameters phy;
  const int frame_bytes = cfg.traffic.packet_bytes + cfg.frame_overhead_bytes;
  const TimingParameters t = TimingParameters::for_frame(phy, frame_bytes);
  const double air_us =
      phy.preamble_us + phy.plcp_header_us + phy.mpdu_us(frame_bytes);
  const double dur_us = cfg.duration_s * 1e6;
  const int M = cfg.M;

  Rng setup_rng = Rng::stream(seed, 1u << 20);
  const ConnectivityGraph graph =
      cfg.topology.single_domain
          ? ConnectivityGraph::complete(M)
          : random_topology(M, cfg.topology.gamma, setup_rng);
  std::vector<Feed> feeds = build_feeds(cfg, setup_rng);

  struct Tx {
    int src, dst;
    double start, end_air;
    bool collided = false;
    bool done = false;
  };
  std::vector<CsmaState> cs(M);
  std::vector<Rng> rng;
  std::vector<double> busy_until(M, 0.0);
  std::vector<std::uint8_t> transmitting(M, 0);
  std::vector<std::uint8_t> has_head(M, 0);  // backoff drawn for head packet
  std::vector<Tx> active;
  for (int i = 0; i < M; ++i) rng.push_back(Rng::stream(seed, i));

  RunResult out;
  DeliveryLog dlog;
  std::vector<StationLog> slog(M);
  MetricsReport& m = out.metrics;

  auto ensure_head = [&](int i, double now) {
    feeds[i].pump(now);
    if (!feeds[i].queue.empty() && !has_head[i]) {
      csma_begin(cs[i], rng[i]);
      has_head[i] = 1;
    }
  };
  for (int i = 0; i < M; ++i) ensure_head(i, 0.0);

  double wall = 0;
  while (wall < dur_us) {
    // Next air end.
    double e_air = kInf;
    for (const auto& tx : active)
      if (!tx.done) e_air = std::min(e_air, tx.end_air);
    // Next arrival.
    double e_arr = kInf;
    for (int i = 0; i < M; ++i)
      if (feeds[i].has_source && feeds[i].queue.empty())
        e_arr = std::min(e_arr, feeds[i].next_arrival_after(wall));
    // Next backoff expiry.
    double e_fire = kInf;
    for (int i = 0; i < M; ++i) {
      if (transmitting[i] || feeds[i].queue.empty() || !has_head[i]) continue;
      const double free =
          std::max(busy_until[i], feeds[i].queue.front());
      e_fire = std::min(e_fire,
                        free + phy.difs_us + cs[i].backoff * phy.slot_us);
    }
    const double e_next = std::min({e_air, e_arr, e_fire});
    if (e_next == kInf || e_next >= dur_us) {
      wall = dur_us;
      break;
    }
    wall = std::max(wall, e_next);

    if (e_air <= e_next) {
      // Finalize every transmission whose air time ends now.
      for (auto& tx : active) {
        if (tx.done || tx.end_air > e_next) continue;
        tx.done = true;
        const double block_end =
            tx.start + (tx.collided ? t.t_b : t.t_g);
        for (int j = 0; j < M; ++j)
          if (j == tx.src || graph.adjacent(tx.src, j))
            busy_until[j] = std::max(busy_until[j], block_end);
        transmitting[tx.src] = 0;
        has_head[tx.src] = 0;
        if (tx.collided) {
          ++m.collisions_total;
          ++slog[tx.src].collisions;
          csma_on_collision(cs[tx.src], rng[tx.src]);
          has_head[tx.src] = 1;
        } else {
          ++slog[tx.src].successes;
          slog[tx.src].success_starts_us.push_back(tx.start);
          const double completion = tx.start + t.t_g;
          dlog.times_us.push_back(completion);
          dlog.bits.push_back(8.0 * feeds[tx.src].src.packet_bytes);
          dlog.delays_us.push_back(completion - feeds[tx.src].queue.front());
          feeds[tx.src].queue.pop_front();
          csma_on_success(cs[tx.src], rng[tx.src]);
          ensure_head(tx.src, completion);
        }
        if (tx.collided)
          ++m.slots_collision;
        else
          ++m.slots_success;
        if (keep_trace) {
          SlotOutcomeRecord rec;
          rec.wall_time_us = tx.start;
          rec.duration_us = tx.collided ? t.t_b : t.t_g;
          rec.kind = tx.collided ? SlotKind::Collision : SlotKind::Success;
          rec.transmitters = {tx.src};
          rec.delivered = {static_cast<std::uint8_t>(tx.collided ? 0 : 1)};
          out.trace.push_back(rec);
        }
      }
      std::erase_if(active, [](const Tx& tx) { return tx.done; });
      continue;
    }

    if (e_arr <= e_next) {
      for (int i = 0; i < M; ++i) ensure_head(i, wall);
      continue;
    }

    // Backoff expiries: every station whose countdown hits zero now starts.
    std::vector<int> starters;
    for (int i = 0; i < M; ++i) {
      if (transmitting[i] || feeds[i].queue.empty() || !has_head[i]) continue;
      const double free = std::max(busy_until[i], feeds[i].queue.front());
      if (free + phy.difs_us + cs[i].backoff * phy.slot_us <= e_next)
        starters.push_back(i);
    }
    // Stations that sensed the new carrier freeze mid-countdown.
    for (int j = 0; j < M; ++j) {
      if (transmitting[j] || feeds[j].queue.empty() || !has_head[j]) continue;
      bool hears = false;
      for (int s : starters)
        if (s == j || graph.adjacent(s, j)) hears = true;
      if (!hears) continue;
      const double free = std::max(busy_until[j], feeds[j].queue.front());
      const double idle = e_next - free - phy.difs_us;
      int consumed =
          idle > 0 ? static_cast<int>(std::floor(idle / phy.slot_us)) : 0;
      consumed = std::clamp(consumed, 0, cs[j].backoff);
      cs[j].backoff -= consumed;
    }
    for (int s : starters) {
      cs[s].backoff = 0;
      Tx tx{s, feeds[s].dst, e_next, e_next + air_us};
      for (auto& other : active) {
        if (other.done) continue;
        if (graph.adjacent(other.src, tx.dst)) tx.collided = true;
        if (graph.adjacent(tx.src, other.dst)) other.collided = true;
      }
      transmitting[s] = 1;
      for (int j = 0; j < M; ++j)
        if (j == s || graph.adjacent(s, j))
          busy_until[j] = std::max(busy_until[j], tx.end_air);
      active.push_back(tx);
    }
    // Mutual collisions among simultaneous starters were handled above since
    // each new tx checks every already-appended one; recheck pairs started in
    // this same batch both ways.
    for (std::size_t a = active.size() - starters.size(); a < active.size();
         ++a)
      for (std::size_t b = 0; b < active.size(); ++b) {
        if (a == b || active[b].done) continue;
        if (graph.adjacent(active[b].src, active[a].dst))
          active[a].collided = true;
      }
  }

  finalize_metrics(m, cfg, dlog, slog, wall);
  return out;
}

// ---------------------------------------------------------------------------
// TDMA engine
// ---------------------------------------------------------------------------

RunResult simulate_tdma(const ExperimentConfig& cfg, std::uint64_t seed,
                        bool keep_trace) {
  const TimingParameters t = cfg.timing();
  const double dur_us = cfg.duration_s * 1e6;
  const int N = cfg.N;
  const int M = cfg.M;

  Rng setup_rng = Rng::stream(seed, 1u << 20);
  const ConnectivityGraph graph = ConnectivityGraph::complete(M);
  std::vector<Feed> feeds = build_feeds(cfg, setup_rng);

  std::vector<TdmaState> td(M);
  for (int i = 0; i < M; ++i) td[i] = {i, N};  // oracle-given assignment

  RunResult out;
  DeliveryLog dlog;
  std::vector<StationLog> slog(M);
  MetricsReport& m = out.metrics;
  m.convergence_us = 0.0;  // collision-free from the first slot

  double wall = 0;
  std::vector<Transmission> txs;
  for (long long g = 0; wall < dur_us; ++g) {
    const int s = static_cast<int>(g % N);
    txs.clear();
    if (s < M) {
      feeds[s].pump(wall);
      if (tdma_step(td[s], g, !feeds[s].queue.empty()))
        txs.push_back({s, feeds[s].dst});
    }
    SlotOutcomeRecord rec = resolve_slot(txs, graph, t, wall);
    rec.duration_us = t.t_g;  // fixed-length slots, used or not
    if (txs.empty())
      ++m.slots_idle;
    else
      ++m.slots_success;
    const double slot_end = wall + rec.duration_us;
    if (!txs.empty()) {
      const int i = txs[0].src;
      ++slog[i].successes;
      slog[i].success_starts_us.push_back(wall);
      dlog.times_us.push_back(slot_end);
      dlog.bits.push_back(8.0 * feeds[i].src.packet_bytes);
      dlog.delays_us.push_back(slot_end - feeds[i].queue.front());
      feeds[i].queue.pop_front();
    }
    if (keep_trace) out.trace.push_back(rec);
    wall = slot_end;
  }

  finalize_metrics(m, cfg, dlog, slog, wall);
  return out;
}

}  // namespace

RunResult simulate(const ExperimentConfig& config, std::uint64_t seed,
                   bool keep_trace) {
  config.validate();
  switch (config.protocol) {
    case Protocol::Zc: return simulate_zc(config, seed, keep_trace);
    case Protocol::Csma: return simulate_csma(config, seed, keep_trace);
    case Protocol::Tdma: return simulate_tdma(config, seed, keep_trace);
  }
  throw std::logic_error("simulate: unknown protocol");
}

}  // namespace zc
