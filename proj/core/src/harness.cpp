#include "zc/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace zc {
namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

const char* kind_name(SlotKind k) {
  switch (k) {
    case SlotKind::Idle: return "idle";
    case SlotKind::Success: return "success";
    case SlotKind::Collision: return "collision";
  }
  return "?";
}

}  // namespace

std::vector<RunOutput> run_experiment(const ExperimentConfig& config,
                                      int workers) {
  config.validate();
  const auto& seeds = config.seeds;
  std::vector<RunOutput> out(seeds.size());
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(seeds.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        out[i].seed = seeds[i];
        out[i].metrics = simulate(config, seeds[i]).metrics;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string metrics_csv_header() {
  return "protocol,N,M,seed,goodput_bps,mean_iad_us,p99_delay_us,"
         "convergence_us,collisions\n";
}

static std::string one_row(const ExperimentConfig& config,
                           const RunOutput& run) {
  const auto& m = run.metrics;
  std::string row = to_string(config.protocol);
  row += "," + std::to_string(config.N) + "," + std::to_string(config.M) +
         "," + std::to_string(run.seed);
  row += "," + fmt(m.goodput_bps, "%.3f");
  row += "," + fmt(m.mean_iad_us, "%.3f");
  const auto p99 = m.delay_percentiles_us.find(99);
  row += ",";
  if (p99 != m.delay_percentiles_us.end()) row += fmt(p99->second, "%.3f");
  row += ",";
  if (m.convergence_us) row += fmt(*m.convergence_us, "%.3f");
  row += "," + std::to_string(m.collisions_total) + "\n";
  return row;
}

std::string metrics_csv_rows(const ExperimentConfig& config,
                             const std::vector<RunOutput>& runs) {
  std::string out;
  for (const auto& run : runs) out += one_row(config, run);
  return out;
}

std::string report_json(const ExperimentConfig& config, const RunOutput& run) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config.to_json());
  j["seed"] = run.seed;
  const auto& m = run.metrics;
  nlohmann::json jm;
  jm["goodput_bps"] = m.goodput_bps;
  jm["mean_iad_us"] = m.mean_iad_us;
  jm["collisions_total"] = m.collisions_total;
  jm["collisions_after_convergence"] = m.collisions_after_convergence;
  jm["slots"] = {{"idle", m.slots_idle},
                 {"success", m.slots_success},
                 {"collision", m.slots_collision}};
  jm["duration_us"] = m.duration_us;
  jm["window_start_us"] = m.window_start_us;
  if (m.convergence_us) jm["convergence_us"] = *m.convergence_us;
  for (const auto& [pct, v] : m.delay_percentiles_us)
    jm["delay_percentiles_us"][std::to_string(pct)] = v;
  for (const auto& s : m.per_station)
    jm["per_station"].push_back({{"station", s.station},
                                 {"successes", s.successes},
                                 {"collisions", s.collisions},
                                 {"mean_iad_us", s.mean_iad_us}});
  j["metrics"] = jm;
  return j.dump(2) + "\n";
}

void apply_param(ExperimentConfig& config, const std::string& name,
                 double value) {
  if (name == "M") {
    config.M = static_cast<int>(value);
  } else if (name == "N") {
    config.N = static_cast<int>(value);
  } else if (name == "p") {
    config.fault.p1 = config.fault.p2 = value;
  } else if (name == "gamma") {
    config.topology.gamma = value;
  } else if (name == "pairs") {
    config.M = 2 * static_cast<int>(value);
  } else if (name == "period_us") {
    config.traffic.period_us = value;
  } else if (name == "packet_bytes") {
    config.traffic.packet_bytes = static_cast<int>(value);
  } else if (name == "duration_s") {
    config.duration_s = value;
  } else {
    throw std::invalid_argument("sweep: unknown parameter '" + name + "'");
  }
}

std::string sweep_csv(const ExperimentConfig& base, const std::string& param,
                      const std::vector<double>& values, int workers) {
  std::string out = "param,value," + metrics_csv_header();
  for (double v : values) {
    ExperimentConfig cfg = base;
    apply_param(cfg, param, v);
    cfg.validate();
    const auto runs = run_experiment(cfg, workers);
    for (const auto& run : runs)
      out += param + "," + fmt(v, "%.9g") + "," + one_row(cfg, run);
  }
  return out;
}

std::string analyze_csv(const std::vector<std::pair<int, int>>& nm_pairs,
                        const TimingParameters& t, double epsilon) {
  std::string out = "N,M,expected_cycles,upper_bound_s,exact_expected_s\n";
  for (const auto& [N, M] : nm_pairs) {
    const ReservationChain chain = build_chain(N, M);
    out += std::to_string(N) + "," + std::to_string(M);
    out += "," + fmt(expected_cycles(chain), "%.9g");
    out += "," + fmt(upper_bound_time_s(chain, t), "%.9g");
    out += "," + fmt(exact_expected_time_s(chain, t, epsilon), "%.9g") + "\n";
  }
  return out;
}

std::string trace_csv(const std::vector<SlotOutcomeRecord>& trace) {
  std::string out = "wall_time_us,duration_us,kind,transmitters\n";
  for (const auto& rec : trace) {
    out += fmt(rec.wall_time_us, "%.3f") + "," +
           fmt(rec.duration_us, "%.3f") + "," + kind_name(rec.kind) + ",";
    for (std::size_t i = 0; i < rec.transmitters.size(); ++i) {
      if (i) out += ";";
      out += std::to_string(rec.transmitters[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace zc
