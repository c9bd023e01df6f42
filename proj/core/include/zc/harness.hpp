#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "zc/analysis.hpp"
#include "zc/config.hpp"
#include "zc/simulator.hpp"

namespace zc {

struct RunOutput {
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

// Simulates every configured seed, fanning out to `workers` threads
// (0 = hardware concurrency). Results are ordered by seed position, so
// parallel and sequential execution produce identical output.
std::vector<RunOutput> run_experiment(const ExperimentConfig& config,
                                      int workers = 0);

// CSV row block with header `protocol,N,M,seed,goodput_bps,mean_iad_us,
// p99_delay_us,convergence_us,collisions`. convergence_us is empty when the
// run did not converge.
std::string metrics_csv_header();
std::string metrics_csv_rows(const ExperimentConfig& config,
                             const std::vector<RunOutput>& runs);

// Per-run JSON report (config echo plus metrics).
std::string report_json(const ExperimentConfig& config, const RunOutput& run);

// Overwrites one scalar scenario parameter by name: M, N, p (sets fault
// p1 = p2), gamma, pairs (M = 2 * value), period_us, packet_bytes,
// duration_s. Throws std::invalid_argument for unknown names.
void apply_param(ExperimentConfig& config, const std::string& name,
                 double value);

// One CSV row per (value, seed): `param,value,` followed by the metrics
// columns.
std::string sweep_csv(const ExperimentConfig& base, const std::string& param,
                      const std::vector<double>& values, int workers = 0);

// Analysis table with header `N,M,expected_cycles,upper_bound_s,
// exact_expected_s`, one row per (N, M) pair.
std::string analyze_csv(const std::vector<std::pair<int, int>>& nm_pairs,
                        const TimingParameters& t, double epsilon = 1e-9);

// Per-slot dump with header `wall_time_us,duration_us,kind,transmitters`;
// transmitters are ';'-joined station ids.
std::string trace_csv(const std::vector<SlotOutcomeRecord>& trace);

}  // namespace zc
