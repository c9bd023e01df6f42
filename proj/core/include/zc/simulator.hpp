#pragma once

#include <cstdint>
#include <vector>

#include "zc/config.hpp"
#include "zc/metrics.hpp"

namespace zc {

struct RunResult {
  MetricsReport metrics;
  std::vector<SlotOutcomeRecord> trace;  // filled only when requested
};

// One deterministic simulation of the configured scenario. Identical
// (config, seed) inputs produce identical results and traces.
RunResult simulate(const ExperimentConfig& config, std::uint64_t seed,
                   bool keep_trace = false);

}  // namespace zc
