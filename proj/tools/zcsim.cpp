// zcsim: analysis tables, scenario runs, parameter sweeps, and per-slot
// traces for the zero-collision MAC simulator.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zc/harness.hpp"

namespace fs = std::filesystem;

namespace {

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& spec) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("bad N:M pair '" + item + "'");
    out.emplace_back(std::stoi(item.substr(0, colon)),
                     std::stoi(item.substr(colon + 1)));
  }
  if (out.empty()) throw std::runtime_error("no N:M pairs given");
  return out;
}

std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::runtime_error("no sweep values given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-collision MAC simulator and analysis toolkit"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "expected convergence cycles, exact time, and upper bound");
  std::string pairs_spec;
  int frame_bytes = 2346;
  double tg = -1, tb = -1, tv = 20.0, ts = 0.0, epsilon = 1e-9;
  std::string analyze_out;
  analyze->add_option("--pairs", pairs_spec, "comma list of N:M pairs")
      ->required();
  analyze->add_option("--frame-bytes", frame_bytes,
                      "frame size used to derive slot durations");
  analyze->add_option("--tg", tg, "explicit successful-slot duration (us)");
  analyze->add_option("--tb", tb, "explicit collision-slot duration (us)");
  analyze->add_option("--tv", tv, "idle mini-slot duration (us)");
  analyze->add_option("--ts", ts, "inter-slot gap (us)");
  analyze->add_option("--epsilon", epsilon, "absorption-tail truncation");
  analyze->add_option("-o,--output", analyze_out, "output CSV (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "simulate a scenario config");
  std::string run_config, run_outdir;
  std::vector<std::uint64_t> run_seeds;
  int workers = 0;
  run->add_option("-c,--config", run_config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--outdir", run_outdir, "output directory")->required();
  run->add_option("--seeds", run_seeds, "override config seed list");
  run->add_option("--workers", workers, "worker threads (0 = all cores)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "vary one parameter over a range");
  std::string sweep_config, sweep_param, sweep_values, sweep_out;
  int sweep_workers = 0;
  sweep->add_option("-c,--config", sweep_config, "base config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--param", sweep_param,
                    "M | N | p | gamma | pairs | period_us | packet_bytes")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required();
  sweep->add_option("--workers", sweep_workers, "worker threads");
  sweep->add_option("-o,--output", sweep_out, "output CSV (default stdout)");

  // trace
  auto* trace = app.add_subcommand("trace", "per-slot dump of a single run");
  std::string trace_config, trace_out;
  std::uint64_t trace_seed = 1;
  trace->add_option("-c,--config", trace_config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  trace->add_option("--seed", trace_seed, "seed for the traced run");
  trace->add_option("-o,--output", trace_out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      zc::TimingParameters t;
      if (tg >= 0 || tb >= 0) {
        if (tg < 0 || tb < 0)
          throw std::runtime_error("--tg and --tb must be given together");
        t = zc::TimingParameters::explicit_values(tg, tb, tv, ts);
      } else {
        t = zc::TimingParameters::for_frame(zc::PhyParameters{}, frame_bytes);
      }
      write_output(analyze_out,
                   zc::analyze_csv(parse_pairs(pairs_spec), t, epsilon));
    } else if (*run) {
      auto cfg = zc::ExperimentConfig::load(run_config);
      if (!run_seeds.empty()) cfg.seeds = run_seeds;
      cfg.validate();
      fs::create_directories(run_outdir);
      const auto results = zc::run_experiment(cfg, workers);
      std::string csv = zc::metrics_csv_header();
      csv += zc::metrics_csv_rows(cfg, results);
      write_output((fs::path(run_outdir) / "metrics.csv").string(), csv);
      for (const auto& r : results)
        write_output((fs::path(run_outdir) /
                      ("report_seed" + std::to_string(r.seed) + ".json"))
                         .string(),
                     zc::report_json(cfg, r));
      std::cout << "wrote " << results.size() << " run(s) to " << run_outdir
                << "\n";
    } else if (*sweep) {
      auto cfg = zc::ExperimentConfig::load(sweep_config);
      write_output(sweep_out, zc::sweep_csv(cfg, sweep_param,
                                            parse_values(sweep_values),
                                            sweep_workers));
    } else if (*trace) {
      auto cfg = zc::ExperimentConfig::load(trace_config);
      const auto result = zc::simulate(cfg, trace_seed, /*keep_trace=*/true);
      write_output(trace_out, zc::trace_csv(result.trace));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
