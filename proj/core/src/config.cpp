#include "zc/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace zc {

using nlohmann::json;

namespace {

std::string kind_name(TrafficKind k) {
  switch (k) {
    case TrafficKind::Backlogged: return "backlogged";
    case TrafficKind::PeriodicCbr: return "periodic-cbr";
    case TrafficKind::SparsePeriodic: return "sparse-periodic";
  }
  return "?";
}

TrafficKind kind_from(const std::string& s) {
  if (s == "backlogged") return TrafficKind::Backlogged;
  if (s == "periodic-cbr") return TrafficKind::PeriodicCbr;
  if (s == "sparse-periodic") return TrafficKind::SparsePeriodic;
  throw std::invalid_argument("config: unknown traffic kind '" + s + "'");
}

Protocol protocol_from(const std::string& s) {
  if (s == "zc") return Protocol::Zc;
  if (s == "csma") return Protocol::Csma;
  if (s == "tdma") return Protocol::Tdma;
  throw std::invalid_argument("config: unknown protocol '" + s + "'");
}

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Zc: return "zc";
    case Protocol::Csma: return "csma";
    case Protocol::Tdma: return "tdma";
  }
  return "?";
}

TimingParameters ExperimentConfig::timing() const {
  if (explicit_timing) return *explicit_timing;
  PhyParameters phy;
  return TimingParameters::for_frame(
      phy, traffic.packet_bytes + frame_overhead_bytes);
}

void ExperimentConfig::validate() const {
  if (N < 1) throw std::invalid_argument("config.N: must be >= 1");
  if (M < 1) throw std::invalid_argument("config.M: must be >= 1");
  if (protocol == Protocol::Tdma && M > N)
    throw std::invalid_argument(
        "config.M: TDMA is undefined for M > N (no slot per station)");
  if (traffic.packet_bytes < 1)
    throw std::invalid_argument("config.traffic.packet_bytes: must be >= 1");
  if (traffic.kind != TrafficKind::Backlogged && traffic.period_us <= 0)
    throw std::invalid_argument(
        "config.traffic.period_us: periodic traffic needs period > 0");
  if (frame_overhead_bytes < 0)
    throw std::invalid_argument("config.frame_overhead_bytes: must be >= 0");
  if (duration_s <= 0)
    throw std::invalid_argument("config.duration_s: must be > 0");
  if (seeds.empty())
    throw std::invalid_argument("config.seeds: need at least one seed");
  if (recycle_rounds < 1)
    throw std::invalid_argument("config.recycle_rounds: must be >= 1");
  fault.validate();
  if (!topology.single_domain) {
    if (topology.gamma < 0 || topology.gamma > 1)
      throw std::invalid_argument("config.topology.gamma: outside [0, 1]");
    if (M % 2 != 0)
      throw std::invalid_argument(
          "config.M: random topology pairs nodes; M must be even");
    if (protocol == Protocol::Tdma)
      throw std::invalid_argument(
          "config.protocol: TDMA supports single-domain runs only");
  }
  if (flow_mode == FlowMode::Pairs && M % 2 != 0)
    throw std::invalid_argument("config.M: pair flows need an even M");
  if (access_point && protocol != Protocol::Zc)
    throw std::invalid_argument(
        "config.access_point: only the zc protocol models an AP");
  for (const auto& w : arrival_schedule) {
    if (w.station < 0 || w.station >= M)
      throw std::invalid_argument("config.arrival_schedule: bad station id");
    if (w.leave_s <= w.join_s)
      throw std::invalid_argument(
          "config.arrival_schedule: leave must be after join");
    if (access_point && w.station == 0)
      throw std::invalid_argument(
          "config.arrival_schedule: the AP (station 0) is always on");
  }
  timing().validate();
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["protocol"] = to_string(protocol);
  j["N"] = N;
  j["M"] = M;
  j["traffic"] = {{"kind", kind_name(traffic.kind)},
                  {"packet_bytes", traffic.packet_bytes},
                  {"period_us", traffic.period_us},
                  {"start_offset_us", traffic.start_offset_us}};
  j["frame_overhead_bytes"] = frame_overhead_bytes;
  j["stagger_offsets"] = stagger_offsets;
  if (explicit_timing)
    j["timing"] = {{"t_g", explicit_timing->t_g},
                   {"t_b", explicit_timing->t_b},
                   {"t_v", explicit_timing->t_v},
                   {"t_s", explicit_timing->t_s}};
  j["fault"] = {{"p1", fault.p1}, {"p2", fault.p2}, {"p3", fault.p3}};
  j["topology"] = {{"type", topology.single_domain ? "single" : "random"},
                   {"gamma", topology.gamma}};
  j["flow_mode"] = flow_mode == FlowMode::All ? "all" : "pairs";
  j["duration_s"] = duration_s;
  j["seeds"] = seeds;
  j["reselection"] =
      reselection == ReselectionMode::Immediate ? "immediate" : "cycle-end";
  j["recycle_rounds"] = recycle_rounds;
  j["access_point"] = access_point;
  j["arrival_schedule"] = json::array();
  for (const auto& w : arrival_schedule)
    j["arrival_schedule"].push_back(
        {{"station", w.station}, {"join_s", w.join_s}, {"leave_s", w.leave_s}});
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                e.what());
  }
  ExperimentConfig c;
  if (j.contains("protocol")) c.protocol = protocol_from(j["protocol"]);
  c.N = j.value("N", c.N);
  c.M = j.value("M", c.M);
  if (j.contains("traffic")) {
    const auto& t = j["traffic"];
    if (t.contains("kind")) c.traffic.kind = kind_from(t["kind"]);
    c.traffic.packet_bytes = t.value("packet_bytes", c.traffic.packet_bytes);
    c.traffic.period_us = t.value("period_us", c.traffic.period_us);
    c.traffic.start_offset_us =
        t.value("start_offset_us", c.traffic.start_offset_us);
  }
  c.frame_overhead_bytes =
      j.value("frame_overhead_bytes", c.frame_overhead_bytes);
  c.stagger_offsets = j.value("stagger_offsets", c.stagger_offsets);
  if (j.contains("timing")) {
    const auto& t = j["timing"];
    c.explicit_timing = TimingParameters::explicit_values(
        t.at("t_g"), t.at("t_b"), t.at("t_v"), t.value("t_s", 0.0));
  }
  if (j.contains("fault")) {
    const auto& f = j["fault"];
    c.fault.p1 = f.value("p1", 0.0);
    c.fault.p2 = f.value("p2", 0.0);
    c.fault.p3 = f.value("p3", 0.0);
  }
  if (j.contains("topology")) {
    const auto& t = j["topology"];
    const std::string type = t.value("type", "single");
    if (type == "single") {
      c.topology.single_domain = true;
    } else if (type == "random") {
      c.topology.single_domain = false;
      c.topology.gamma = t.value("gamma", 1.0);
    } else {
      throw std::invalid_argument("config.topology.type: unknown '" + type +
                                  "'");
    }
  }
  if (j.contains("flow_mode")) {
    const std::string fm = j["flow_mode"];
    if (fm == "all")
      c.flow_mode = FlowMode::All;
    else if (fm == "pairs")
      c.flow_mode = FlowMode::Pairs;
    else
      throw std::invalid_argument("config.flow_mode: unknown '" + fm + "'");
  }
  c.duration_s = j.value("duration_s", c.duration_s);
  if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("reselection")) {
    const std::string r = j["reselection"];
    if (r == "immediate")
      c.reselection = ReselectionMode::Immediate;
    else if (r == "cycle-end")
      c.reselection = ReselectionMode::CycleEnd;
    else
      throw std::invalid_argument("config.reselection: unknown '" + r + "'");
  }
  c.recycle_rounds = j.value("recycle_rounds", c.recycle_rounds);
  c.access_point = j.value("access_point", c.access_point);
  if (j.contains("arrival_schedule"))
    for (const auto& w : j["arrival_schedule"])
      c.arrival_schedule.push_back(
          {w.at("station"), w.at("join_s"), w.at("leave_s")});
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace zc
