// ltesim command line: run single scenarios, run batch matrices, generate
// synthetic channel traces, validate configs.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltesim/channel.hpp"
#include "ltesim/config.hpp"
#include "ltesim/experiments.hpp"
#include "ltesim/simcore.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

ordered_json metrics_json(const ltesim::RunMetrics& m) {
  ordered_json j;
  j["duration_slots"] = m.duration_slots;
  j["session_throughput_bps"] = fmt3(m.session_throughput_bps);
  j["system_throughput_bps"] = fmt3(m.system_throughput_bps);
  ordered_json flows;
  for (const auto& [name, bits] : m.per_flow_bits) flows[name] = bits;
  j["per_flow_delivered_bits"] = flows;
  ordered_json ues;
  for (const auto& [name, bits] : m.per_ue_bits) ues[name] = bits;
  j["per_ue_delivered_bits"] = ues;
  ordered_json series = ordered_json::array();
  for (double v : m.throughput_series_bps) series.push_back(fmt3(v));
  j["system_throughput_series_bps"] = series;
  return j;
}

int cmd_run(const std::string& config_path, std::optional<uint64_t> seed,
            std::optional<int64_t> duration) {
  ltesim::ScenarioConfig cfg = ltesim::parse_config(config_path);
  if (seed) cfg.seed = *seed;
  if (duration) cfg.duration_slots = *duration;
  ltesim::RunMetrics m = ltesim::run_scenario(cfg);
  std::cout << metrics_json(m).dump(2) << "\n";
  return 0;
}

int cmd_batch(const std::string& config_path, int count, const std::string& out_dir,
              std::optional<uint64_t> seed, std::optional<int64_t> duration,
              bool serial) {
  ltesim::ScenarioConfig base = ltesim::parse_config(config_path);
  if (seed) base.seed = *seed;

  ltesim::ScenarioBatch batch;
  batch.count = count;
  batch.duration_slots = duration.value_or(base.duration_slots);
  batch.base_seed = base.seed;
  auto configs = ltesim::gen_markov_batch(batch, base);

  // The seven-cell design: the baseline plus every multipath option under
  // the plain and the opportunistic intra-cluster policy.
  std::vector<ltesim::TransportKind> scenarios = {
      ltesim::TransportKind::SingleFlow, ltesim::TransportKind::DemuxedTcp,
      ltesim::TransportKind::TwoTcp, ltesim::TransportKind::MpTcp};
  std::vector<std::pair<ltesim::Policy, ltesim::Policy>> policies = {
      {ltesim::Policy::Pfs, ltesim::Policy::Pfs},
      {ltesim::Policy::Pfs, ltesim::Policy::MaxCi}};

  auto results = ltesim::run_matrix(configs, scenarios, policies, !serial);

  fs::create_directories(out_dir);
  {
    std::ofstream csv(fs::path(out_dir) / "matrix.csv", std::ios::binary);
    csv << ltesim::matrix_csv(results);
  }
  {
    std::ofstream js(fs::path(out_dir) / "summary.json", std::ios::binary);
    js << ltesim::matrix_summary_json(results);
  }
  std::cout << "wrote " << (fs::path(out_dir) / "matrix.csv").string() << " and "
            << (fs::path(out_dir) / "summary.json").string() << " (" << results.size()
            << " runs)\n";
  return 0;
}

int cmd_gen_traces(const std::string& out_dir, int count, uint64_t seed) {
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    auto samples = ltesim::generate_trace(
        ltesim::Rng::derive(seed, "trace-gen", static_cast<uint64_t>(i)));
    fs::path p = fs::path(out_dir) / ("trace_" + std::to_string(i) + ".csv");
    ltesim::write_trace_file(p.string(), samples);
  }
  std::cout << "wrote " << count << " trace files to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slot-accurate LTE downlink simulator with programmable two-tier "
               "scheduling, flow demux/mux, and D2D relaying"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int count = 100;
  std::optional<uint64_t> seed;
  std::optional<int64_t> duration;
  bool serial = false;

  auto* run = app.add_subcommand("run", "Run one scenario, print metrics JSON");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--seed", seed, "override scenario seed");
  run->add_option("--duration-slots", duration, "override duration");

  auto* batch = app.add_subcommand("batch", "Run a scenario x policy matrix");
  batch->add_option("config", config_path, "base scenario config file")->required();
  batch->add_option("--count", count, "number of random Markov scenarios");
  batch->add_option("--out", out_dir, "output directory");
  batch->add_option("--seed", seed, "override batch base seed");
  batch->add_option("--duration-slots", duration, "override per-run duration");
  batch->add_flag("--serial", serial, "disable the OpenMP runner");

  auto* gen = app.add_subcommand("gen-traces", "Generate synthetic SIR trace files");
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--count", count, "number of traces");
  uint64_t gen_seed = 1;
  gen->add_option("--seed", gen_seed, "generator seed");

  auto* validate = app.add_subcommand("validate", "Validate a config file");
  validate->add_option("config", config_path, "scenario config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, duration);
    if (batch->parsed()) return cmd_batch(config_path, count, out_dir, seed, duration, serial);
    if (gen->parsed()) return cmd_gen_traces(out_dir, count, gen_seed);
    if (validate->parsed()) {
      ltesim::parse_config(config_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
