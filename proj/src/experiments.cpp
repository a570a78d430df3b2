#include "ltesim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "ltesim/rng.hpp"

namespace ltesim {

std::vector<ScenarioConfig> gen_markov_batch(const ScenarioBatch& batch,
                                             const ScenarioConfig& base) {
  if (batch.count < 1) throw std::invalid_argument("batch count must be >= 1");
  if (batch.duration_slots < 1) throw std::invalid_argument("batch duration must be >= 1");
  std::vector<ScenarioConfig> configs;
  configs.reserve(static_cast<size_t>(batch.count));
  for (int i = 0; i < batch.count; ++i) {
    ScenarioConfig cfg = base;
    cfg.duration_slots = batch.duration_slots;
    cfg.seed = batch.base_seed + static_cast<uint64_t>(i);
    Rng rng = Rng::derive(batch.base_seed, "markov-params", static_cast<uint64_t>(i));
    auto draw = [&](ChannelSpec& spec) {
      spec.model = ChannelSpec::Model::Markov;
      spec.p = rng.uniform();
      spec.q = rng.uniform();
    };
    draw(cfg.target_channel);
    draw(cfg.relay_channel);
    cfg.extra_channels.resize(static_cast<size_t>(cfg.extra_ues));
    for (auto& e : cfg.extra_channels) draw(e);
    configs.push_back(std::move(cfg));
  }
  return configs;
}

namespace {

bool transport_needs_relay(TransportKind k) {
  return k == TransportKind::DemuxedTcp || k == TransportKind::TwoTcp ||
         k == TransportKind::MpTcp;
}

ScenarioConfig cell_config(const ScenarioConfig& base, TransportKind scenario,
                           Policy inter, Policy intra) {
  ScenarioConfig cfg = base;
  cfg.transport = scenario;
  cfg.relay = transport_needs_relay(scenario) ||
              (scenario == TransportKind::Backlogged && base.relay);
  cfg.inter_policy = inter;
  cfg.intra_policy = intra;
  return cfg;
}

struct CellSpec {
  int config_id;
  TransportKind scenario;
  Policy inter, intra;
};

std::vector<CellSpec> expand_cells(size_t num_configs,
                                   const std::vector<TransportKind>& scenarios,
                                   const std::vector<std::pair<Policy, Policy>>& policies) {
  if (scenarios.empty()) throw std::invalid_argument("scenario list must be non-empty");
  if (policies.empty()) throw std::invalid_argument("policy list must be non-empty");
  std::vector<CellSpec> cells;
  for (size_t ci = 0; ci < num_configs; ++ci) {
    for (TransportKind s : scenarios) {
      if (s == TransportKind::SingleFlow) {
        // Policy axis collapses: one cluster of one flow.
        cells.push_back({static_cast<int>(ci), s, policies[0].first, policies[0].second});
        continue;
      }
      for (const auto& [inter, intra] : policies)
        cells.push_back({static_cast<int>(ci), s, inter, intra});
    }
  }
  return cells;
}

CellResult run_cell(const std::vector<ScenarioConfig>& configs, const CellSpec& spec) {
  ScenarioConfig cfg = cell_config(configs[static_cast<size_t>(spec.config_id)],
                                   spec.scenario, spec.inter, spec.intra);
  World world(cfg);
  CellResult r;
  r.config_id = spec.config_id;
  r.scenario = spec.scenario;
  r.inter_policy = spec.inter;
  r.intra_policy = spec.intra;
  r.metrics = world.run();
  r.rate_checksums = world.rate_checksums();
  return r;
}

std::string fmt_bps(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::vector<CellResult> run_matrix(const std::vector<ScenarioConfig>& configs,
                                   const std::vector<TransportKind>& scenarios,
                                   const std::vector<std::pair<Policy, Policy>>& policies,
                                   bool parallel) {
  auto cells = expand_cells(configs.size(), scenarios, policies);
  std::vector<CellResult> results(cells.size());
  if (parallel) {
#ifdef LTESIM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < static_cast<long long>(cells.size()); ++i)
      results[static_cast<size_t>(i)] = run_cell(configs, cells[static_cast<size_t>(i)]);
  } else {
    // Serial reference path; must produce the identical result vector.
    for (size_t i = 0; i < cells.size(); ++i) results[i] = run_cell(configs, cells[i]);
  }
  return results;
}

std::vector<std::pair<double, double>> cdf(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("cdf of empty sample");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(sorted.size());
  double n = static_cast<double>(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i)
    out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  return out;
}

double cdf_percentile(const std::vector<std::pair<double, double>>& dist, double prob) {
  for (const auto& [value, p] : dist)
    if (p >= prob) return value;
  return dist.back().first;
}

double relative_gain(double a, double b) {
  if (b == 0) return std::numeric_limits<double>::infinity();
  return a / b;
}

std::string matrix_csv(const std::vector<CellResult>& results) {
  std::ostringstream out;
  out << "config_id,scenario,inter_policy,intra_policy,ue_id,throughput_bps\n";
  for (const auto& r : results) {
    double slots = static_cast<double>(std::max<int64_t>(r.metrics.duration_slots, 1));
    for (const auto& [ue, bits] : r.metrics.per_ue_bits) {
      double bps = static_cast<double>(bits) / slots * kSlotsPerSecond;
      out << r.config_id << ',' << transport_name(r.scenario) << ','
          << policy_name(r.inter_policy) << ',' << policy_name(r.intra_policy) << ','
          << ue << ',' << fmt_bps(bps) << '\n';
    }
  }
  return out.str();
}

std::string matrix_summary_json(const std::vector<CellResult>& results) {
  using ordered_json = nlohmann::ordered_json;
  // Group target-host throughputs per (scenario, inter, intra), config order.
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : results)
    groups[{transport_name(r.scenario), policy_name(r.inter_policy),
            policy_name(r.intra_policy)}]
        .push_back(r.metrics.session_throughput_bps);

  const int percentiles[] = {10, 20, 30, 40, 50};
  std::vector<double> baseline;  // single_flow cell, if present
  for (const auto& [key, values] : groups)
    if (std::get<0>(key) == "single_flow") baseline = values;

  ordered_json cells = ordered_json::array();
  for (const auto& [key, values] : groups) {
    auto dist = cdf(values);
    ordered_json cell;
    cell["scenario"] = std::get<0>(key);
    cell["inter_policy"] = std::get<1>(key);
    cell["intra_policy"] = std::get<2>(key);
    ordered_json pcts;
    for (int p : percentiles)
      pcts[std::to_string(p)] = cdf_percentile(dist, p / 100.0);
    cell["percentiles_bps"] = pcts;
    if (!baseline.empty() && std::get<0>(key) != "single_flow") {
      auto base_dist = cdf(baseline);
      ordered_json gains;
      for (int p : percentiles) {
        double g = relative_gain(cdf_percentile(dist, p / 100.0),
                                 cdf_percentile(base_dist, p / 100.0));
        gains[std::to_string(p)] = std::isfinite(g) ? ordered_json(g) : ordered_json("inf");
      }
      cell["gain_vs_single_flow"] = gains;
    }
    cells.push_back(cell);
  }
  ordered_json summary;
  summary["runs"] = results.size();
  summary["cells"] = cells;
  return summary.dump(2) + "\n";
}

}  // namespace ltesim
