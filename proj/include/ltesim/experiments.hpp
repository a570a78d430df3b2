#pragma once
// Scenario batch generation, the paired run matrix, and the CDF/percentile
// summaries behind the multi-user-diversity experiments. Cells of one config
// row share the channel seed so policy comparisons are paired.
#include <cstdint>
#include <string>
#include <vector>

#include "ltesim/config.hpp"
#include "ltesim/simcore.hpp"

namespace ltesim {

struct ScenarioBatch {
  int count = 100;
  int64_t duration_slots = 300000;
  uint64_t base_seed = 1;
};

// `count` configs derived from `base`; every LTE-attached device draws
// independent p,q ~ Uniform(0,1).
std::vector<ScenarioConfig> gen_markov_batch(const ScenarioBatch& batch,
                                             const ScenarioConfig& base);

struct CellResult {
  int config_id = 0;
  TransportKind scenario = TransportKind::SingleFlow;
  Policy inter_policy = Policy::Pfs;
  Policy intra_policy = Policy::Pfs;
  RunMetrics metrics;
  std::vector<uint64_t> rate_checksums;  // per-device, pairing witness
};

// One run per (config, scenario, policy) cell; single_flow collapses the
// policy axis (its schedule has one cluster of one flow). `parallel` selects
// the OpenMP path; both orderings produce identical result vectors.
std::vector<CellResult> run_matrix(const std::vector<ScenarioConfig>& configs,
                                   const std::vector<TransportKind>& scenarios,
                                   const std::vector<std::pair<Policy, Policy>>& policies,
                                   bool parallel = true);

// Empirical CDF: sorted ascending, probability (i+1)/n at the i-th value.
std::vector<std::pair<double, double>> cdf(const std::vector<double>& values);

// Smallest value whose cumulative probability reaches `prob`.
double cdf_percentile(const std::vector<std::pair<double, double>>& dist, double prob);

// Per-percentile throughput ratio a/b; zero denominators flagged infinite.
double relative_gain(double a, double b);

// `config_id,scenario,inter_policy,intra_policy,ue_id,throughput_bps`
std::string matrix_csv(const std::vector<CellResult>& results);

// Percentiles {10..50} of target-host throughput per cell, with gains over
// the single_flow baseline where present.
std::string matrix_summary_json(const std::vector<CellResult>& results);

}  // namespace ltesim
