#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "ltesim/experiments.hpp"

using namespace ltesim;

namespace {

ScenarioConfig base_config() {
  ScenarioConfig cfg;
  cfg.transport = TransportKind::SingleFlow;
  cfg.duration_slots = 4000;
  return cfg;
}

ScenarioBatch small_batch(int count) {
  ScenarioBatch b;
  b.count = count;
  b.duration_slots = 4000;
  b.base_seed = 7;
  return b;
}

}  // namespace

TEST_CASE("empirical cdf sorts values and steps by 1/n") {
  auto d = cdf({10.0, 30.0, 20.0});
  REQUIRE(d.size() == 3);
  CHECK(d[0] == std::pair<double, double>{10.0, 1.0 / 3});
  CHECK(d[1].first == 20.0);
  CHECK(d[1].second == doctest::Approx(2.0 / 3));
  CHECK(d[2] == std::pair<double, double>{30.0, 1.0});
}

TEST_CASE("percentile picks the smallest value reaching the probability") {
  auto d = cdf({10.0, 30.0, 20.0});
  CHECK(cdf_percentile(d, 0.10) == 10.0);
  CHECK(cdf_percentile(d, 1.0 / 3) == 10.0);
  CHECK(cdf_percentile(d, 0.34) == 20.0);
  CHECK(cdf_percentile(d, 0.90) == 30.0);
}

TEST_CASE("relative gain flags zero baselines") {
  CHECK(relative_gain(3.0, 2.0) == doctest::Approx(1.5));
  CHECK(std::isinf(relative_gain(1.0, 0.0)));
}

TEST_CASE("markov batch draws per-device parameters and distinct seeds") {
  auto base = base_config();
  base.transport = TransportKind::DemuxedTcp;
  base.relay = true;
  base.extra_ues = 1;
  auto batch = small_batch(20);
  auto configs = gen_markov_batch(batch, base);
  REQUIRE(configs.size() == 20);
  for (size_t i = 0; i < configs.size(); ++i) {
    CHECK(configs[i].seed == batch.base_seed + i);
    CHECK(configs[i].duration_slots == batch.duration_slots);
    for (const ChannelSpec* c : {&configs[i].target_channel, &configs[i].relay_channel,
                                 &configs[i].extra_channels.at(0)}) {
      CHECK(c->model == ChannelSpec::Model::Markov);
      CHECK(c->p >= 0.0);
      CHECK(c->p <= 1.0);
      CHECK(c->q >= 0.0);
      CHECK(c->q <= 1.0);
    }
  }
  // Parameters differ across configs and across devices of one config.
  CHECK(configs[0].target_channel.p != configs[1].target_channel.p);
  CHECK(configs[0].target_channel.p != configs[0].relay_channel.p);
  // Regenerating is deterministic.
  auto again = gen_markov_batch(batch, base);
  CHECK(again[5].target_channel.p == configs[5].target_channel.p);
  CHECK(again[5].relay_channel.q == configs[5].relay_channel.q);
}

TEST_CASE("run_matrix collapses the policy axis for single_flow") {
  auto configs = gen_markov_batch(small_batch(4), base_config());
  std::vector<TransportKind> scenarios = {TransportKind::SingleFlow,
                                          TransportKind::DemuxedTcp};
  std::vector<std::pair<Policy, Policy>> policies = {
      {Policy::Pfs, Policy::Pfs}, {Policy::Pfs, Policy::MaxCi}};
  auto results = run_matrix(configs, scenarios, policies, false);
  // 4 configs x (1 single_flow cell + 2 demuxed cells).
  CHECK(results.size() == 12);
  int single_cells = 0;
  for (const auto& r : results)
    if (r.scenario == TransportKind::SingleFlow) ++single_cells;
  CHECK(single_cells == 4);
}

TEST_CASE("cells of one config row share channel realizations") {
  auto configs = gen_markov_batch(small_batch(3), base_config());
  std::vector<std::pair<Policy, Policy>> policies = {
      {Policy::Pfs, Policy::Pfs}, {Policy::Pfs, Policy::MaxCi}};
  auto results = run_matrix(configs, {TransportKind::SingleFlow, TransportKind::Backlogged},
                            policies, false);
  for (int id = 0; id < 3; ++id) {
    std::vector<const CellResult*> row;
    for (const auto& r : results)
      if (r.config_id == id) row.push_back(&r);
    REQUIRE(row.size() == 3);
    for (size_t i = 1; i < row.size(); ++i)
      CHECK(row[i]->rate_checksums == row[0]->rate_checksums);
  }
}

TEST_CASE("serial and parallel matrices are identical") {
  auto configs = gen_markov_batch(small_batch(6), base_config());
  std::vector<TransportKind> scenarios = {TransportKind::SingleFlow,
                                          TransportKind::Backlogged};
  std::vector<std::pair<Policy, Policy>> policies = {{Policy::Pfs, Policy::Pfs}};
  auto serial = run_matrix(configs, scenarios, policies, false);
  auto parallel = run_matrix(configs, scenarios, policies, true);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].config_id == parallel[i].config_id);
    CHECK(serial[i].scenario == parallel[i].scenario);
    CHECK(serial[i].metrics.per_ue_bits == parallel[i].metrics.per_ue_bits);
    CHECK(serial[i].rate_checksums == parallel[i].rate_checksums);
  }
}

TEST_CASE("csv output follows the documented schema") {
  auto configs = gen_markov_batch(small_batch(2), base_config());
  auto results = run_matrix(configs, {TransportKind::SingleFlow},
                            {{Policy::Pfs, Policy::Pfs}}, false);
  std::istringstream in(matrix_csv(results));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "config_id,scenario,inter_policy,intra_policy,ue_id,throughput_bps");
  REQUIRE(std::getline(in, line));
  CHECK(line.rfind("0,single_flow,pfs,pfs,target,", 0) == 0);
  // Throughput field is fixed-point with three decimals.
  CHECK(line.substr(line.size() - 4, 1) == ".");
}

TEST_CASE("summary json carries the five low percentiles and baseline gains") {
  auto configs = gen_markov_batch(small_batch(3), base_config());
  std::vector<std::pair<Policy, Policy>> policies = {{Policy::Pfs, Policy::MaxCi}};
  auto results = run_matrix(configs, {TransportKind::SingleFlow, TransportKind::Backlogged},
                            policies, false);
  auto j = nlohmann::json::parse(matrix_summary_json(results));
  REQUIRE(j.contains("cells"));
  bool saw_baseline = false, saw_gain = false;
  for (const auto& cell : j["cells"]) {
    REQUIRE(cell.contains("percentiles_bps"));
    for (const char* p : {"10", "20", "30", "40", "50"})
      CHECK(cell["percentiles_bps"].contains(p));
    if (cell["scenario"] == "single_flow") saw_baseline = true;
    if (cell.contains("gain_vs_single_flow")) {
      saw_gain = true;
      for (const char* p : {"10", "20", "30", "40", "50"})
        CHECK(cell["gain_vs_single_flow"].contains(p));
    }
  }
  CHECK(saw_baseline);
  CHECK(saw_gain);
}
