// Timing comparison between the serial reference runner and the OpenMP
// matrix runner, with an equality check on the result vectors.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "ltesim/experiments.hpp"

using namespace ltesim;

int main(int argc, char** argv) {
  if (argc > 1 && (!std::strcmp(argv[1], "-h") || !std::strcmp(argv[1], "--help"))) {
    std::printf("usage: bench_matrix [configs=8] [slots=30000]\n");
    return 0;
  }
  int count = argc > 1 ? std::atoi(argv[1]) : 8;
  int64_t duration = argc > 2 ? std::atoll(argv[2]) : 30000;
  if (count < 1 || duration < 1) {
    std::fprintf(stderr, "configs and slots must be positive\n");
    return 2;
  }

  ScenarioConfig base;
  base.relay = true;
  ScenarioBatch batch{count, duration, 7};
  auto configs = gen_markov_batch(batch, base);

  std::vector<TransportKind> scenarios = {TransportKind::SingleFlow,
                                          TransportKind::DemuxedTcp,
                                          TransportKind::TwoTcp, TransportKind::MpTcp};
  std::vector<std::pair<Policy, Policy>> policies = {{Policy::Pfs, Policy::Pfs},
                                                     {Policy::Pfs, Policy::MaxCi}};

  auto time_it = [&](bool parallel) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = run_matrix(configs, scenarios, policies, parallel);
    auto t1 = std::chrono::steady_clock::now();
    return std::make_pair(std::chrono::duration<double>(t1 - t0).count(), r);
  };

  auto [t_serial, serial] = time_it(false);
  auto [t_parallel, parallel] = time_it(true);

  bool equal = serial.size() == parallel.size();
  for (size_t i = 0; equal && i < serial.size(); ++i)
    equal = serial[i].metrics.session_throughput_bps ==
                parallel[i].metrics.session_throughput_bps &&
            serial[i].rate_checksums == parallel[i].rate_checksums;

  std::printf("runs:       %zu (%d configs x 7 cells, %lld slots each)\n",
              serial.size(), count, static_cast<long long>(duration));
  std::printf("serial:     %.3f s\n", t_serial);
  std::printf("openmp:     %.3f s\n", t_parallel);
  std::printf("speedup:    %.2fx\n", t_serial / t_parallel);
  std::printf("identical:  %s\n", equal ? "yes" : "NO");
  return equal ? 0 : 1;
}
