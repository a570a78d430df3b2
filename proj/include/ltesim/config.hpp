#pragma once
// Declarative scenario description and its file format: flat sections with
// key = value lines, e.g.
//
//   [scenario]
//   transport = demuxed_tcp
//   duration_slots = 300000
//   seed = 42
//
//   [scheduler]
//   inter_policy = pfs
//   intra_policy = max_ci
//
//   [channel.target]
//   model = markov
//   p = 0.5
//   q = 0.5
//
// Every validation failure names the offending key.
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltesim/netfn.hpp"
#include "ltesim/scheduler.hpp"

namespace ltesim {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class TransportKind { SingleFlow, DemuxedTcp, TwoTcp, MpTcp, Backlogged };

const char* transport_name(TransportKind k);

struct ChannelSpec {
  enum class Model { Markov, Trace, Fixed };
  Model model = Model::Markov;
  double p = 0.5, q = 0.5;       // markov
  std::string trace_path;        // trace
  int shift_epochs = 0;          // trace
  int fixed_cqi = 15;            // fixed
};

struct ScenarioConfig {
  TransportKind transport = TransportKind::SingleFlow;
  int64_t duration_slots = 300000;  // 5 simulated minutes
  uint64_t seed = 1;
  int extra_ues = 0;
  bool relay = false;  // defaults true for multipath transports

  int64_t wired_capacity_bps = 1'000'000'000;
  int64_t d2d_capacity_bps = 300'000'000;
  int wired_delay_slots = 1;

  Policy inter_policy = Policy::Pfs;
  Policy intra_policy = Policy::Pfs;
  int t_c = 1000;
  bool bundle = true;  // bundle the target's two flows into one cluster

  DemuxMode demux_mode = DemuxMode::CopyAll;
  int demux_capacity_blocks = 250;
  std::vector<double> demux_weights;

  int64_t mux_hold_slots = 100;

  ChannelSpec target_channel;
  ChannelSpec relay_channel;
  std::vector<ChannelSpec> extra_channels;  // extra_ues entries, defaults filled
};

// Parse + validate. On error throws ConfigError naming the key.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

// Cross-field validation (also called by the parsers). check_traces controls
// whether referenced trace files are opened and run through the fluctuation
// admission filter.
void validate_config(const ScenarioConfig& cfg, bool check_traces = true);

}  // namespace ltesim
