#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "ltesim/channel.hpp"
#include "ltesim/config.hpp"
#include "ltesim/rng.hpp"

using namespace ltesim;

namespace {

std::string key_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  auto cfg = parse_config_text("[scenario]\ntransport = single_flow\n");
  CHECK(cfg.transport == TransportKind::SingleFlow);
  CHECK(cfg.duration_slots == 300000);
  CHECK(cfg.seed == 1);
  CHECK(cfg.extra_ues == 0);
  CHECK_FALSE(cfg.relay);
  CHECK(cfg.wired_capacity_bps == 1'000'000'000);
  CHECK(cfg.d2d_capacity_bps == 300'000'000);
  CHECK(cfg.wired_delay_slots == 1);
  CHECK(cfg.inter_policy == Policy::Pfs);
  CHECK(cfg.intra_policy == Policy::Pfs);
  CHECK(cfg.t_c == 1000);
  CHECK(cfg.bundle);
  CHECK(cfg.demux_mode == DemuxMode::CopyAll);
  CHECK(cfg.demux_capacity_blocks == 250);
  CHECK(cfg.mux_hold_slots == 100);
  CHECK(cfg.target_channel.model == ChannelSpec::Model::Markov);
  CHECK(cfg.target_channel.p == 0.5);
  CHECK(cfg.target_channel.q == 0.5);
}

TEST_CASE("multipath transports default the relay on") {
  for (const char* t : {"demuxed_tcp", "two_tcp", "mptcp"}) {
    auto cfg = parse_config_text(std::string("[scenario]\ntransport = ") + t + "\n");
    CHECK(cfg.relay);
  }
  // ...and refuse to run without one.
  CHECK(key_of([] {
          parse_config_text("[scenario]\ntransport = mptcp\nrelay = false\n");
        }) == "scenario.relay");
}

TEST_CASE("markov probability out of range names the offending key") {
  std::string text =
      "[scenario]\ntransport = single_flow\n[channel.target]\nmodel = markov\np = 1.5\n";
  CHECK(key_of([&] { parse_config_text(text); }) == "channel.target.p");
  std::string text_q =
      "[scenario]\ntransport = single_flow\n[channel.target]\nq = -0.1\n";
  CHECK(key_of([&] { parse_config_text(text_q); }) == "channel.target.q");
}

TEST_CASE("near-miss enum values get a suggestion") {
  std::string text = "[scenario]\ntransport = single_flow\n[scheduler]\nintra_policy = maxci\n";
  try {
    parse_config_text(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("did you mean 'max_ci'") != std::string::npos);
    CHECK(e.key() == "scheduler.intra_policy");
  }
  try {
    parse_config_text("[scenario]\ntransport = Demuxed-TCP\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("did you mean 'demuxed_tcp'") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK(key_of([] {
          parse_config_text("[scenario]\ntransport = single_flow\nspeed = 9\n");
        }) == "scenario.speed");
  CHECK(key_of([] {
          parse_config_text("[scenario]\ntransport = single_flow\n[sched]\nt_c = 5\n");
        }) == "sched.t_c");
}

TEST_CASE("malformed values name the key") {
  CHECK(key_of([] {
          parse_config_text("[scenario]\nduration_slots = soon\n");
        }) == "scenario.duration_slots");
  CHECK(key_of([] {
          parse_config_text("[scheduler]\nbundle = maybe\n[scenario]\ntransport = single_flow\n");
        }) == "scheduler.bundle");
  CHECK(key_of([] { parse_config_text("transport = single_flow\n"); }) == "transport");
  CHECK(key_of([] {
          parse_config_text("[scenario]\nseed = 1\nseed = 2\n");
        }) == "scenario.seed");
}

TEST_CASE("weighted split needs exactly two positive weights") {
  std::string base =
      "[scenario]\ntransport = demuxed_tcp\n[demux]\nmode = weighted_split\n";
  CHECK(key_of([&] { parse_config_text(base); }) == "demux.weights");
  CHECK(key_of([&] {
          parse_config_text(base + "weights = 2, 0\n");
        }) == "demux.weights");
  auto cfg = parse_config_text(base + "weights = 2, 1\n");
  CHECK(cfg.demux_weights == std::vector<double>{2.0, 1.0});
}

TEST_CASE("trace channels are checked for existence and fluctuation") {
  CHECK(key_of([] {
          parse_config_text(
              "[scenario]\ntransport = single_flow\n"
              "[channel.target]\nmodel = trace\npath = /nonexistent/t.csv\n");
        }) == "channel.target.path");

  // A flat trace exists but fails the fluctuation filter.
  std::string flat = "/tmp/ltesim_flat_trace.csv";
  {
    std::ofstream f(flat);
    for (int i = 0; i < 100; ++i) f << i << ".000,10.000\n";
  }
  CHECK(key_of([&] {
          parse_config_text(
              "[scenario]\ntransport = single_flow\n"
              "[channel.target]\nmodel = trace\npath = " + flat + "\n");
        }) == "channel.target.path");

  // A generated trace passes end to end.
  std::string good = "/tmp/ltesim_good_trace.csv";
  write_trace_file(good, generate_trace(Rng(123)));
  auto cfg = parse_config_text(
      "[scenario]\ntransport = single_flow\n"
      "[channel.target]\nmodel = trace\npath = " + good + "\nshift_epochs = 3\n");
  CHECK(cfg.target_channel.model == ChannelSpec::Model::Trace);
  CHECK(cfg.target_channel.shift_epochs == 3);
  std::remove(flat.c_str());
  std::remove(good.c_str());
}

TEST_CASE("fixed channel bounds") {
  CHECK(key_of([] {
          parse_config_text(
              "[scenario]\ntransport = single_flow\n[channel.target]\nmodel = fixed\ncqi = 16\n");
        }) == "channel.target.cqi");
  auto cfg = parse_config_text(
      "[scenario]\ntransport = single_flow\n[channel.target]\nmodel = fixed\ncqi = 15\n");
  CHECK(cfg.target_channel.fixed_cqi == 15);
}

TEST_CASE("extra ue channels are read from numbered sections") {
  auto cfg = parse_config_text(
      "[scenario]\ntransport = single_flow\nextra_ues = 2\n"
      "[channel.extra2]\nmodel = markov\np = 0.9\nq = 0.1\n");
  REQUIRE(cfg.extra_channels.size() == 2);
  CHECK(cfg.extra_channels[0].p == 0.5);  // default
  CHECK(cfg.extra_channels[1].p == 0.9);
  CHECK(cfg.extra_channels[1].q == 0.1);
}
