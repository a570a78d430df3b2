#include "ltesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ltesim/channel.hpp"

namespace ltesim {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flattened key -> value map ("section.key").
std::map<std::string, std::string> read_keys(const std::string& text,
                                             const std::string& origin) {
  std::map<std::string, std::string> keys;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("", origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (section.empty())
      throw ConfigError(key, "key appears before any [section] header");
    std::string full = section + "." + key;
    if (keys.count(full)) throw ConfigError(full, "duplicate key");
    keys[full] = value;
  }
  return keys;
}

class KeyReader {
 public:
  explicit KeyReader(std::map<std::string, std::string> keys) : keys_(std::move(keys)) {}

  bool has(const std::string& k) const { return keys_.count(k) > 0; }

  std::string str(const std::string& k, const std::string& fallback) {
    auto it = keys_.find(k);
    if (it == keys_.end()) return fallback;
    used_.insert(k);
    return it->second;
  }

  int64_t integer(const std::string& k, int64_t fallback) {
    auto it = keys_.find(k);
    if (it == keys_.end()) return fallback;
    used_.insert(k);
    try {
      size_t pos = 0;
      int64_t v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError(k, "expected an integer, got '" + it->second + "'");
    }
  }

  double real(const std::string& k, double fallback) {
    auto it = keys_.find(k);
    if (it == keys_.end()) return fallback;
    used_.insert(k);
    try {
      size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError(k, "expected a number, got '" + it->second + "'");
    }
  }

  bool boolean(const std::string& k, bool fallback) {
    auto it = keys_.find(k);
    if (it == keys_.end()) return fallback;
    used_.insert(k);
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError(k, "expected true or false, got '" + it->second + "'");
  }

  void reject_unused() const {
    for (const auto& [k, v] : keys_)
      if (!used_.count(k)) throw ConfigError(k, "unknown key");
  }

  std::vector<std::string> sections_matching(const std::string& prefix) const {
    std::set<std::string> out;
    for (const auto& [k, v] : keys_) {
      if (k.rfind(prefix, 0) == 0) {
        size_t dot = k.find('.', prefix.size());
        if (dot != std::string::npos) out.insert(k.substr(0, dot));
      }
    }
    return {out.begin(), out.end()};
  }

 private:
  std::map<std::string, std::string> keys_;
  std::set<std::string> used_;
};

std::string strip_separators(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](char c) { return c == '_' || c == '-' || c == ' '; }),
          s.end());
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// "maxci" should point the user at "max_ci".
[[noreturn]] void unknown_enum(const std::string& key, const std::string& value,
                               const std::vector<std::string>& known) {
  std::string hint;
  for (const auto& k : known)
    if (strip_separators(k) == strip_separators(value)) hint = k;
  std::string msg = "unknown value '" + value + "'";
  if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
  else {
    msg += " (valid:";
    for (const auto& k : known) msg += " " + k;
    msg += ")";
  }
  throw ConfigError(key, msg);
}

Policy read_policy(KeyReader& r, const std::string& key, Policy fallback) {
  std::string s = r.str(key, policy_name(fallback));
  auto p = policy_from_name(s);
  if (!p) unknown_enum(key, s, {"pfs", "max_ci", "round_robin"});
  return *p;
}

ChannelSpec read_channel(KeyReader& r, const std::string& section) {
  ChannelSpec spec;
  std::string model = r.str(section + ".model", "markov");
  if (model == "markov") {
    spec.model = ChannelSpec::Model::Markov;
    spec.p = r.real(section + ".p", 0.5);
    spec.q = r.real(section + ".q", 0.5);
  } else if (model == "trace") {
    spec.model = ChannelSpec::Model::Trace;
    spec.trace_path = r.str(section + ".path", "");
    spec.shift_epochs = static_cast<int>(r.integer(section + ".shift_epochs", 0));
    if (spec.trace_path.empty()) throw ConfigError(section + ".path", "trace channel needs a path");
  } else if (model == "fixed") {
    spec.model = ChannelSpec::Model::Fixed;
    spec.fixed_cqi = static_cast<int>(r.integer(section + ".cqi", 15));
  } else {
    unknown_enum(section + ".model", model, {"markov", "trace", "fixed"});
  }
  return spec;
}

void check_channel(const ChannelSpec& spec, const std::string& section, bool check_traces) {
  switch (spec.model) {
    case ChannelSpec::Model::Markov:
      if (spec.p < 0 || spec.p > 1) throw ConfigError(section + ".p", "must be in [0,1]");
      if (spec.q < 0 || spec.q > 1) throw ConfigError(section + ".q", "must be in [0,1]");
      break;
    case ChannelSpec::Model::Fixed:
      if (spec.fixed_cqi < kCqiMin || spec.fixed_cqi > kCqiMax)
        throw ConfigError(section + ".cqi", "must be in 1..15");
      break;
    case ChannelSpec::Model::Trace: {
      if (!check_traces) break;
      std::vector<TraceSample> samples;
      try {
        samples = load_trace_file(spec.trace_path);
      } catch (const std::exception& e) {
        throw ConfigError(section + ".path", e.what());
      }
      TraceChannel tc(std::move(samples), spec.shift_epochs, RateTable::standard());
      if (tc.cqi_stddev() < 2.0)
        throw ConfigError(section + ".path",
                          "trace rejected: mapped-CQI stddev below 2 (no significant fluctuation)");
      break;
    }
  }
}

}  // namespace

const char* transport_name(TransportKind k) {
  switch (k) {
    case TransportKind::SingleFlow: return "single_flow";
    case TransportKind::DemuxedTcp: return "demuxed_tcp";
    case TransportKind::TwoTcp: return "two_tcp";
    case TransportKind::MpTcp: return "mptcp";
    case TransportKind::Backlogged: return "backlogged";
  }
  return "?";
}

ScenarioConfig parse_config_text(const std::string& text) {
  KeyReader r(read_keys(text, "<config>"));
  ScenarioConfig cfg;

  std::string transport = r.str("scenario.transport", "single_flow");
  if (transport == "single_flow") cfg.transport = TransportKind::SingleFlow;
  else if (transport == "demuxed_tcp") cfg.transport = TransportKind::DemuxedTcp;
  else if (transport == "two_tcp") cfg.transport = TransportKind::TwoTcp;
  else if (transport == "mptcp") cfg.transport = TransportKind::MpTcp;
  else if (transport == "backlogged") cfg.transport = TransportKind::Backlogged;
  else
    unknown_enum("scenario.transport", transport,
                 {"single_flow", "demuxed_tcp", "two_tcp", "mptcp", "backlogged"});

  cfg.duration_slots = r.integer("scenario.duration_slots", cfg.duration_slots);
  cfg.seed = static_cast<uint64_t>(r.integer("scenario.seed", 1));
  cfg.extra_ues = static_cast<int>(r.integer("scenario.extra_ues", 0));
  bool relay_default = cfg.transport == TransportKind::DemuxedTcp ||
                       cfg.transport == TransportKind::TwoTcp ||
                       cfg.transport == TransportKind::MpTcp;
  cfg.relay = r.boolean("scenario.relay", relay_default);

  cfg.wired_capacity_bps = r.integer("topology.wired_capacity_bps", cfg.wired_capacity_bps);
  cfg.d2d_capacity_bps = r.integer("topology.d2d_capacity_bps", cfg.d2d_capacity_bps);
  cfg.wired_delay_slots = static_cast<int>(r.integer("topology.wired_delay_slots", 1));

  cfg.inter_policy = read_policy(r, "scheduler.inter_policy", Policy::Pfs);
  cfg.intra_policy = read_policy(r, "scheduler.intra_policy", Policy::Pfs);
  cfg.t_c = static_cast<int>(r.integer("scheduler.t_c", 1000));
  cfg.bundle = r.boolean("scheduler.bundle", true);

  std::string mode = r.str("demux.mode", "copy_all");
  if (mode == "copy_all") cfg.demux_mode = DemuxMode::CopyAll;
  else if (mode == "round_robin_split") cfg.demux_mode = DemuxMode::RoundRobinSplit;
  else if (mode == "weighted_split") cfg.demux_mode = DemuxMode::WeightedSplit;
  else unknown_enum("demux.mode", mode, {"copy_all", "round_robin_split", "weighted_split"});
  cfg.demux_capacity_blocks = static_cast<int>(r.integer("demux.capacity_blocks", 250));
  std::string weights = r.str("demux.weights", "");
  if (!weights.empty()) {
    std::istringstream ws(weights);
    std::string tok;
    while (std::getline(ws, tok, ',')) {
      try {
        cfg.demux_weights.push_back(std::stod(trim(tok)));
      } catch (...) {
        throw ConfigError("demux.weights", "expected comma-separated numbers");
      }
    }
  }

  cfg.mux_hold_slots = r.integer("mux.hold_slots", 100);

  if (r.has("channel.target.model") || r.has("channel.target.p") ||
      r.has("channel.target.q") || r.has("channel.target.path") ||
      r.has("channel.target.cqi") || r.has("channel.target.shift_epochs"))
    cfg.target_channel = read_channel(r, "channel.target");
  if (r.has("channel.relay.model") || r.has("channel.relay.p") ||
      r.has("channel.relay.q") || r.has("channel.relay.path") ||
      r.has("channel.relay.cqi") || r.has("channel.relay.shift_epochs"))
    cfg.relay_channel = read_channel(r, "channel.relay");
  cfg.extra_channels.resize(static_cast<size_t>(std::max(cfg.extra_ues, 0)));
  for (int i = 0; i < cfg.extra_ues; ++i) {
    std::string section = "channel.extra" + std::to_string(i + 1);
    if (r.has(section + ".model") || r.has(section + ".p") || r.has(section + ".q") ||
        r.has(section + ".path") || r.has(section + ".cqi") || r.has(section + ".shift_epochs"))
      cfg.extra_channels[static_cast<size_t>(i)] = read_channel(r, section);
  }

  r.reject_unused();
  validate_config(cfg);
  return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void validate_config(const ScenarioConfig& cfg, bool check_traces) {
  if (cfg.duration_slots < 0)
    throw ConfigError("scenario.duration_slots", "must be >= 0");
  if (cfg.extra_ues < 0) throw ConfigError("scenario.extra_ues", "must be >= 0");
  bool needs_relay = cfg.transport == TransportKind::DemuxedTcp ||
                     cfg.transport == TransportKind::TwoTcp ||
                     cfg.transport == TransportKind::MpTcp;
  if (needs_relay && !cfg.relay)
    throw ConfigError("scenario.relay",
                      std::string(transport_name(cfg.transport)) + " requires a relay");
  if (cfg.wired_capacity_bps < 1)
    throw ConfigError("topology.wired_capacity_bps", "must be positive");
  if (cfg.d2d_capacity_bps < 1)
    throw ConfigError("topology.d2d_capacity_bps", "must be positive");
  if (cfg.wired_delay_slots < 0)
    throw ConfigError("topology.wired_delay_slots", "must be >= 0");
  if (cfg.t_c < 1) throw ConfigError("scheduler.t_c", "must be >= 1 slot");
  if (cfg.demux_capacity_blocks < 1)
    throw ConfigError("demux.capacity_blocks", "must be >= 1");
  if (cfg.demux_mode == DemuxMode::WeightedSplit && cfg.relay &&
      cfg.demux_weights.size() != 2)
    throw ConfigError("demux.weights", "weighted_split over two hops needs two weights");
  for (double w : cfg.demux_weights)
    if (w <= 0) throw ConfigError("demux.weights", "weights must be positive");
  if (cfg.mux_hold_slots < 0) throw ConfigError("mux.hold_slots", "must be >= 0");

  check_channel(cfg.target_channel, "channel.target", check_traces);
  if (cfg.relay) check_channel(cfg.relay_channel, "channel.relay", check_traces);
  for (size_t i = 0; i < cfg.extra_channels.size(); ++i)
    check_channel(cfg.extra_channels[i], "channel.extra" + std::to_string(i + 1), check_traces);
}

}  // namespace ltesim
