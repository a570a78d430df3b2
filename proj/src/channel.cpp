#include "ltesim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ltesim {

MarkovChannel::MarkovChannel(MarkovChannelParams params, const RateTable& table, Rng rng)
    : params_(params), table_(&table), rng_(rng) {
  if (params.p < 0 || params.p > 1 || params.q < 0 || params.q > 1)
    throw std::invalid_argument("markov transition probabilities must be in [0,1]");
  // Start from the stationary distribution so short runs are unbiased.
  double sum = params.p + params.q;
  double good_prob = sum > 0 ? params.p / sum : 0.5;
  state_ = rng_.bernoulli(good_prob) ? LinkState::Good : LinkState::Bad;
  rate_ = draw_rate();
}

int64_t MarkovChannel::draw_rate() {
  if (state_ == LinkState::Good) {
    int cqi = 8 + static_cast<int>(rng_.uniform_below(8));  // CQI 8..15
    return table_->rate_from_cqi(cqi);
  }
  int cqi = 1 + static_cast<int>(rng_.uniform_below(7));  // CQI 1..7
  return table_->rate_from_cqi(cqi);
}

int64_t MarkovChannel::step() {
  if (state_ == LinkState::Bad) {
    if (rng_.bernoulli(params_.p)) state_ = LinkState::Good;
  } else {
    if (rng_.bernoulli(params_.q)) state_ = LinkState::Bad;
  }
  rate_ = draw_rate();  // re-drawn every slot even without a state flip
  return rate_;
}

TraceChannel::TraceChannel(std::vector<TraceSample> samples, int shift_epochs,
                           const RateTable& table)
    : samples_(std::move(samples)), shift_epochs_(shift_epochs), table_(&table) {
  if (samples_.empty())
    throw std::invalid_argument("trace must contain at least one sample");
  for (size_t i = 1; i < samples_.size(); ++i)
    if (samples_[i].timestamp_s <= samples_[i - 1].timestamp_s)
      throw std::invalid_argument("trace timestamps must be strictly increasing");
}

int64_t TraceChannel::rate_at(int64_t slot) const {
  double t = static_cast<double>(slot) / kSlotsPerSecond;
  // Latest sample with timestamp <= t (hold semantics); before the first
  // sample the first one applies.
  size_t idx = 0;
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const TraceSample& s) { return v < s.timestamp_s; });
  if (it != samples_.begin()) idx = static_cast<size_t>(it - samples_.begin()) - 1;
  size_t n = samples_.size();
  size_t shifted = (idx + static_cast<size_t>(shift_epochs_ % static_cast<int>(n)) + n) % n;
  return table_->rate_from_cqi(cqi_from_sir(samples_[shifted].sir_db));
}

double TraceChannel::cqi_stddev() const {
  double mean = 0;
  for (const auto& s : samples_) mean += cqi_from_sir(s.sir_db);
  mean /= static_cast<double>(samples_.size());
  double var = 0;
  for (const auto& s : samples_) {
    double d = cqi_from_sir(s.sir_db) - mean;
    var += d * d;
  }
  var /= static_cast<double>(samples_.size());
  return std::sqrt(var);
}

std::vector<TraceSample> parse_trace(const std::string& text, const std::string& origin) {
  std::vector<TraceSample> samples;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TraceSample s;
    char extra;
    if (std::sscanf(line.c_str(), "%lf,%lf %c", &s.timestamp_s, &s.sir_db, &extra) != 2)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": malformed trace record (want timestamp_s,sir_db)");
    samples.push_back(s);
  }
  if (samples.empty()) throw std::runtime_error(origin + ": empty trace");
  return samples;
}

std::vector<TraceSample> load_trace_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open trace file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_trace(ss.str(), path);
}

void write_trace_file(const std::string& path, const std::vector<TraceSample>& samples) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write trace file: " + path);
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f\n", s.timestamp_s, s.sir_db);
    f << buf;
  }
}

std::vector<TraceSample> generate_trace(Rng rng, int epochs) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<TraceSample> samples;
    samples.reserve(static_cast<size_t>(epochs));
    double sir = -2.0 + 20.0 * rng.uniform();  // start somewhere mid-ladder
    for (int e = 0; e < epochs; ++e) {
      samples.push_back({static_cast<double>(e), sir});
      sir += 6.0 * (rng.uniform() - 0.5) * 2.0;  // +-6 dB per epoch
      sir = std::clamp(sir, -12.0, 28.0);
    }
    if (TraceChannel(samples, 0, RateTable::standard()).cqi_stddev() >= 2.0)
      return samples;
  }
  throw std::runtime_error("trace generator failed to produce a fluctuating trace");
}

ChannelProcess ChannelProcess::fixed(int cqi, const RateTable& table) {
  ChannelProcess c;
  c.kind_ = Kind::Fixed;
  c.rate_ = table.rate_from_cqi(cqi);
  return c;
}

ChannelProcess ChannelProcess::markov(MarkovChannelParams params, const RateTable& table, Rng rng) {
  ChannelProcess c;
  c.kind_ = Kind::Markov;
  c.markov_.emplace(params, table, rng);
  c.rate_ = c.markov_->current_rate();
  return c;
}

ChannelProcess ChannelProcess::trace(TraceChannel trace) {
  ChannelProcess c;
  c.kind_ = Kind::Trace;
  c.trace_.emplace(std::move(trace));
  c.rate_ = c.trace_->rate_at(0);
  return c;
}

int64_t ChannelProcess::advance(int64_t slot) {
  switch (kind_) {
    case Kind::Fixed:
      break;
    case Kind::Markov:
      rate_ = markov_->step();
      break;
    case Kind::Trace:
      rate_ = trace_->rate_at(slot);
      break;
  }
  return rate_;
}

}  // namespace ltesim
