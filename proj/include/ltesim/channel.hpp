#pragma once
// Per-device LTE channel processes: two-state Markov model, trace-driven
// playback with hold semantics, and a fixed-CQI channel for calibration runs.
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltesim/rates.hpp"
#include "ltesim/rng.hpp"

namespace ltesim {

constexpr int kSlotsPerSecond = 1000;  // 1 slot = 1 ms

struct MarkovChannelParams {
  double p = 0.5;  // Bad -> Good per-slot transition probability
  double q = 0.5;  // Good -> Bad per-slot transition probability
};

enum class LinkState { Bad, Good };

// The Markov model collapses the top half of the rate ladder (CQI 8..15)
// into the Good state and the bottom half (CQI 1..7) into Bad. The rate is
// re-drawn uniformly within the state's half every slot.
class MarkovChannel {
 public:
  MarkovChannel(MarkovChannelParams params, const RateTable& table, Rng rng);

  int64_t step();  // advance one slot, return the slot's rate in bits

  LinkState state() const { return state_; }
  int64_t current_rate() const { return rate_; }
  const MarkovChannelParams& params() const { return params_; }

 private:
  int64_t draw_rate();

  MarkovChannelParams params_;
  const RateTable* table_;
  Rng rng_;
  LinkState state_;
  int64_t rate_ = 0;
};

struct TraceSample {
  double timestamp_s = 0;
  double sir_db = 0;
};

// Trace playback: the channel holds each sample's rate until the next
// timestamp; shift_epochs offsets the sample index cyclically so two devices
// can replay the same trace with decorrelated phases.
class TraceChannel {
 public:
  TraceChannel(std::vector<TraceSample> samples, int shift_epochs,
               const RateTable& table);

  int64_t rate_at(int64_t slot) const;
  size_t sample_count() const { return samples_.size(); }

  // Standard deviation of the mapped CQI sequence; traces below 2 CQI steps
  // carry no exploitable fluctuation and are rejected at config load.
  double cqi_stddev() const;

 private:
  std::vector<TraceSample> samples_;
  int shift_epochs_;
  const RateTable* table_;
};

// Trace file format: one `timestamp_s,sir_db` record per line, no header.
std::vector<TraceSample> load_trace_file(const std::string& path);
std::vector<TraceSample> parse_trace(const std::string& text, const std::string& origin);
void write_trace_file(const std::string& path, const std::vector<TraceSample>& samples);

// Synthetic stand-in traces: random-walk SIR sampled at 1 s epochs. Retries
// the walk until the fluctuation filter (cqi_stddev >= 2) admits it.
std::vector<TraceSample> generate_trace(Rng rng, int epochs = 300);

// One device's rate source, advanced exactly once per slot regardless of
// scheduling decisions so paired runs see identical realizations.
class ChannelProcess {
 public:
  static ChannelProcess fixed(int cqi, const RateTable& table);
  static ChannelProcess markov(MarkovChannelParams params, const RateTable& table, Rng rng);
  static ChannelProcess trace(TraceChannel trace);

  // Advance to `slot` (called with consecutive slot indices) and return the
  // rate for that slot.
  int64_t advance(int64_t slot);

  int64_t current_rate() const { return rate_; }
  bool is_markov() const { return kind_ == Kind::Markov; }
  LinkState markov_state() const { return markov_->state(); }

 private:
  enum class Kind { Fixed, Markov, Trace };
  ChannelProcess() = default;

  Kind kind_ = Kind::Fixed;
  int64_t rate_ = 0;
  std::optional<MarkovChannel> markov_;
  std::optional<TraceChannel> trace_;
};

}  // namespace ltesim
