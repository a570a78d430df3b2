#pragma once
// Reno-style AIMD window model and LIA-coupled multipath increase. The
// simulator's stand-in for the kernel TCP stacks the experiments exercise;
// relative behavior across scheduling policies is what matters here.
#include <cstdint>
#include <vector>

namespace ltesim {

enum class TcpPhase { SlowStart, CongestionAvoidance };

struct TcpFlowState {
  double cwnd = 2.0;          // packets, fractional growth allowed
  double ssthresh = 1e9;      // packets
  TcpPhase phase = TcpPhase::SlowStart;
  double srtt = 0;            // slots, 0 until first sample
  int64_t inflight = 0;       // packets emitted but not yet acked
  int64_t next_seq = 0;
  int64_t highest_acked = -1;
};

// New-data ACK for `acked` packets. Slow start doubles per RTT; congestion
// avoidance adds ~1 packet per cwnd of ACKs.
void on_ack(TcpFlowState& flow, int64_t acked);

// One congestion event: window halves (floor 2), leave slow start.
void on_loss(TcpFlowState& flow);

// RTT sample with the usual 1/8 smoothing weight.
void srtt_update(TcpFlowState& flow, double sample_slots);

enum class Coupling { None, Lia };

struct MultipathState {
  std::vector<TcpFlowState> subflows;
  Coupling coupling = Coupling::None;
};

// LIA alpha: aggregate aggressiveness factor so the coupled subflows grow
// about as fast as one regular flow on the best path.
//   alpha = cwnd_total * max_r(cwnd_r / srtt_r^2) / (sum_r cwnd_r / srtt_r)^2
double lia_alpha(const MultipathState& state);

// Coupled per-ACK increase on one subflow:
//   min(alpha * acked / cwnd_total, acked / cwnd_r)
// Slow start on a subflow stays classic (coupling applies in CA).
void mptcp_increase(MultipathState& state, size_t subflow_index, int64_t acked);

}  // namespace ltesim
