#include "ltesim/transport.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltesim {

void on_ack(TcpFlowState& flow, int64_t acked) {
  if (acked < 1) throw std::invalid_argument("ack must cover at least one packet");
  if (flow.phase == TcpPhase::SlowStart) {
    flow.cwnd += static_cast<double>(acked);
    if (flow.cwnd >= flow.ssthresh) flow.phase = TcpPhase::CongestionAvoidance;
  } else {
    flow.cwnd += static_cast<double>(acked) / flow.cwnd;
  }
}

void on_loss(TcpFlowState& flow) {
  flow.ssthresh = std::max(flow.cwnd / 2.0, 2.0);
  flow.cwnd = flow.ssthresh;
  flow.phase = TcpPhase::CongestionAvoidance;
}

void srtt_update(TcpFlowState& flow, double sample_slots) {
  if (flow.srtt <= 0)
    flow.srtt = sample_slots;
  else
    flow.srtt = flow.srtt * (7.0 / 8.0) + sample_slots / 8.0;
}

double lia_alpha(const MultipathState& state) {
  double cwnd_total = 0, best = 0, denom = 0;
  for (const auto& f : state.subflows) {
    double rtt = f.srtt > 0 ? f.srtt : 1.0;
    cwnd_total += f.cwnd;
    best = std::max(best, f.cwnd / (rtt * rtt));
    denom += f.cwnd / rtt;
  }
  if (denom <= 0) return 1.0;
  return cwnd_total * best / (denom * denom);
}

void mptcp_increase(MultipathState& state, size_t subflow_index, int64_t acked) {
  if (subflow_index >= state.subflows.size())
    throw std::out_of_range("bad subflow index");
  TcpFlowState& f = state.subflows[subflow_index];
  if (state.coupling == Coupling::None || state.subflows.size() == 1) {
    on_ack(f, acked);
    return;
  }
  if (f.phase == TcpPhase::SlowStart) {
    on_ack(f, acked);
    return;
  }
  double cwnd_total = 0;
  for (const auto& s : state.subflows) cwnd_total += s.cwnd;
  double a = lia_alpha(state);
  double inc = std::min(a * static_cast<double>(acked) / cwnd_total,
                        static_cast<double>(acked) / f.cwnd);
  f.cwnd += inc;
}

}  // namespace ltesim
