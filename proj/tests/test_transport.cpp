#include <doctest.h>

#include <cmath>

#include "ltesim/transport.hpp"

using namespace ltesim;

TEST_CASE("slow start grows by one packet per acked packet") {
  TcpFlowState f;
  CHECK(f.cwnd == 2.0);
  on_ack(f, 2);
  CHECK(f.cwnd == doctest::Approx(4.0));
  on_ack(f, 4);
  CHECK(f.cwnd == doctest::Approx(8.0));
  CHECK(f.phase == TcpPhase::SlowStart);
}

TEST_CASE("slow start hands over to congestion avoidance at ssthresh") {
  TcpFlowState f;
  f.ssthresh = 6.0;
  on_ack(f, 4);
  CHECK(f.cwnd >= 6.0);
  CHECK(f.phase == TcpPhase::CongestionAvoidance);
}

TEST_CASE("congestion avoidance adds acked/cwnd") {
  TcpFlowState f;
  f.phase = TcpPhase::CongestionAvoidance;
  f.cwnd = 10.0;
  on_ack(f, 1);
  CHECK(f.cwnd == doctest::Approx(10.1));
  // One full window of ACKs adds about one packet.
  TcpFlowState g;
  g.phase = TcpPhase::CongestionAvoidance;
  g.cwnd = 10.0;
  for (int i = 0; i < 10; ++i) on_ack(g, 1);
  CHECK(g.cwnd == doctest::Approx(11.0).epsilon(0.01));
}

TEST_CASE("loss halves the window with a floor of 2") {
  TcpFlowState f;
  f.cwnd = 10.0;
  on_loss(f);
  CHECK(f.ssthresh == doctest::Approx(5.0));
  CHECK(f.cwnd == doctest::Approx(5.0));
  CHECK(f.phase == TcpPhase::CongestionAvoidance);
  TcpFlowState g;
  g.cwnd = 3.0;
  on_loss(g);
  CHECK(g.cwnd == doctest::Approx(2.0));
  CHECK(g.ssthresh == doctest::Approx(2.0));
}

TEST_CASE("srtt smoothing uses weight 1/8 after the first sample") {
  TcpFlowState f;
  srtt_update(f, 40.0);
  CHECK(f.srtt == doctest::Approx(40.0));
  srtt_update(f, 80.0);
  CHECK(f.srtt == doctest::Approx(0.875 * 40.0 + 0.125 * 80.0));
}

TEST_CASE("lia alpha matches the closed form") {
  MultipathState m;
  m.coupling = Coupling::Lia;
  m.subflows.resize(2);
  m.subflows[0].cwnd = 10.0;
  m.subflows[0].srtt = 40.0;
  m.subflows[1].cwnd = 20.0;
  m.subflows[1].srtt = 80.0;
  // Hand evaluation:
  //   cwnd_total = 30
  //   max_r cwnd_r/srtt_r^2 = max(10/1600, 20/6400) = 0.00625
  //   (sum cwnd_r/srtt_r)^2 = (10/40 + 20/80)^2 = 0.25
  //   alpha = 30 * 0.00625 / 0.25 = 0.75
  CHECK(lia_alpha(m) == doctest::Approx(0.75));
}

TEST_CASE("lia alpha is 1 for symmetric subflows") {
  MultipathState m;
  m.coupling = Coupling::Lia;
  m.subflows.resize(2);
  for (auto& f : m.subflows) {
    f.cwnd = 12.0;
    f.srtt = 50.0;
  }
  // Symmetric paths: alpha = 2w * (w/s^2) / (2w/s)^2 = 1/2... evaluate:
  //   24 * (12/2500) / (24/50)^2 = 0.1152 / 0.2304 = 0.5
  CHECK(lia_alpha(m) == doctest::Approx(0.5));
}

TEST_CASE("coupled increase is capped by the uncoupled increase") {
  MultipathState m;
  m.coupling = Coupling::Lia;
  m.subflows.resize(2);
  for (auto& f : m.subflows) {
    f.phase = TcpPhase::CongestionAvoidance;
    f.cwnd = 10.0;
    f.srtt = 50.0;
  }
  // alpha = 0.5, cwnd_total = 20: coupled term 0.5*1/20 = 0.025,
  // uncoupled cap 1/10 = 0.1 -> grows by 0.025.
  mptcp_increase(m, 0, 1);
  CHECK(m.subflows[0].cwnd == doctest::Approx(10.025));
  CHECK(m.subflows[1].cwnd == doctest::Approx(10.0));
}

TEST_CASE("two symmetric coupled subflows together grow about like one flow") {
  MultipathState m;
  m.coupling = Coupling::Lia;
  m.subflows.resize(2);
  for (auto& f : m.subflows) {
    f.phase = TcpPhase::CongestionAvoidance;
    f.cwnd = 10.0;
    f.srtt = 50.0;
  }
  double before = m.subflows[0].cwnd + m.subflows[1].cwnd;
  // One aggregate window of ACKs (20) spread across both subflows.
  for (int i = 0; i < 10; ++i) {
    mptcp_increase(m, 0, 1);
    mptcp_increase(m, 1, 1);
  }
  double after = m.subflows[0].cwnd + m.subflows[1].cwnd;
  // Per ACK the pair gains alpha/cwnd_total = 0.5/20, so ~0.5 in total over
  // the window: half of what two uncoupled flows would add (~2).
  CHECK(after - before == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("coupled slow start stays classic") {
  MultipathState m;
  m.coupling = Coupling::Lia;
  m.subflows.resize(2);
  m.subflows[1].phase = TcpPhase::CongestionAvoidance;
  m.subflows[1].srtt = 50.0;
  m.subflows[0].srtt = 50.0;
  double before = m.subflows[0].cwnd;
  mptcp_increase(m, 0, 2);
  CHECK(m.subflows[0].cwnd == doctest::Approx(before + 2.0));
}

TEST_CASE("uncoupled multipath increase is plain per-subflow reno") {
  MultipathState m;
  m.coupling = Coupling::None;
  m.subflows.resize(2);
  for (auto& f : m.subflows) {
    f.phase = TcpPhase::CongestionAvoidance;
    f.cwnd = 10.0;
    f.srtt = 50.0;
  }
  mptcp_increase(m, 0, 1);
  CHECK(m.subflows[0].cwnd == doctest::Approx(10.1));
}
