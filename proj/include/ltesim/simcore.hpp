#pragma once
// The slotted event loop and topology:
//   server -> backhaul switch -> eNB (demux + scheduler + channels)
//     -> { target UE directly; relay -> D2D -> target UE (mux) }
// advancing in fixed order each 1 ms slot so runs are bit-reproducible.
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltesim/channel.hpp"
#include "ltesim/config.hpp"
#include "ltesim/netfn.hpp"
#include "ltesim/scheduler.hpp"
#include "ltesim/transport.hpp"

namespace ltesim {

struct RunMetrics {
  int64_t duration_slots = 0;
  // (name, cumulative delivered bits); UEs are "target", "extra1", ...
  std::vector<std::pair<std::string, int64_t>> per_flow_bits;
  std::vector<std::pair<std::string, int64_t>> per_ue_bits;
  double session_throughput_bps = 0;  // target host
  double system_throughput_bps = 0;   // sum over UEs
  // System throughput sampled every 1000 slots (bps over the window).
  std::vector<double> throughput_series_bps;
};

// FIFO with a per-slot bit budget and fixed propagation delay.
class BitPipe {
 public:
  BitPipe(int64_t capacity_bits_per_slot, int delay_slots)
      : capacity_(capacity_bits_per_slot), delay_(delay_slots) {}

  void push(const Block& b) { ingress_.push_back(b); }
  void forward(int64_t now);
  std::vector<Block> arrivals(int64_t now);
  int64_t resident() const {
    return static_cast<int64_t>(ingress_.size() + transit_.size());
  }

 private:
  struct InTransit {
    int64_t deliver_slot;
    Block block;
  };
  int64_t capacity_;
  int delay_;
  std::deque<Block> ingress_;
  std::deque<InTransit> transit_;
};

class World {
 public:
  explicit World(const ScenarioConfig& cfg);

  void step();  // advance one slot
  RunMetrics run();  // cfg.duration_slots steps, then metrics
  RunMetrics metrics() const;

  int64_t now() const { return now_; }
  const TwoTierScheduler& scheduler() const { return scheduler_; }
  const ScenarioConfig& config() const { return cfg_; }

  // Record per-slot granted bits of the target cluster (criteria that need
  // slot-wise dominance comparisons).
  void enable_grant_recording() { record_grants_ = true; }
  const std::vector<int64_t>& grant_history() const { return grant_history_; }

  // Global block-copy conservation: sent = received + dropped + resident.
  bool conservation_ok() const;

  // Running hash of each device's emitted rate sequence; paired runs across
  // policy cells must agree on these.
  const std::vector<uint64_t>& rate_checksums() const { return rate_hash_; }

  int64_t delivered_bits_ue(int ue) const;

 private:
  struct FlowCtx {
    std::string name;
    bool backlogged = false;
    bool via_relay = false;   // path of single-path flows
    bool through_mux = false; // demuxed target flow
    int demux = 0;            // index into demuxes_
    int ue = 0;               // 0 = target, 1.. = extra UEs
    TcpFlowState* tcp = nullptr;
    int mp_subflow = -1;      // index into mp_state_.subflows, -1 if uncoupled
    // sender bookkeeping
    std::deque<int64_t> retx_queue;
    std::set<int64_t> retx_set;
    std::unordered_map<int64_t, int64_t> emit_slot;
    std::set<int64_t> retx_marked;
    int dupacks = 0;
    int64_t last_progress = 0;
    int64_t recovery_high = -1;
    // receiver bookkeeping
    int64_t rcv_next = 0;
    std::set<int64_t> ooo;
    // demux ingress block-id counter
    int64_t next_block_id = 0;
    // backlogged delivery counter (bits)
    int64_t backlogged_delivered_bits = 0;
  };

  struct SchedFlow {
    int demux;
    int hop;
    int device;  // index into channels_
    int flow;    // index into flows_
  };

  struct AckMsg {
    int flow;
    int64_t ack_no;
    int64_t ready_slot;
  };

  struct LteDelivery {
    int64_t deliver_slot;
    int sched_flow;
    Block block;
  };

  void emit_sources();
  void emit_tcp(int flow_index);
  void forward_wired();
  void schedule_and_pull();
  void deliver_lte();
  void deliver_to_ue(int flow_index, const Block& block);
  void receiver_accept(int flow_index, const Block& block);
  void process_acks();
  double rto(const TcpFlowState& t) const;
  void enter_recovery(FlowCtx& f);
  void queue_retx(FlowCtx& f, int64_t seq);
  int64_t delivered_bits_flow(int flow) const;

  ScenarioConfig cfg_;
  const RateTable& table_;
  int64_t now_ = 0;

  std::vector<ChannelProcess> channels_;  // device 0 = target UE, then relay, extras
  std::vector<int64_t> device_rate_;
  int relay_device_ = -1;

  std::vector<Demux> demuxes_;
  std::vector<SchedFlow> sched_flows_;
  TwoTierScheduler scheduler_;
  std::vector<int64_t> pull_credit_;  // residual bits per sched flow

  std::vector<TcpFlowState> tcp_states_;
  MultipathState mp_state_;
  std::vector<FlowCtx> flows_;
  std::optional<Mux> mux_;  // demuxed target flow reassembly at the UE

  BitPipe wired_;  // server -> eNB (backhaul collapsed to one pipe, 2 hops)
  BitPipe d2d_;    // relay -> target UE
  std::deque<LteDelivery> lte_in_flight_;
  std::deque<AckMsg> acks_;

  bool record_grants_ = false;
  std::vector<int64_t> grant_history_;
  int target_cluster_id_ = 0;

  // conservation counters (block copies)
  int64_t blocks_sent_ = 0;
  int64_t blocks_recv_ = 0;

  std::vector<uint64_t> rate_hash_;

  // metrics
  std::vector<double> series_;
  int64_t series_last_bits_ = 0;
};

RunMetrics run_scenario(const ScenarioConfig& cfg);

}  // namespace ltesim
