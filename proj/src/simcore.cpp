#include "ltesim/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltesim {

void BitPipe::forward(int64_t now) {
  int64_t budget = capacity_;
  while (!ingress_.empty() && ingress_.front().size_bits <= budget) {
    budget -= ingress_.front().size_bits;
    transit_.push_back({now + delay_, ingress_.front()});
    ingress_.pop_front();
  }
}

std::vector<Block> BitPipe::arrivals(int64_t now) {
  std::vector<Block> out;
  while (!transit_.empty() && transit_.front().deliver_slot <= now) {
    out.push_back(transit_.front().block);
    transit_.pop_front();
  }
  return out;
}

namespace {

ChannelProcess make_channel(const ChannelSpec& spec, const RateTable& table,
                            uint64_t seed, int device_index) {
  switch (spec.model) {
    case ChannelSpec::Model::Fixed:
      return ChannelProcess::fixed(spec.fixed_cqi, table);
    case ChannelSpec::Model::Markov:
      return ChannelProcess::markov({spec.p, spec.q}, table,
                                    Rng::derive(seed, "channel", static_cast<uint64_t>(device_index)));
    case ChannelSpec::Model::Trace:
      return ChannelProcess::trace(
          TraceChannel(load_trace_file(spec.trace_path), spec.shift_epochs, table));
  }
  throw std::logic_error("bad channel model");
}

}  // namespace

World::World(const ScenarioConfig& cfg)
    : cfg_(cfg),
      table_(RateTable::standard()),
      scheduler_(cfg.inter_policy, cfg.t_c, RateTable::standard().mean_rate()),
      wired_(cfg.wired_capacity_bps / kSlotsPerSecond, 2 * cfg.wired_delay_slots),
      d2d_(cfg.d2d_capacity_bps / kSlotsPerSecond, 1) {
  validate_config(cfg_);

  // Devices: 0 = target UE, then the relay, then the extra UEs.
  channels_.push_back(make_channel(cfg_.target_channel, table_, cfg_.seed, 0));
  if (cfg_.relay) {
    relay_device_ = 1;
    channels_.push_back(make_channel(cfg_.relay_channel, table_, cfg_.seed, 1));
  }
  int extra_base_device = cfg_.relay ? 2 : 1;
  for (int i = 0; i < cfg_.extra_ues; ++i)
    channels_.push_back(make_channel(cfg_.extra_channels[static_cast<size_t>(i)], table_,
                                     cfg_.seed, extra_base_device + i));
  device_rate_.assign(channels_.size(), 0);

  int64_t cap_bits = static_cast<int64_t>(cfg_.demux_capacity_blocks) * kBlockBits;
  bool backlogged = cfg_.transport == TransportKind::Backlogged;
  bool two_path_one_flow =
      cfg_.transport == TransportKind::DemuxedTcp || (backlogged && cfg_.relay);
  bool two_flows =
      cfg_.transport == TransportKind::TwoTcp || cfg_.transport == TransportKind::MpTcp;

  // Target host flows, demuxes, and scheduler attach points.
  int target_sched_flows = 0;
  if (two_path_one_flow) {
    demuxes_.emplace_back(cfg_.demux_mode, 2, cap_bits, cfg_.demux_weights);
    FlowCtx f;
    f.name = "flow0";
    f.backlogged = backlogged;
    f.through_mux = cfg_.transport == TransportKind::DemuxedTcp;
    f.demux = 0;
    f.ue = 0;
    flows_.push_back(std::move(f));
    sched_flows_.push_back({0, 0, 0, 0});
    sched_flows_.push_back({0, 1, relay_device_, 0});
    target_sched_flows = 2;
    if (cfg_.transport == TransportKind::DemuxedTcp) mux_.emplace(cfg_.mux_hold_slots);
  } else if (two_flows) {
    for (int i = 0; i < 2; ++i) {
      demuxes_.emplace_back(DemuxMode::CopyAll, 1, cap_bits);
      FlowCtx f;
      f.name = "flow" + std::to_string(i);
      f.via_relay = i == 1;
      f.demux = i;
      f.ue = 0;
      if (cfg_.transport == TransportKind::MpTcp) f.mp_subflow = i;
      flows_.push_back(std::move(f));
      sched_flows_.push_back({i, 0, i == 1 ? relay_device_ : 0, i});
    }
    target_sched_flows = 2;
  } else {
    demuxes_.emplace_back(DemuxMode::CopyAll, 1, cap_bits);
    FlowCtx f;
    f.name = "flow0";
    f.backlogged = backlogged;
    f.demux = 0;
    f.ue = 0;
    flows_.push_back(std::move(f));
    sched_flows_.push_back({0, 0, 0, 0});
    target_sched_flows = 1;
  }

  // Extra destination UEs: one direct flow each (TCP, or backlogged in
  // scheduler-only studies), singleton clusters.
  for (int i = 0; i < cfg_.extra_ues; ++i) {
    int demux_index = static_cast<int>(demuxes_.size());
    demuxes_.emplace_back(DemuxMode::CopyAll, 1, cap_bits);
    FlowCtx f;
    f.name = "flow" + std::to_string(flows_.size());
    f.backlogged = backlogged;
    f.demux = demux_index;
    f.ue = 1 + i;
    flows_.push_back(std::move(f));
    sched_flows_.push_back({demux_index, 0, extra_base_device + i,
                            static_cast<int>(flows_.size()) - 1});
  }

  // Congestion state allocation (stable addresses: sized once, never grown).
  if (cfg_.transport == TransportKind::MpTcp) {
    mp_state_.coupling = Coupling::Lia;
    mp_state_.subflows.resize(2);
  }
  tcp_states_.resize(flows_.size());
  for (size_t i = 0; i < flows_.size(); ++i) {
    if (flows_[i].backlogged) continue;
    flows_[i].tcp = flows_[i].mp_subflow >= 0
                        ? &mp_state_.subflows[static_cast<size_t>(flows_[i].mp_subflow)]
                        : &tcp_states_[i];
  }

  // Clusters: the target's flows bundled per config, extras singleton.
  int next_cluster = 0;
  if (cfg_.bundle || target_sched_flows == 1) {
    std::vector<int> members;
    for (int i = 0; i < target_sched_flows; ++i) members.push_back(i);
    scheduler_.add_cluster(next_cluster++, cfg_.intra_policy, members);
  } else {
    for (int i = 0; i < target_sched_flows; ++i)
      scheduler_.add_cluster(next_cluster++, cfg_.intra_policy, {i});
  }
  for (int i = 0; i < cfg_.extra_ues; ++i)
    scheduler_.add_cluster(next_cluster++, cfg_.intra_policy, {target_sched_flows + i});
  target_cluster_id_ = 0;

  pull_credit_.assign(sched_flows_.size(), 0);
}

double World::rto(const TcpFlowState& t) const {
  if (t.srtt <= 0) return 100.0;
  return std::max(4.0 * t.srtt, 30.0);
}

void World::enter_recovery(FlowCtx& f) {
  if (f.recovery_high >= 0) return;  // one congestion event per window
  on_loss(*f.tcp);
  f.recovery_high = f.tcp->next_seq - 1;
}

void World::queue_retx(FlowCtx& f, int64_t seq) {
  if (f.retx_set.count(seq)) return;
  f.retx_set.insert(seq);
  f.retx_queue.push_back(seq);
}

void World::emit_tcp(int flow_index) {
  FlowCtx& f = flows_[static_cast<size_t>(flow_index)];
  TcpFlowState& t = *f.tcp;

  while (!f.retx_queue.empty()) {
    int64_t seq = f.retx_queue.front();
    f.retx_queue.pop_front();
    f.retx_set.erase(seq);
    if (seq <= t.highest_acked) continue;  // acked meanwhile
    Block b;
    b.block_id = -1;  // assigned at demux ingress
    b.flow_id = flow_index;
    b.enqueue_slot = now_;
    b.payload_seq = seq;
    wired_.push(b);
    ++blocks_sent_;
    f.emit_slot[seq] = now_;
    f.retx_marked.insert(seq);
  }

  while (t.inflight < static_cast<int64_t>(t.cwnd)) {
    if (t.inflight == 0) f.last_progress = now_;  // fresh timer for an idle flow
    int64_t seq = t.next_seq++;
    ++t.inflight;
    Block b;
    b.block_id = -1;
    b.flow_id = flow_index;
    b.enqueue_slot = now_;
    b.payload_seq = seq;
    wired_.push(b);
    ++blocks_sent_;
    f.emit_slot[seq] = now_;
  }
}

void World::emit_sources() {
  for (size_t i = 0; i < flows_.size(); ++i) {
    FlowCtx& f = flows_[i];
    if (f.backlogged) {
      // Keep every downstream buffer non-empty: top up to capacity.
      Demux& d = demuxes_[static_cast<size_t>(f.demux)];
      int64_t cap_bits = static_cast<int64_t>(cfg_.demux_capacity_blocks) * kBlockBits;
      auto least_full = [&] {
        int64_t bits = d.buffer_bits(0);
        for (int h = 1; h < d.num_hops(); ++h) bits = std::min(bits, d.buffer_bits(h));
        return bits;
      };
      while (least_full() + kBlockBits <= cap_bits) {
        Block b;
        b.block_id = f.next_block_id++;
        b.flow_id = static_cast<int>(i);
        b.enqueue_slot = now_;
        b.payload_seq = b.block_id;
        ++blocks_sent_;
        if (!d.enqueue(b)) break;  // split modes can still hit a full target
      }
    } else {
      emit_tcp(static_cast<int>(i));
    }
  }
}

void World::forward_wired() {
  wired_.forward(now_);
  for (Block& b : wired_.arrivals(now_)) {
    FlowCtx& f = flows_[static_cast<size_t>(b.flow_id)];
    b.block_id = f.next_block_id++;
    b.enqueue_slot = now_;
    demuxes_[static_cast<size_t>(f.demux)].enqueue(b);
  }
}

void World::schedule_and_pull() {
  std::vector<int64_t> rates(sched_flows_.size()), backlog(sched_flows_.size());
  for (size_t i = 0; i < sched_flows_.size(); ++i) {
    rates[i] = device_rate_[static_cast<size_t>(sched_flows_[i].device)];
    backlog[i] = demuxes_[static_cast<size_t>(sched_flows_[i].demux)].buffer_bits(sched_flows_[i].hop);
  }
  auto d = scheduler_.schedule_slot(rates, backlog);
  if (record_grants_)
    grant_history_.push_back(d && d->cluster_id == target_cluster_id_ ? d->granted_bits : 0);
  if (d) {
    size_t i = static_cast<size_t>(d->flow_id);
    const SchedFlow& s = sched_flows_[i];
    int64_t budget = d->granted_bits + pull_credit_[i];
    auto blocks = demuxes_[static_cast<size_t>(s.demux)].pull(s.hop, budget);
    int64_t used = 0;
    for (const auto& b : blocks) used += b.size_bits;
    // Residual-bit credit carries over only while there is backlog to spend
    // it on (and is then necessarily below one block).
    pull_credit_[i] =
        demuxes_[static_cast<size_t>(s.demux)].buffer_bits(s.hop) > 0 ? budget - used : 0;
    for (const auto& b : blocks)
      lte_in_flight_.push_back({now_ + 1, static_cast<int>(i), b});
  }
  scheduler_.update_ewma(d);
}

void World::deliver_lte() {
  while (!lte_in_flight_.empty() && lte_in_flight_.front().deliver_slot <= now_) {
    LteDelivery e = lte_in_flight_.front();
    lte_in_flight_.pop_front();
    const SchedFlow& s = sched_flows_[static_cast<size_t>(e.sched_flow)];
    if (s.device == relay_device_)
      d2d_.push(e.block);
    else
      deliver_to_ue(e.block.flow_id, e.block);
  }
}

void World::deliver_to_ue(int flow_index, const Block& block) {
  ++blocks_recv_;
  FlowCtx& f = flows_[static_cast<size_t>(flow_index)];
  if (f.backlogged) {
    f.backlogged_delivered_bits += block.size_bits;
    return;
  }
  std::vector<Block> released;
  if (f.through_mux) {
    released = mux_->ingest(block, now_);
  } else {
    released.push_back(block);
  }
  for (const Block& b : released) receiver_accept(flow_index, b);
}

void World::receiver_accept(int flow_index, const Block& block) {
  FlowCtx& f = flows_[static_cast<size_t>(flow_index)];
  int64_t seq = block.payload_seq;
  if (seq == f.rcv_next) {
    ++f.rcv_next;
    while (f.ooo.erase(f.rcv_next)) ++f.rcv_next;
  } else if (seq > f.rcv_next) {
    f.ooo.insert(seq);
  }
  acks_.push_back({flow_index, f.rcv_next, now_ + 1});
}

void World::process_acks() {
  while (!acks_.empty() && acks_.front().ready_slot <= now_) {
    AckMsg a = acks_.front();
    acks_.pop_front();
    FlowCtx& f = flows_[static_cast<size_t>(a.flow)];
    TcpFlowState& t = *f.tcp;
    int64_t ackd = a.ack_no - 1;  // highest sequence covered by this ACK
    if (ackd > t.highest_acked) {
      int64_t n = ackd - t.highest_acked;
      auto it = f.emit_slot.find(ackd);
      if (it != f.emit_slot.end() && !f.retx_marked.count(ackd))
        srtt_update(t, static_cast<double>(now_ - it->second));
      for (int64_t s = t.highest_acked + 1; s <= ackd; ++s) {
        f.emit_slot.erase(s);
        f.retx_marked.erase(s);
      }
      t.highest_acked = ackd;
      t.inflight = t.next_seq - (t.highest_acked + 1);
      f.dupacks = 0;
      f.last_progress = now_;
      if (f.recovery_high >= 0 && t.highest_acked >= f.recovery_high)
        f.recovery_high = -1;
      if (f.recovery_high >= 0) {
        queue_retx(f, a.ack_no);  // partial ack: next missing segment
      } else if (f.mp_subflow >= 0) {
        mptcp_increase(mp_state_, static_cast<size_t>(f.mp_subflow), n);
      } else {
        on_ack(t, n);
      }
    } else {
      ++f.dupacks;
      if (f.dupacks == 3) {
        enter_recovery(f);
        queue_retx(f, a.ack_no);
      }
    }
  }

  // Retransmission timeout: no forward progress for an RTO with data out.
  for (auto& f : flows_) {
    if (f.backlogged || f.tcp->inflight <= 0) continue;
    if (static_cast<double>(now_ - f.last_progress) > rto(*f.tcp)) {
      enter_recovery(f);
      queue_retx(f, f.tcp->highest_acked + 1);
      f.last_progress = now_;  // restart the timer
    }
  }
}

void World::step() {
  if (rate_hash_.empty()) rate_hash_.assign(channels_.size(), 0);
  for (size_t i = 0; i < channels_.size(); ++i) {
    device_rate_[i] = channels_[i].advance(now_);
    rate_hash_[i] = mix64(rate_hash_[i] ^ static_cast<uint64_t>(device_rate_[i]));
  }
  emit_sources();
  forward_wired();
  schedule_and_pull();
  deliver_lte();
  d2d_.forward(now_);
  for (const Block& b : d2d_.arrivals(now_)) deliver_to_ue(b.flow_id, b);
  if (mux_) {
    // Timeout releases behave like arrivals for the transport above.
    for (const Block& b : mux_->tick(now_)) receiver_accept(0, b);
  }
  process_acks();

  if ((now_ + 1) % 1000 == 0) {
    int64_t total = 0;
    for (size_t u = 0; u < 1 + static_cast<size_t>(cfg_.extra_ues); ++u)
      total += delivered_bits_ue(static_cast<int>(u));
    series_.push_back(static_cast<double>(total - series_last_bits_) /
                      1000.0 * kSlotsPerSecond);
    series_last_bits_ = total;
  }
  ++now_;
}

int64_t World::delivered_bits_flow(int flow) const {
  const FlowCtx& f = flows_[static_cast<size_t>(flow)];
  if (f.backlogged) return f.backlogged_delivered_bits;
  return f.rcv_next * kBlockBits;
}

int64_t World::delivered_bits_ue(int ue) const {
  int64_t bits = 0;
  for (size_t i = 0; i < flows_.size(); ++i)
    if (flows_[i].ue == ue) bits += delivered_bits_flow(static_cast<int>(i));
  return bits;
}

bool World::conservation_ok() const {
  int64_t dropped = 0, resident = 0;
  for (const auto& d : demuxes_) {
    dropped += d.dropped();
    resident += d.resident();
  }
  resident += wired_.resident() + d2d_.resident() +
              static_cast<int64_t>(lte_in_flight_.size());
  return blocks_sent_ == blocks_recv_ + dropped + resident;
}

RunMetrics World::metrics() const {
  RunMetrics m;
  m.duration_slots = now_;
  for (size_t i = 0; i < flows_.size(); ++i)
    m.per_flow_bits.emplace_back(flows_[i].name, delivered_bits_flow(static_cast<int>(i)));
  double slots = static_cast<double>(std::max<int64_t>(now_, 1));
  for (int u = 0; u <= cfg_.extra_ues; ++u) {
    std::string name = u == 0 ? "target" : "extra" + std::to_string(u);
    m.per_ue_bits.emplace_back(name, delivered_bits_ue(u));
  }
  m.session_throughput_bps =
      static_cast<double>(delivered_bits_ue(0)) / slots * kSlotsPerSecond;
  double total = 0;
  for (const auto& [name, bits] : m.per_ue_bits) total += static_cast<double>(bits);
  m.system_throughput_bps = total / slots * kSlotsPerSecond;
  m.throughput_series_bps = series_;
  return m;
}

RunMetrics World::run() {
  for (int64_t i = 0; i < cfg_.duration_slots; ++i) step();
  return metrics();
}

RunMetrics run_scenario(const ScenarioConfig& cfg) { return World(cfg).run(); }

}  // namespace ltesim
