#pragma once
// Two-tier cluster scheduler: the controller groups flows into clusters and
// sets one policy for inter-cluster selection and one per cluster for
// intra-cluster selection. PFS normalizes the instantaneous rate by an EWMA
// throughput; Max C/I takes the raw rate.
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ltesim {

enum class Policy { Pfs, MaxCi, RoundRobin };

// Exact config strings: `pfs`, `max_ci`, `round_robin`.
const char* policy_name(Policy p);
std::optional<Policy> policy_from_name(const std::string& name);

struct FlowSchedState {
  int flow_id = 0;
  double ewma_throughput = 1.0;  // bits/slot, kept strictly positive
};

struct ClusterSchedState {
  int cluster_id = 0;
  Policy intra_policy = Policy::Pfs;
  std::vector<FlowSchedState> members;
  double ewma_throughput = 1.0;
  size_t rr_cursor = 0;  // round-robin position, advances only on service
};

struct SchedulingDecision {
  int cluster_id = 0;
  int flow_id = 0;
  int64_t granted_bits = 0;  // min(R(f*), backlog(f*))
};

class TwoTierScheduler {
 public:
  // ewma_bootstrap seeds every T-bar; must be > 0 (PFS denominator).
  TwoTierScheduler(Policy inter_policy, int ewma_time_constant_slots,
                   double ewma_bootstrap);

  void add_cluster(int cluster_id, Policy intra_policy,
                   const std::vector<int>& flow_ids);

  // Peek at the intra winner of one cluster; does not move round-robin
  // cursors. rates/backlog are dense arrays indexed by flow_id. Flows with
  // zero backlog are not candidates.
  std::optional<int> select_intra(const ClusterSchedState& cluster,
                                  std::span<const int64_t> rates,
                                  std::span<const int64_t> backlog) const;

  // Inter-tier argmax over per-cluster rates R(C_i) = R(f_i*). Clusters
  // absent from cluster_rates (all members empty) are excluded.
  std::optional<int> select_inter(
      const std::vector<std::pair<int, int64_t>>& cluster_rates) const;

  // One slot: intra per cluster, then inter, then commit (round-robin cursor
  // of the served cluster advances). Returns nullopt on an idle slot.
  std::optional<SchedulingDecision> schedule_slot(
      std::span<const int64_t> rates, std::span<const int64_t> backlog);

  // EWMA bookkeeping, one call per slot after schedule_slot. Unserved flows
  // and clusters decay (served = 0).
  void update_ewma(const std::optional<SchedulingDecision>& decision);

  const std::vector<ClusterSchedState>& clusters() const { return clusters_; }
  Policy inter_policy() const { return inter_policy_; }
  int time_constant() const { return tc_; }

 private:
  Policy inter_policy_;
  int tc_;
  double bootstrap_;
  std::vector<ClusterSchedState> clusters_;
  size_t inter_rr_cursor_ = 0;
};

}  // namespace ltesim
