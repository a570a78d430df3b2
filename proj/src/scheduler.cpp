#include "ltesim/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltesim {

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::Pfs: return "pfs";
    case Policy::MaxCi: return "max_ci";
    case Policy::RoundRobin: return "round_robin";
  }
  return "?";
}

std::optional<Policy> policy_from_name(const std::string& name) {
  if (name == "pfs") return Policy::Pfs;
  if (name == "max_ci") return Policy::MaxCi;
  if (name == "round_robin") return Policy::RoundRobin;
  return std::nullopt;
}

TwoTierScheduler::TwoTierScheduler(Policy inter_policy, int ewma_time_constant_slots,
                                   double ewma_bootstrap)
    : inter_policy_(inter_policy), tc_(ewma_time_constant_slots), bootstrap_(ewma_bootstrap) {
  if (tc_ < 1) throw std::invalid_argument("ewma time constant must be >= 1 slot");
  if (bootstrap_ <= 0) throw std::invalid_argument("ewma bootstrap must be positive");
}

void TwoTierScheduler::add_cluster(int cluster_id, Policy intra_policy,
                                   const std::vector<int>& flow_ids) {
  if (flow_ids.empty()) throw std::invalid_argument("cluster must have members");
  for (const auto& c : clusters_)
    if (c.cluster_id == cluster_id)
      throw std::invalid_argument("duplicate cluster id");
  ClusterSchedState c;
  c.cluster_id = cluster_id;
  c.intra_policy = intra_policy;
  c.ewma_throughput = bootstrap_;
  for (int f : flow_ids) c.members.push_back({f, bootstrap_});
  // Members sorted by id so argmax ties fall to the lowest flow_id.
  std::sort(c.members.begin(), c.members.end(),
            [](const FlowSchedState& a, const FlowSchedState& b) { return a.flow_id < b.flow_id; });
  clusters_.push_back(std::move(c));
}

std::optional<int> TwoTierScheduler::select_intra(const ClusterSchedState& cluster,
                                                  std::span<const int64_t> rates,
                                                  std::span<const int64_t> backlog) const {
  if (cluster.members.empty()) throw std::logic_error("empty cluster");

  auto backlogged = [&](const FlowSchedState& f) {
    return backlog[static_cast<size_t>(f.flow_id)] > 0;
  };

  if (cluster.intra_policy == Policy::RoundRobin) {
    size_t n = cluster.members.size();
    // First pass: cyclic order among members with R > 0, then ignoring rates.
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t k = 0; k < n; ++k) {
        const auto& f = cluster.members[(cluster.rr_cursor + k) % n];
        if (!backlogged(f)) continue;
        if (pass == 0 && rates[static_cast<size_t>(f.flow_id)] <= 0) continue;
        return f.flow_id;
      }
    }
    return std::nullopt;
  }

  int best = -1;
  double best_metric = 0;
  for (const auto& f : cluster.members) {
    if (!backlogged(f)) continue;
    double r = static_cast<double>(rates[static_cast<size_t>(f.flow_id)]);
    double metric = cluster.intra_policy == Policy::Pfs ? r / f.ewma_throughput : r;
    // Ties break toward the lowest flow_id; members are kept sorted by id.
    if (best < 0 || metric > best_metric) {
      best = f.flow_id;
      best_metric = metric;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::optional<int> TwoTierScheduler::select_inter(
    const std::vector<std::pair<int, int64_t>>& cluster_rates) const {
  if (cluster_rates.empty()) return std::nullopt;

  if (inter_policy_ == Policy::RoundRobin) {
    size_t n = clusters_.size();
    for (size_t k = 0; k < n; ++k) {
      int cid = clusters_[(inter_rr_cursor_ + k) % n].cluster_id;
      for (const auto& [id, rate] : cluster_rates)
        if (id == cid) return cid;
    }
    return std::nullopt;
  }

  int best = -1;
  double best_metric = 0;
  for (const auto& [cid, rate] : cluster_rates) {
    double metric = static_cast<double>(rate);
    if (inter_policy_ == Policy::Pfs) {
      auto it = std::find_if(clusters_.begin(), clusters_.end(),
                             [&](const ClusterSchedState& c) { return c.cluster_id == cid; });
      metric /= it->ewma_throughput;
    }
    if (best < 0 || metric > best_metric || (metric == best_metric && cid < best)) {
      best = cid;
      best_metric = metric;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::optional<SchedulingDecision> TwoTierScheduler::schedule_slot(
    std::span<const int64_t> rates, std::span<const int64_t> backlog) {
  std::vector<std::pair<int, int64_t>> cluster_rates;  // (cluster_id, R(C_i))
  std::vector<int> winners(clusters_.size(), -1);
  for (size_t i = 0; i < clusters_.size(); ++i) {
    auto f = select_intra(clusters_[i], rates, backlog);
    if (!f) continue;
    winners[i] = *f;
    cluster_rates.emplace_back(clusters_[i].cluster_id,
                               rates[static_cast<size_t>(*f)]);
  }

  auto cid = select_inter(cluster_rates);
  if (!cid) return std::nullopt;  // every cluster empty-buffered: idle slot

  for (size_t i = 0; i < clusters_.size(); ++i) {
    if (clusters_[i].cluster_id != *cid) continue;
    int flow = winners[i];
    SchedulingDecision d;
    d.cluster_id = *cid;
    d.flow_id = flow;
    d.granted_bits = std::min(rates[static_cast<size_t>(flow)],
                              backlog[static_cast<size_t>(flow)]);
    // Commit round-robin cursors only on actual service.
    if (clusters_[i].intra_policy == Policy::RoundRobin) {
      size_t n = clusters_[i].members.size();
      for (size_t k = 0; k < n; ++k)
        if (clusters_[i].members[k].flow_id == flow) {
          clusters_[i].rr_cursor = (k + 1) % n;
          break;
        }
    }
    if (inter_policy_ == Policy::RoundRobin) inter_rr_cursor_ = (i + 1) % clusters_.size();
    return d;
  }
  throw std::logic_error("select_inter returned unknown cluster");
}

void TwoTierScheduler::update_ewma(const std::optional<SchedulingDecision>& decision) {
  // Floor keeps the PFS denominator strictly positive even under pure decay.
  constexpr double kMinEwma = 1e-9;
  double keep = 1.0 - 1.0 / tc_;
  double gain = 1.0 / tc_;
  for (auto& c : clusters_) {
    bool cluster_served = decision && decision->cluster_id == c.cluster_id;
    double cluster_bits = cluster_served ? static_cast<double>(decision->granted_bits) : 0.0;
    c.ewma_throughput = std::max(kMinEwma, keep * c.ewma_throughput + gain * cluster_bits);
    for (auto& f : c.members) {
      double bits = cluster_served && decision->flow_id == f.flow_id
                        ? static_cast<double>(decision->granted_bits)
                        : 0.0;
      f.ewma_throughput = std::max(kMinEwma, keep * f.ewma_throughput + gain * bits);
    }
  }
}

}  // namespace ltesim
