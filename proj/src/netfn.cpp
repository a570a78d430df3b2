#include "ltesim/netfn.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltesim {

Demux::Demux(DemuxMode mode, int num_hops, int64_t capacity_bits,
             std::vector<double> weights)
    : mode_(mode), num_hops_(num_hops), capacity_bits_(capacity_bits),
      weights_(std::move(weights)) {
  if (num_hops_ < 1) throw std::invalid_argument("demux needs at least one hop");
  if (mode_ == DemuxMode::WeightedSplit) {
    if (weights_.size() != static_cast<size_t>(num_hops_))
      throw std::invalid_argument("weighted split needs one weight per next hop");
    for (double w : weights_) {
      if (w <= 0) throw std::invalid_argument("split weights must be positive");
      weight_total_ += w;
    }
  }
  size_t n = mode_ == DemuxMode::CopyAll ? 1 : static_cast<size_t>(num_hops_);
  queues_.resize(n);
  queue_bits_.assign(n, 0);
  assigned_bits_.assign(static_cast<size_t>(num_hops_), 0);
}

const std::deque<Block>& Demux::queue_of(int hop) const {
  if (hop < 0 || hop >= num_hops_) throw std::out_of_range("unknown next hop");
  return queues_[mode_ == DemuxMode::CopyAll ? 0 : static_cast<size_t>(hop)];
}

std::deque<Block>& Demux::queue_of(int hop) {
  if (hop < 0 || hop >= num_hops_) throw std::out_of_range("unknown next hop");
  return queues_[mode_ == DemuxMode::CopyAll ? 0 : static_cast<size_t>(hop)];
}

bool Demux::enqueue(const Block& block) {
  if (block.size_bits <= 0) throw std::invalid_argument("block size must be positive");
  size_t target;
  switch (mode_) {
    case DemuxMode::CopyAll:
      target = 0;
      break;
    case DemuxMode::RoundRobinSplit:
      target = rr_cursor_;
      break;
    case DemuxMode::WeightedSplit: {
      // Deficit rule: send to the hop furthest below its weight share.
      target = 0;
      double best = -1e300;
      for (size_t h = 0; h < static_cast<size_t>(num_hops_); ++h) {
        double deficit = weights_[h] / weight_total_ *
                             static_cast<double>(assigned_total_ + block.size_bits) -
                         static_cast<double>(assigned_bits_[h]);
        if (deficit > best) {
          best = deficit;
          target = h;
        }
      }
      break;
    }
  }
  size_t q = mode_ == DemuxMode::CopyAll ? 0 : target;
  if (queue_bits_[q] + block.size_bits > capacity_bits_) {
    ++dropped_;
    return false;
  }
  queues_[q].push_back(block);
  queue_bits_[q] += block.size_bits;
  ++enqueued_;
  if (mode_ == DemuxMode::RoundRobinSplit)
    rr_cursor_ = (rr_cursor_ + 1) % static_cast<size_t>(num_hops_);
  if (mode_ == DemuxMode::WeightedSplit) {
    assigned_bits_[target] += block.size_bits;
    assigned_total_ += block.size_bits;
  }
  return true;
}

std::vector<Block> Demux::pull(int hop, int64_t budget_bits) {
  if (budget_bits < 0) throw std::invalid_argument("pull budget must be >= 0");
  auto& q = queue_of(hop);
  size_t qi = mode_ == DemuxMode::CopyAll ? 0 : static_cast<size_t>(hop);
  std::vector<Block> out;
  int64_t remaining = budget_bits;
  while (!q.empty() && q.front().size_bits <= remaining) {
    remaining -= q.front().size_bits;
    queue_bits_[qi] -= q.front().size_bits;
    out.push_back(q.front());
    q.pop_front();
    ++pulled_;
  }
  return out;
}

int64_t Demux::buffer_bits(int hop) const {
  queue_of(hop);  // range check
  return queue_bits_[mode_ == DemuxMode::CopyAll ? 0 : static_cast<size_t>(hop)];
}

size_t Demux::buffer_blocks(int hop) const { return queue_of(hop).size(); }

const std::deque<Block>& Demux::buffer(int hop) const { return queue_of(hop); }

std::optional<int64_t> Demux::head_block_id(int hop) const {
  const auto& q = queue_of(hop);
  if (q.empty()) return std::nullopt;
  return q.front().block_id;
}

int64_t Demux::resident() const {
  if (mode_ == DemuxMode::CopyAll) return static_cast<int64_t>(queues_[0].size());
  int64_t n = 0;
  for (const auto& q : queues_) n += static_cast<int64_t>(q.size());
  return n;
}

Mux::Mux(int64_t hold_slots, int64_t first_expected)
    : hold_slots_(hold_slots), next_expected_(first_expected) {
  if (hold_slots_ < 0) throw std::invalid_argument("mux hold limit must be >= 0");
}

void Mux::release_run(std::vector<Block>& out) {
  for (auto it = buffer_.begin();
       it != buffer_.end() && it->first == next_expected_; it = buffer_.erase(it)) {
    out.push_back(it->second.block);
    ++next_expected_;
    ++released_;
  }
}

std::vector<Block> Mux::ingest(const Block& block, int64_t now) {
  std::vector<Block> out;
  if (block.block_id < next_expected_ || buffer_.count(block.block_id))
    return out;  // duplicate or already passed
  if (block.block_id == next_expected_) {
    out.push_back(block);
    ++next_expected_;
    ++released_;
    release_run(out);
    return out;
  }
  buffer_.emplace(block.block_id, Held{block, now});
  return out;
}

std::vector<Block> Mux::tick(int64_t now) {
  std::vector<Block> out;
  while (!buffer_.empty() && max_wait(now) > hold_slots_) {
    // Jump past the gap: everything below the smallest buffered id is
    // declared lost, then the contiguous run from there drains.
    int64_t jump_to = buffer_.begin()->first;
    for (int64_t id = next_expected_; id < jump_to; ++id) gaps_.push_back(id);
    next_expected_ = jump_to;
    release_run(out);
  }
  return out;
}

int64_t Mux::max_wait(int64_t now) const {
  int64_t w = 0;
  for (const auto& [id, held] : buffer_)
    w = std::max(w, now - held.arrival_slot);
  return w;
}

}  // namespace ltesim
