#pragma once
// Programmable network functions around the scheduler: the flow demultiplexer
// (splits one flow's blocks across next-hop buffers, with copy-to-all pull
// dedupe) and the flow multiplexer (in-order recombination with bounded hold).
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace ltesim {

// 1 block = 1 MTU-sized IP packet.
constexpr int64_t kBlockBits = 12000;

struct Block {
  int64_t block_id = 0;     // per-flow sequence number, assigned at demux ingress
  int flow_id = 0;
  int64_t size_bits = kBlockBits;
  int64_t enqueue_slot = 0;
  int64_t payload_seq = -1;  // transport-level sequence carried as payload
};

enum class DemuxMode { CopyAll, RoundRobinSplit, WeightedSplit };

class Demux {
 public:
  // Weights are required (one per hop) for WeightedSplit only.
  Demux(DemuxMode mode, int num_hops, int64_t capacity_bits,
        std::vector<double> weights = {});

  // Appends the block per mode. Returns false when dropped (drop-tail; in
  // CopyAll admission is all-or-nothing across buffers).
  bool enqueue(const Block& block);

  // Removes whole blocks from the head of the hop's buffer up to budget bits.
  // In CopyAll mode the returned blocks disappear from every buffer.
  std::vector<Block> pull(int hop, int64_t budget_bits);

  int num_hops() const { return num_hops_; }
  int64_t buffer_bits(int hop) const;
  size_t buffer_blocks(int hop) const;
  const std::deque<Block>& buffer(int hop) const;
  std::optional<int64_t> head_block_id(int hop) const;

  // Conservation counters (blocks).
  int64_t enqueued() const { return enqueued_; }
  int64_t pulled() const { return pulled_; }
  int64_t dropped() const { return dropped_; }
  int64_t resident() const;

 private:
  const std::deque<Block>& queue_of(int hop) const;
  std::deque<Block>& queue_of(int hop);

  DemuxMode mode_;
  int num_hops_;
  int64_t capacity_bits_;
  std::vector<double> weights_;
  double weight_total_ = 0;
  // CopyAll keeps one shared queue (all buffers are identical by
  // construction: all-or-nothing admission, simultaneous removal).
  std::vector<std::deque<Block>> queues_;
  std::vector<int64_t> queue_bits_;
  size_t rr_cursor_ = 0;
  std::vector<int64_t> assigned_bits_;  // WeightedSplit bookkeeping
  int64_t assigned_total_ = 0;
  int64_t enqueued_ = 0, pulled_ = 0, dropped_ = 0;
};

class Mux {
 public:
  Mux(int64_t hold_slots, int64_t first_expected = 0);

  // Returns blocks released in order (possibly empty). Duplicates and
  // already-passed ids are discarded.
  std::vector<Block> ingest(const Block& block, int64_t now);

  // Once per slot: expire blocks held longer than hold_slots, declaring the
  // skipped ids as permanent gaps.
  std::vector<Block> tick(int64_t now);

  int64_t next_expected() const { return next_expected_; }
  size_t buffered() const { return buffer_.size(); }
  const std::vector<int64_t>& gaps() const { return gaps_; }
  int64_t released() const { return released_; }
  // Longest current residency, for invariant checks.
  int64_t max_wait(int64_t now) const;

 private:
  void release_run(std::vector<Block>& out);

  int64_t hold_slots_;
  int64_t next_expected_;
  struct Held {
    Block block;
    int64_t arrival_slot;
  };
  std::map<int64_t, Held> buffer_;  // keyed by block_id
  std::vector<int64_t> gaps_;
  int64_t released_ = 0;
};

}  // namespace ltesim
