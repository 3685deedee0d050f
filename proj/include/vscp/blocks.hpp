#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vscp/trace.hpp"

namespace vscp {

/// A candidate set of context-switch positions. A point (t, i) means thread t
/// may be preempted immediately after its event i. Points are kept sorted and
/// unique; no point may be the last event of its thread (switching after a
/// thread's final event costs nothing and is never guessed).
struct PreemptionPointSet {
  std::vector<EventRef> points;

  friend bool operator==(const PreemptionPointSet&,
                         const PreemptionPointSet&) = default;
};

/// Streams all preemption point sets of size 0..pi in nondecreasing size
/// order; within one size, combinations are lexicographic over candidates
/// sorted by (thread, index). The empty set always comes first.
class PointSetEnumerator {
 public:
  /// Throws std::invalid_argument when pi < 0.
  PointSetEnumerator(const Program& p, int pi);

  /// Next set, or nullopt when exhausted.
  std::optional<PreemptionPointSet> next();

  /// Same stream, written into `out` (reusing its capacity). Returns false
  /// when exhausted; `out` is untouched then.
  bool next_into(PreemptionPointSet& out);

  /// Number of sets the enumerator will yield: sum over s=0..pi of C(N, s)
  /// where N is the count of non-last events.
  static uint64_t total_count(const Program& p, int pi);

 private:
  std::vector<EventRef> candidates_;
  int pi_;
  int size_ = 0;
  std::vector<int> combo_;
  bool fresh_size_ = true;
  bool done_ = false;
};

/// A contiguous span [lo, hi] of one thread's events. The last block of each
/// thread is its outer block; all earlier blocks are inner blocks, each ending
/// at a preemption point.
struct Block {
  int thread{0};
  int lo{0};
  int hi{0};
  int position{0};
  bool outer{false};

  friend bool operator==(const Block&, const Block&) = default;
};

/// Names block `position` of thread `thread` (positions are 0-based in
/// program order within the thread).
struct BlockRef {
  int thread{0};
  int position{0};

  friend constexpr auto operator<=>(const BlockRef&, const BlockRef&) = default;
};

/// The partition of a program induced by a preemption point set: thread t with
/// c_t points splits into c_t inner blocks followed by one outer block.
class BlockProgram {
 public:
  /// Keeps a reference to `base`, which must outlive this object.
  /// Throws std::invalid_argument when a point is unknown or is the last
  /// event of its thread. Duplicate points are rejected.
  BlockProgram(const Program& base, PreemptionPointSet points);

  /// Rebuilds this partition for a new base and point set, reusing the
  /// existing buffers. Same validation as the constructor.
  void assign(const Program& base, const PreemptionPointSet& points);

  const Program& base() const { return *base_; }
  const PreemptionPointSet& points() const { return points_; }
  int thread_count() const { return static_cast<int>(blocks_.size()); }

  /// Accessors assume valid thread ids and block positions; callers that
  /// take refs from outside validate them first (see expand).
  const std::vector<Block>& thread_blocks(int thread) const {
    return blocks_[thread - 1];
  }
  const Block& block(BlockRef ref) const {
    return blocks_[ref.thread - 1][ref.position];
  }
  const Block& outer_block(int thread) const {
    return blocks_[thread - 1].back();
  }
  BlockRef outer_ref(int thread) const {
    return BlockRef{thread, static_cast<int>(blocks_[thread - 1].size()) - 1};
  }
  int inner_count(int thread) const {
    return static_cast<int>(blocks_[thread - 1].size()) - 1;
  }
  /// Total inner blocks; equals points().points.size().
  int inner_count() const;
  /// All inner blocks, thread-major then position order.
  std::vector<BlockRef> inner_blocks() const;

 private:
  void rebuild();

  const Program* base_;
  PreemptionPointSet points_;
  std::vector<std::vector<Block>> blocks_;
};

/// A global ordering of blocks; complete when every block occurs exactly once.
struct BlockInterleaving {
  std::vector<BlockRef> order;

  friend bool operator==(const BlockInterleaving&,
                         const BlockInterleaving&) = default;
};

/// Replaces each block by its events. Validates that `s` references known
/// blocks, has no duplicates and respects per-thread block order (throws
/// InterleavingError otherwise). The expansion of a complete block
/// interleaving has at most |points| preemptions: only block boundaries at
/// inner-block ends can switch away from an unfinished thread.
Interleaving expand(const BlockProgram& bp, const BlockInterleaving& s);

}  // namespace vscp
