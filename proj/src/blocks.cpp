#include "vscp/blocks.hpp"

#include <algorithm>

namespace vscp {

PointSetEnumerator::PointSetEnumerator(const Program& p, int pi) : pi_(pi) {
  if (pi < 0) throw std::invalid_argument("preemption budget must be >= 0");
  for (int t = 1; t <= p.thread_count(); ++t)
    for (int i = 0; i + 1 < p.thread_length(t); ++i)
      candidates_.push_back(EventRef{t, i});
}

std::optional<PreemptionPointSet> PointSetEnumerator::next() {
  PreemptionPointSet set;
  if (!next_into(set)) return std::nullopt;
  return set;
}

bool PointSetEnumerator::next_into(PreemptionPointSet& out) {
  const int n = static_cast<int>(candidates_.size());
  while (!done_) {
    if (size_ > pi_ || size_ > n) {
      done_ = true;
      break;
    }
    if (fresh_size_) {
      combo_.resize(size_);
      for (int i = 0; i < size_; ++i) combo_[i] = i;
      fresh_size_ = false;
    } else {
      // advance to the next lexicographic combination of this size
      int i = size_ - 1;
      while (i >= 0 && combo_[i] == n - size_ + i) --i;
      if (i < 0) {
        ++size_;
        fresh_size_ = true;
        continue;
      }
      ++combo_[i];
      for (int j = i + 1; j < size_; ++j) combo_[j] = combo_[j - 1] + 1;
    }
    out.points.clear();
    out.points.reserve(size_);
    for (int idx : combo_) out.points.push_back(candidates_[idx]);
    return true;
  }
  return false;
}

uint64_t PointSetEnumerator::total_count(const Program& p, int pi) {
  if (pi < 0) throw std::invalid_argument("preemption budget must be >= 0");
  uint64_t n = 0;
  for (int t = 1; t <= p.thread_count(); ++t)
    n += static_cast<uint64_t>(p.thread_length(t) - 1);
  uint64_t total = 0;
  uint64_t binom = 1;  // C(n, 0)
  for (uint64_t s = 0; s <= static_cast<uint64_t>(pi) && s <= n; ++s) {
    total += binom;
    binom = binom * (n - s) / (s + 1);
  }
  return total;
}

BlockProgram::BlockProgram(const Program& base, PreemptionPointSet points)
    : base_(&base) {
  points_ = std::move(points);
  rebuild();
}

void BlockProgram::assign(const Program& base, const PreemptionPointSet& points) {
  base_ = &base;
  points_.points.assign(points.points.begin(), points.points.end());
  rebuild();
}

void BlockProgram::rebuild() {
  const Program& base = *base_;
  auto& pts = points_.points;
  std::sort(pts.begin(), pts.end());
  for (size_t i = 0; i < pts.size(); ++i) {
    const EventRef ref = pts[i];
    if (!base.contains(ref))
      throw std::invalid_argument("preemption point names unknown event (" +
                                  std::to_string(ref.thread) + ", " +
                                  std::to_string(ref.index) + ")");
    if (base.is_last_event(ref))
      throw std::invalid_argument(
          "preemption point at the last event of thread " +
          base.label(ref.thread));
    if (i > 0 && pts[i - 1] == ref)
      throw std::invalid_argument("duplicate preemption point");
  }

  const int k = base.thread_count();
  blocks_.resize(k);
  size_t next = 0;
  for (int t = 1; t <= k; ++t) {
    blocks_[t - 1].clear();
    int lo = 0;
    int position = 0;
    while (next < pts.size() && pts[next].thread == t) {
      const int hi = pts[next].index;
      blocks_[t - 1].push_back(Block{t, lo, hi, position++, false});
      lo = hi + 1;
      ++next;
    }
    blocks_[t - 1].push_back(
        Block{t, lo, base.thread_length(t) - 1, position, true});
  }
}

int BlockProgram::inner_count() const {
  return static_cast<int>(points_.points.size());
}

std::vector<BlockRef> BlockProgram::inner_blocks() const {
  std::vector<BlockRef> refs;
  refs.reserve(points_.points.size());
  for (int t = 1; t <= thread_count(); ++t)
    for (int pos = 0; pos < inner_count(t); ++pos)
      refs.push_back(BlockRef{t, pos});
  return refs;
}

Interleaving expand(const BlockProgram& bp, const BlockInterleaving& s) {
  const Program& p = bp.base();
  std::vector<int> next(static_cast<size_t>(bp.thread_count()), 0);
  Interleaving out;
  for (const BlockRef ref : s.order) {
    if (ref.thread < 1 || ref.thread > bp.thread_count() || ref.position < 0 ||
        ref.position >=
            static_cast<int>(bp.thread_blocks(ref.thread).size()))
      throw InterleavingError("unknown block (" + std::to_string(ref.thread) +
                              ", " + std::to_string(ref.position) + ")");
    int& expect = next[ref.thread - 1];
    if (ref.position != expect)
      throw InterleavingError("thread " + p.label(ref.thread) +
                              " blocks out of order at position " +
                              std::to_string(ref.position));
    ++expect;
    const Block& b = bp.block(ref);
    for (int i = b.lo; i <= b.hi; ++i)
      out.order.push_back(EventRef{ref.thread, i});
  }
  return out;
}

}  // namespace vscp
