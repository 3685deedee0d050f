#include "vscp/onewriter.hpp"

#include <algorithm>

namespace vscp {

bool block_conflicts(const BlockProgram& bp, BlockRef writer, BlockRef reader) {
  if (writer.thread == reader.thread) return false;
  const Program& p = bp.base();
  const Block& bw = bp.block(writer);
  const Block& br = bp.block(reader);
  const auto& wcells = p.cells(writer.thread);
  const auto& rcells = p.cells(reader.thread);
  for (int i = br.lo; i <= br.hi; ++i) {
    const Program::Cell& rc = rcells[i];
    if (!rc.read) continue;
    // last write on rc.var within the writer block, if any
    for (int j = bw.hi; j >= bw.lo; --j) {
      const Program::Cell& wc = wcells[j];
      if (wc.read || wc.var != rc.var) continue;
      if (wc.val != rc.val) return true;
      break;
    }
  }
  return false;
}

ConflictGraph build_conflict_graph(const BlockProgram& bp) {
  ConflictGraph g;
  build_conflict_graph(bp, g);
  return g;
}

void build_conflict_graph(const BlockProgram& bp, ConflictGraph& out) {
  const int k = bp.thread_count();
  out.thread_count = k;
  out.matrix.assign(static_cast<size_t>(k) * k, 0);
  for (int r = 1; r <= k; ++r)
    for (int w = 1; w <= k; ++w) {
      if (r == w) continue;
      if (block_conflicts(bp, bp.outer_ref(w), bp.outer_ref(r)))
        out.matrix[static_cast<size_t>(r - 1) * k + (w - 1)] = 1;
    }
}

Linearization topological_linearization(const ConflictGraph& g) {
  Linearization lin;
  topological_linearization(g, lin);
  return lin;
}

void topological_linearization(const ConflictGraph& g, Linearization& out) {
  const int k = g.thread_count;
  out.order.clear();
  out.cycle.clear();
  thread_local std::vector<int> indeg;
  indeg.assign(static_cast<size_t>(k), 0);
  for (int r = 1; r <= k; ++r)
    for (int w = 1; w <= k; ++w)
      if (r != w && g.edge(r, w)) ++indeg[w - 1];

  thread_local std::vector<char> removed;
  removed.assign(static_cast<size_t>(k), 0);
  out.order.reserve(k);
  for (int step = 0; step < k; ++step) {
    int pick = -1;
    for (int t = 1; t <= k; ++t)
      if (!removed[t - 1] && indeg[t - 1] == 0) {
        pick = t;
        break;
      }
    if (pick == -1) break;
    removed[pick - 1] = 1;
    out.order.push_back(pick);
    for (int w = 1; w <= k; ++w)
      if (w != pick && !removed[w - 1] && g.edge(pick, w)) --indeg[w - 1];
  }
  if (static_cast<int>(out.order.size()) == k) return;

  // Cycle: walk backwards along incoming edges within the residual (every
  // residual node has one), then cut the first repetition.
  thread_local std::vector<int> walk;
  thread_local std::vector<int> seen_at;
  walk.clear();
  seen_at.assign(static_cast<size_t>(k), -1);
  int cur = 0;
  while (cur < k && removed[cur]) ++cur;
  ++cur;  // 1-based
  for (;;) {
    if (seen_at[cur - 1] != -1) {
      const int from = seen_at[cur - 1];
      // walk[from..] is a backward cycle; reverse for forward edge order.
      out.order.clear();
      out.cycle.assign(walk.begin() + from, walk.end());
      std::reverse(out.cycle.begin(), out.cycle.end());
      return;
    }
    seen_at[cur - 1] = static_cast<int>(walk.size());
    walk.push_back(cur);
    int pred = -1;
    for (int r = 1; r <= k; ++r)
      if (r != cur && !removed[r - 1] && g.edge(r, cur)) {
        pred = r;
        break;
      }
    cur = pred;
  }
}

namespace {

struct PlacementScratch {
  std::vector<int> memory;
  std::vector<std::pair<int, int>> undo;
  std::vector<char> placed;
  std::vector<int> inner_done;
  std::vector<BlockRef> schedule;
};

// Reads of block b satisfied against memory, intra-block writes visible.
// Memory is restored before returning.
bool reads_enabled(const Program& p, const Block& b, PlacementScratch& s) {
  s.undo.clear();
  bool ok = true;
  const auto& cells = p.cells(b.thread);
  for (int i = b.lo; i <= b.hi; ++i) {
    const Program::Cell& c = cells[i];
    if (c.read) {
      if (s.memory[c.var] != c.val) {
        ok = false;
        break;
      }
    } else {
      s.undo.emplace_back(c.var, s.memory[c.var]);
      s.memory[c.var] = c.val;
    }
  }
  for (auto it = s.undo.rbegin(); it != s.undo.rend(); ++it)
    s.memory[it->first] = it->second;
  return ok;
}

void apply_writes(const Program& p, const Block& b, std::vector<int>& memory) {
  const auto& cells = p.cells(b.thread);
  for (int i = b.lo; i <= b.hi; ++i) {
    const Program::Cell& c = cells[i];
    if (!c.read) memory[c.var] = c.val;
  }
}

// Placement body without input validation; solve_one_writer builds valid
// permutations and linearizations by construction.
PlacementResult place_outer_blocks(const BlockProgram& bp,
                                   const std::vector<BlockRef>& inner_perm,
                                   const ConflictGraph& graph,
                                   const std::vector<int>& linearization) {
  const Program& p = bp.base();
  const int k = bp.thread_count();
  const int total_inner = bp.inner_count();

  thread_local PlacementScratch s;
  s.memory.assign(static_cast<size_t>(p.variable_count()), -1);
  s.placed.assign(static_cast<size_t>(k), 0);
  s.inner_done.assign(static_cast<size_t>(k), 0);
  s.schedule.clear();
  s.schedule.reserve(static_cast<size_t>(total_inner) + k);

  const int positions = total_inner;
  int placed_count = 0;
  for (int i = 0; i <= positions; ++i) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (int t : linearization) {
        if (s.placed[t - 1]) continue;
        if (s.inner_done[t - 1] != bp.inner_count(t)) continue;
        // conflict predecessors first: a reader waiting on a write must not
        // be overtaken by the writer's outer block
        bool blocked = false;
        for (int r = 1; r <= k && !blocked; ++r)
          blocked = r != t && !s.placed[r - 1] && graph.edge(r, t);
        if (blocked) continue;
        const Block& outer = bp.outer_block(t);
        if (!reads_enabled(p, outer, s)) continue;
        bool conflicts = false;
        for (int j = i; j < positions && !conflicts; ++j)
          conflicts = block_conflicts(bp, bp.outer_ref(t), inner_perm[j]);
        if (conflicts) continue;
        apply_writes(p, outer, s.memory);
        s.schedule.push_back(bp.outer_ref(t));
        s.placed[t - 1] = 1;
        ++placed_count;
        progress = true;
        break;
      }
    }
    if (i < positions) {
      const BlockRef ref = inner_perm[i];
      apply_writes(p, bp.block(ref), s.memory);
      ++s.inner_done[ref.thread - 1];
      s.schedule.push_back(ref);
    }
  }

  PlacementResult result;
  if (placed_count != k) {
    result.status = PlacementResult::Status::UnplacedBlock;
    for (int t : linearization)
      if (!s.placed[t - 1]) {
        result.unplaced_thread = t;
        break;
      }
    return result;
  }

  result.schedule.order = s.schedule;
  const Interleaving expansion = expand(bp, result.schedule);
  if (!is_sequentially_consistent(p, expansion)) {
    result.status = PlacementResult::Status::FinalCheckFailed;
    result.schedule.order.clear();
    return result;
  }
  result.status = PlacementResult::Status::Placed;
  return result;
}

}  // namespace

PlacementResult check_sc_placement(const BlockProgram& bp,
                                   const std::vector<BlockRef>& inner_perm,
                                   const ConflictGraph& graph,
                                   const std::vector<int>& linearization) {
  const int k = bp.thread_count();
  if (graph.thread_count != k)
    throw std::invalid_argument("conflict graph does not match the program");
  if (static_cast<int>(inner_perm.size()) != bp.inner_count())
    throw std::invalid_argument("inner permutation has wrong size");
  {
    thread_local std::vector<int> next_pos;
    next_pos.assign(static_cast<size_t>(k), 0);
    for (const BlockRef ref : inner_perm) {
      if (ref.thread < 1 || ref.thread > k || ref.position < 0 ||
          ref.position >= bp.inner_count(ref.thread))
        throw std::invalid_argument("inner permutation names a non-inner block");
      if (ref.position != next_pos[ref.thread - 1]++)
        throw std::invalid_argument(
            "inner permutation violates per-thread block order");
    }
    if (static_cast<int>(linearization.size()) != k)
      throw std::invalid_argument("linearization must cover every thread");
    thread_local std::vector<char> seen;
    seen.assign(static_cast<size_t>(k), 0);
    for (int t : linearization) {
      if (t < 1 || t > k || seen[t - 1])
        throw std::invalid_argument("linearization is not a thread permutation");
      seen[t - 1] = 1;
    }
  }
  return place_outer_blocks(bp, inner_perm, graph, linearization);
}

namespace {

// Deterministic enumeration of all interleavings of the threads' inner block
// sequences, ascending thread id first. Returns true when the callback stops.
template <typename Fn>
bool each_linear_extension(const BlockProgram& bp, std::vector<BlockRef>& perm,
                           std::vector<int>& taken, int depth, Fn&& fn) {
  if (depth == static_cast<int>(perm.size())) return fn(perm);
  for (int t = 1; t <= bp.thread_count(); ++t) {
    if (taken[t - 1] >= bp.inner_count(t)) continue;
    perm[depth] = BlockRef{t, taken[t - 1]};
    ++taken[t - 1];
    if (each_linear_extension(bp, perm, taken, depth + 1, fn)) return true;
    --taken[t - 1];
  }
  return false;
}

}  // namespace

std::optional<Interleaving> solve_one_writer(const Program& p, int pi,
                                             OneWriterStats* stats) {
  if (pi < 0) throw std::invalid_argument("preemption budget must be >= 0");
  thread_local std::vector<int> writer_of;
  writer_of.assign(static_cast<size_t>(p.variable_count()), 0);
  for (int t = 1; t <= p.thread_count(); ++t)
    for (const Program::Cell& c : p.cells(t)) {
      if (c.read) continue;
      if (writer_of[c.var] == 0)
        writer_of[c.var] = t;
      else if (writer_of[c.var] != t)
        throw std::invalid_argument("program is not 1-Writer: variable " +
                                    p.variables()[c.var] +
                                    " has multiple writers");
    }

  // Two exact rejections that need no enumeration.  A read of a pair that no
  // thread ever writes cannot be sourced in any complete interleaving.  A read
  // of a variable written only by the reader's own thread must be sourced by
  // the nearest earlier write in that thread, because program order pins every
  // own-thread write on one side of the read and no other write exists.
  {
    const int vals = p.value_count();
    thread_local std::vector<char> pair_written;
    pair_written.assign(static_cast<size_t>(p.variable_count() * vals), 0);
    for (int t = 1; t <= p.thread_count(); ++t)
      for (const Program::Cell& c : p.cells(t))
        if (!c.read) pair_written[static_cast<size_t>(c.var * vals + c.val)] = 1;
    thread_local std::vector<int> last_own;
    for (int t = 1; t <= p.thread_count(); ++t) {
      last_own.assign(static_cast<size_t>(p.variable_count()), -1);
      for (const Program::Cell& c : p.cells(t)) {
        if (!c.read) {
          last_own[c.var] = c.val;
          continue;
        }
        if (!pair_written[static_cast<size_t>(c.var * vals + c.val)])
          return std::nullopt;
        if (writer_of[c.var] == t && last_own[c.var] != c.val)
          return std::nullopt;
      }
    }
  }

  OneWriterStats local;
  OneWriterStats& st = stats ? *stats : local;

  std::vector<BlockRef> perm;
  std::vector<int> taken;
  PreemptionPointSet points;
  BlockProgram bp(p, {});
  ConflictGraph graph;
  Linearization lin;
  PointSetEnumerator sets(p, pi);
  while (sets.next_into(points)) {
    ++st.point_sets;
    bp.assign(p, points);
    build_conflict_graph(bp, graph);
    topological_linearization(graph, lin);
    if (!lin.acyclic()) continue;

    perm.assign(static_cast<size_t>(bp.inner_count()), BlockRef{});
    taken.assign(static_cast<size_t>(p.thread_count()), 0);
    std::optional<BlockInterleaving> found;
    each_linear_extension(bp, perm, taken, 0,
                          [&](const std::vector<BlockRef>& candidate) {
                            ++st.placements;
                            PlacementResult res = place_outer_blocks(
                                bp, candidate, graph, lin.order);
                            if (!res.ok()) return false;
                            found = std::move(res.schedule);
                            return true;
                          });
    if (found) {
      Interleaving witness = expand(bp, *found);
      if (!is_sequentially_consistent(p, witness) ||
          count_preemptions(p, witness) > pi)
        throw std::logic_error("internal error: placement produced an invalid witness");
      return witness;
    }
  }
  return std::nullopt;
}

}  // namespace vscp
