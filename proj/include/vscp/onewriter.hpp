#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vscp/blocks.hpp"
#include "vscp/trace.hpp"

namespace vscp {

/// Read-after-write conflicts between outer blocks, one node per thread.
/// edge(r, w) set means the reader thread's outer block must be scheduled
/// before the writer thread's outer block.
struct ConflictGraph {
  int thread_count{0};
  std::vector<uint8_t> matrix;  // row-major, matrix[(r-1)*k + (w-1)]

  bool edge(int reader_thread, int writer_thread) const {
    return matrix[static_cast<size_t>(reader_thread - 1) * thread_count +
                  (writer_thread - 1)] != 0;
  }
};

/// True iff the blocks belong to different threads and some read r(x,d) in
/// `reader` sees a different value than the last write on x in `writer`.
/// Only the last write per variable matters: earlier writes in `writer` are
/// overwritten before any later block runs.
bool block_conflicts(const BlockProgram& bp, BlockRef writer, BlockRef reader);

/// Conflict edges between all pairs of outer blocks.
ConflictGraph build_conflict_graph(const BlockProgram& bp);

/// Same, writing into `out` (reusing its buffer).
void build_conflict_graph(const BlockProgram& bp, ConflictGraph& out);

/// Result of ordering the conflict graph: `order` is the unique Kahn
/// linearization with ascending-thread-id tie-breaking when acyclic;
/// otherwise `cycle` holds one directed cycle (thread ids).
struct Linearization {
  std::vector<int> order;
  std::vector<int> cycle;

  bool acyclic() const { return cycle.empty(); }
};

Linearization topological_linearization(const ConflictGraph& g);

/// Same, writing into `out` (reusing its buffers).
void topological_linearization(const ConflictGraph& g, Linearization& out);

/// Outcome of one placement attempt.
struct PlacementResult {
  enum class Status { Placed, UnplacedBlock, FinalCheckFailed };

  Status status{Status::UnplacedBlock};
  BlockInterleaving schedule;  // complete block order when Placed
  int unplaced_thread{-1};     // set when UnplacedBlock

  bool ok() const { return status == Status::Placed; }
};

/// Weaves the outer blocks into a fixed inner-block order.
///
/// `inner_perm` must be a linear extension of per-thread inner-block order
/// over all inner blocks, `graph` the conflict graph over the outer blocks,
/// and `linearization` a permutation of all thread ids (all checked;
/// std::invalid_argument otherwise).
///
/// Positions run 0..|inner_perm|; at each position the earliest thread in
/// `linearization` whose outer block is enabled is placed, repeatedly, then
/// the next inner block is appended and its writes applied regardless of its
/// reads. An outer block is enabled when (a) all earlier blocks of its thread
/// are already scheduled, (b) its reads are satisfied against current memory
/// with its own earlier writes visible, (c) it does not conflict, as writer,
/// with any inner block not yet appended, and (d) every outer block that the
/// conflict graph orders before it is already placed. Without (d) a read-free
/// outer block could jump ahead of a reader that is waiting on a write still
/// to come, clobbering the value the reader needs. A full sequential
/// consistency check of the expansion decides the final status.
PlacementResult check_sc_placement(const BlockProgram& bp,
                                   const std::vector<BlockRef>& inner_perm,
                                   const ConflictGraph& graph,
                                   const std::vector<int>& linearization);

struct OneWriterStats {
  uint64_t point_sets{0};
  uint64_t placements{0};
};

/// Decides whether a 1-Writer program has a sequentially consistent complete
/// interleaving with at most `pi` preemptions; returns a verified witness or
/// nullopt.
///
/// Point sets are tried in nondecreasing size order; sets whose conflict
/// graph is cyclic are skipped; for each surviving set every linear extension
/// of the inner blocks is handed to check_sc_placement. The first successful
/// placement is expanded, re-checked against the program (sequential
/// consistency and preemption count), and returned.
///
/// Throws std::invalid_argument when the program is not 1-Writer or pi < 0.
std::optional<Interleaving> solve_one_writer(const Program& p, int pi,
                                             OneWriterStats* stats = nullptr);

}  // namespace vscp
