#pragma once

#include <cstdint>
#include <optional>

#include "vscp/trace.hpp"

namespace vscp {

enum class ExactStatus { Sat, Unsat, BudgetExceeded };

struct ExactOptions {
  /// Cap on distinct search states; exceeding it aborts with BudgetExceeded.
  uint64_t state_budget = 10'000'000;
  /// Disabling the memo table never changes the verdict, only the cost.
  bool use_memo = true;
  /// Forces the general bounded-preemption search even when a specialized
  /// mode (whole-thread scheduling at pi = 0, preemption-free keys when the
  /// budget cannot bind) applies.
  bool force_general = false;
};

struct ExactResult {
  ExactStatus status{ExactStatus::Unsat};
  std::optional<Interleaving> witness;  // present iff status == Sat
  uint64_t states_explored{0};
};

/// Decides the bounded-preemption problem for arbitrary programs by
/// depth-first search over prefixes, memoizing failed states keyed on
/// (per-thread positions, running thread, preemptions used, memory).
///
/// Search order is deterministic: continue the running thread first, then
/// ascending thread ids. A read is only scheduled when memory holds its
/// value, a switch away from an unfinished thread only while the preemption
/// budget allows. Witnesses are re-validated before being returned.
///
/// pi >= event_count - thread_count always suffices: no complete interleaving
/// has more preemptions than that, so larger budgets cannot bind and the
/// search drops the budget from the state key.
///
/// Throws std::invalid_argument when pi < 0.
ExactResult solve_exact(const Program& p, int pi, const ExactOptions& opts = {});

struct EnumerationResult {
  uint64_t count{0};
  std::optional<Interleaving> witness;  // first found in DFS order
};

/// Counts every sequentially consistent complete interleaving with at most
/// `pi` preemptions by exhaustive enumeration over next-event choices,
/// pruning prefixes that already violate sequential consistency or the
/// preemption budget (both prefix-monotone, so pruning is exact).
///
/// `max_count` > 0 stops the enumeration once that many interleavings have
/// been found; the count saturates there but existence stays exact. 0 counts
/// everything.
///
/// Independent of solve_one_writer and solve_exact; serves as their oracle.
/// Throws std::invalid_argument when pi < 0 or event_count > event_cap.
EnumerationResult enumerate_all(const Program& p, int pi, int event_cap = 12,
                                uint64_t max_count = 0);

}  // namespace vscp
