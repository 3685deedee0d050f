#include "vscp/exact.hpp"

#include <string>
#include <unordered_set>
#include <vector>

namespace vscp {

namespace {

enum class Outcome { Found, Exhausted, Aborted };

void encode_u16(std::string& s, int v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

struct GeneralSearch {
  const Program& p;
  int k;
  int pi;
  bool use_memo;
  bool keyed_on_budget;  // false when the budget provably cannot bind
  uint64_t budget;
  uint64_t states = 0;
  int remaining;
  std::vector<int> pos;
  std::vector<int> memory;
  std::vector<EventRef> path;
  std::unordered_set<std::string> memo;
  std::string key;

  explicit GeneralSearch(const Program& prog, int budget_pi,
                         const ExactOptions& opts, bool keyed)
      : p(prog),
        k(prog.thread_count()),
        pi(budget_pi),
        use_memo(opts.use_memo),
        keyed_on_budget(keyed),
        budget(opts.state_budget),
        remaining(prog.event_count()),
        pos(static_cast<size_t>(prog.thread_count()), 0),
        memory(static_cast<size_t>(prog.variable_count()), -1) {
    path.reserve(static_cast<size_t>(prog.event_count()));
  }

  void make_key(int last, int preempts) {
    key.clear();
    for (int t = 0; t < k; ++t) encode_u16(key, pos[t]);
    if (keyed_on_budget) {
      encode_u16(key, last);
      encode_u16(key, preempts);
    }
    for (int v : memory) encode_u16(key, v + 1);
  }

  Outcome try_thread(int t, int last, int preempts) {
    const int at = pos[t - 1];
    if (at == p.thread_length(t)) return Outcome::Exhausted;
    const bool preempting =
        last != 0 && t != last && pos[last - 1] < p.thread_length(last);
    if (keyed_on_budget && preempting && preempts + 1 > pi)
      return Outcome::Exhausted;
    const Program::Cell& c = p.cell(t, at);
    if (c.read && memory[c.var] != c.val) return Outcome::Exhausted;

    const int saved = c.read ? 0 : memory[c.var];
    if (!c.read) memory[c.var] = c.val;
    ++pos[t - 1];
    --remaining;
    path.push_back(EventRef{t, at});
    const Outcome r = dfs(t, preempts + (preempting ? 1 : 0));
    if (r == Outcome::Found) return r;  // path keeps the witness
    path.pop_back();
    ++remaining;
    --pos[t - 1];
    if (!c.read) memory[c.var] = saved;
    return r;
  }

  Outcome dfs(int last, int preempts) {
    if (remaining == 0) return Outcome::Found;
    if (use_memo) {
      make_key(last, preempts);
      if (memo.contains(key)) return Outcome::Exhausted;
    }
    if (++states > budget) return Outcome::Aborted;

    // continue the running thread first, then ascending ids
    if (last != 0) {
      const Outcome r = try_thread(last, last, preempts);
      if (r != Outcome::Exhausted) return r;
    }
    for (int t = 1; t <= k; ++t) {
      if (t == last) continue;
      const Outcome r = try_thread(t, last, preempts);
      if (r != Outcome::Exhausted) return r;
    }
    if (use_memo) {
      make_key(last, preempts);  // children clobbered the shared buffer
      memo.insert(key);
    }
    return Outcome::Exhausted;
  }
};

struct AtomicSearch {
  const Program& p;
  int k;
  bool use_memo;
  uint64_t budget;
  uint64_t states = 0;
  uint64_t done_mask = 0;
  uint64_t full_mask;
  std::vector<int> memory;
  std::vector<int> order;
  std::vector<std::pair<int, int>> undo;
  std::unordered_set<std::string> memo;
  std::string key;

  explicit AtomicSearch(const Program& prog, const ExactOptions& opts)
      : p(prog),
        k(prog.thread_count()),
        use_memo(opts.use_memo),
        budget(opts.state_budget),
        full_mask(k == 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1),
        memory(static_cast<size_t>(prog.variable_count()), -1) {
    order.reserve(static_cast<size_t>(k));
  }

  void make_key() {
    key.clear();
    for (int i = 0; i < 8; ++i)
      key.push_back(static_cast<char>((done_mask >> (8 * i)) & 0xff));
    for (int v : memory) encode_u16(key, v + 1);
  }

  Outcome dfs() {
    if (done_mask == full_mask) return Outcome::Found;
    if (use_memo) {
      make_key();
      if (memo.contains(key)) return Outcome::Exhausted;
    }
    if (++states > budget) return Outcome::Aborted;

    for (int t = 1; t <= k; ++t) {
      if (done_mask & (uint64_t{1} << (t - 1))) continue;
      // the undo log is shared across frames; restore down to our mark
      const size_t mark = undo.size();
      bool ok = true;
      for (const Program::Cell& c : p.cells(t)) {
        if (c.read) {
          if (memory[c.var] != c.val) {
            ok = false;
            break;
          }
        } else {
          undo.emplace_back(c.var, memory[c.var]);
          memory[c.var] = c.val;
        }
      }
      Outcome r = Outcome::Exhausted;
      if (ok) {
        done_mask |= uint64_t{1} << (t - 1);
        order.push_back(t);
        r = dfs();
        if (r == Outcome::Found) return r;
        order.pop_back();
        done_mask &= ~(uint64_t{1} << (t - 1));
      }
      while (undo.size() > mark) {
        memory[undo.back().first] = undo.back().second;
        undo.pop_back();
      }
      if (r == Outcome::Aborted) return r;
    }
    if (use_memo) {
      make_key();
      memo.insert(key);
    }
    return Outcome::Exhausted;
  }
};

}  // namespace

ExactResult solve_exact(const Program& p, int pi, const ExactOptions& opts) {
  if (pi < 0) throw std::invalid_argument("preemption budget must be >= 0");
  const int n = p.event_count();
  const int k = p.thread_count();
  // No complete interleaving exceeds n - k preemptions (only switches away
  // from an unfinished thread count), so beyond that the budget cannot bind.
  const bool unbounded = pi >= n - k;

  ExactResult result;
  Interleaving witness;
  Outcome outcome;

  if (!opts.force_general && pi == 0 && k <= 64) {
    AtomicSearch search(p, opts);
    outcome = search.dfs();
    result.states_explored = search.states;
    if (outcome == Outcome::Found)
      for (int t : search.order)
        for (int i = 0; i < p.thread_length(t); ++i)
          witness.order.push_back(EventRef{t, i});
  } else {
    const bool keyed = !unbounded || opts.force_general;
    GeneralSearch search(p, pi, opts, keyed);
    outcome = search.dfs(0, 0);
    result.states_explored = search.states;
    if (outcome == Outcome::Found) witness.order = std::move(search.path);
  }

  switch (outcome) {
    case Outcome::Found: {
      if (!is_sequentially_consistent(p, witness) ||
          count_preemptions(p, witness) > pi)
        throw std::logic_error("internal error: search produced an invalid witness");
      result.status = ExactStatus::Sat;
      result.witness = std::move(witness);
      break;
    }
    case Outcome::Exhausted:
      result.status = ExactStatus::Unsat;
      break;
    case Outcome::Aborted:
      result.status = ExactStatus::BudgetExceeded;
      break;
  }
  return result;
}

namespace {

struct Enumerator {
  const Program& p;
  int k;
  int pi;
  int remaining;
  uint64_t count = 0;
  uint64_t limit;  // 0 means unbounded
  std::vector<int> pos;
  std::vector<int> memory;
  std::vector<EventRef> path;
  std::optional<Interleaving> witness;

  Enumerator(const Program& prog, int budget_pi, uint64_t max_count)
      : p(prog),
        k(prog.thread_count()),
        pi(budget_pi),
        remaining(prog.event_count()),
        limit(max_count),
        pos(static_cast<size_t>(prog.thread_count()), 0),
        memory(static_cast<size_t>(prog.variable_count()), -1) {
    path.reserve(static_cast<size_t>(prog.event_count()));
  }

  bool saturated() const { return limit != 0 && count >= limit; }

  void dfs(int last, int preempts) {
    if (remaining == 0) {
      ++count;
      if (!witness) witness = Interleaving{path};
      return;
    }
    for (int t = 1; t <= k; ++t) {
      const int at = pos[t - 1];
      if (at == p.thread_length(t)) continue;
      const bool preempting =
          last != 0 && t != last && pos[last - 1] < p.thread_length(last);
      if (preempting && preempts + 1 > pi) continue;
      const Program::Cell& c = p.cell(t, at);
      if (c.read && memory[c.var] != c.val) continue;
      const int saved = c.read ? 0 : memory[c.var];
      if (!c.read) memory[c.var] = c.val;
      ++pos[t - 1];
      --remaining;
      path.push_back(EventRef{t, at});
      dfs(t, preempts + (preempting ? 1 : 0));
      path.pop_back();
      ++remaining;
      --pos[t - 1];
      if (!c.read) memory[c.var] = saved;
      if (saturated()) return;
    }
  }
};

}  // namespace

EnumerationResult enumerate_all(const Program& p, int pi, int event_cap,
                                uint64_t max_count) {
  if (pi < 0) throw std::invalid_argument("preemption budget must be >= 0");
  if (p.event_count() > event_cap)
    throw std::invalid_argument(
        "enumeration cap exceeded: " + std::to_string(p.event_count()) +
        " events > cap " + std::to_string(event_cap));
  Enumerator e(p, pi, max_count);
  e.dfs(0, 0);
  EnumerationResult result;
  result.count = e.count;
  result.witness = std::move(e.witness);
  return result;
}

}  // namespace vscp
