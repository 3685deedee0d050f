#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vscp {

enum class OpKind : uint8_t { Read, Write };

/// A single memory operation: read or write of a value on a variable.
/// Variables and values are opaque non-empty tokens.
struct Operation {
  OpKind kind{OpKind::Read};
  std::string variable;
  std::string value;

  friend bool operator==(const Operation&, const Operation&) = default;
};

/// Identifies one event of a program: thread ids are 1..k, indices are
/// 0-based positions within the thread.
struct EventRef {
  int thread{0};
  int index{0};

  friend constexpr auto operator<=>(const EventRef&, const EventRef&) = default;
};

struct Event {
  int thread{0};
  int index{0};
  Operation op;

  friend bool operator==(const Event&, const Event&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(message), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Thrown when an Interleaving handed to a checker violates its invariants
/// (duplicates, unknown events, program-order violation).
class InterleavingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An immutable multi-threaded history: k non-empty event sequences.
///
/// Construction normalizes thread ids to 1..k in the order the threads are
/// given; original labels are retained for reporting. Variable and value
/// tokens are interned so solvers can work on dense integer ids.
class Program {
 public:
  /// `thread_ops[i]` becomes thread i+1. Labels default to "T1".."Tk".
  /// Throws std::invalid_argument on empty programs, empty threads, empty
  /// tokens, or duplicate labels.
  explicit Program(std::vector<std::vector<Operation>> thread_ops,
                   std::vector<std::string> labels = {});

  int thread_count() const { return static_cast<int>(threads_.size()); }
  int event_count() const { return total_events_; }
  int thread_length(int thread) const {
    return static_cast<int>(events_of(thread).size());
  }

  const std::vector<Event>& thread_events(int thread) const {
    return events_of(thread);
  }
  bool contains(EventRef ref) const {
    return ref.thread >= 1 && ref.thread <= thread_count() && ref.index >= 0 &&
           ref.index < thread_length(ref.thread);
  }
  const Event& event(EventRef ref) const;
  /// True iff `ref` is the final event of its thread.
  bool is_last_event(EventRef ref) const {
    return contains(ref) && ref.index == thread_length(ref.thread) - 1;
  }

  const std::string& label(int thread) const { return labels_.at(thread - 1); }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Thread id for a label, or -1 when the label is unknown.
  int thread_by_label(std::string_view label) const;

  const std::vector<std::string>& variables() const { return var_names_; }
  const std::vector<std::string>& values() const { return val_names_; }
  int variable_count() const { return static_cast<int>(var_names_.size()); }
  int value_count() const { return static_cast<int>(val_names_.size()); }

  /// Dense per-event view used by the solvers.
  struct Cell {
    bool read;
    int var;
    int val;
  };
  const Cell& cell(int thread, int index) const {
    return cells_[thread - 1][index];
  }
  const std::vector<Cell>& cells(int thread) const { return cells_[thread - 1]; }

  friend bool operator==(const Program& a, const Program& b);

 private:
  const std::vector<Event>& events_of(int thread) const {
    if (thread < 1 || thread > thread_count())
      throw std::out_of_range("unknown thread id " + std::to_string(thread));
    return threads_[thread - 1];
  }

  std::vector<std::vector<Event>> threads_;
  std::vector<std::vector<Cell>> cells_;
  std::vector<std::string> labels_;
  std::vector<std::string> var_names_;
  std::vector<std::string> val_names_;
  int total_events_ = 0;
};

/// A global ordering of (a subset of) a program's events. A complete
/// interleaving contains every event exactly once.
struct Interleaving {
  std::vector<EventRef> order;

  friend bool operator==(const Interleaving&, const Interleaving&) = default;
};

/// Per-variable count of distinct writer threads.
struct WriterClass {
  std::map<std::string, int> per_variable;
  int max_writers{0};
};

struct Violation {
  std::string message;
  int position{-1};
};

/// Parses the one-event-per-line trace format:
///   <thread-label> ":" ("r" | "w") <variable> <value>
/// '#' starts a comment line; blank lines are ignored. Threads are ordered by
/// first appearance. Throws ParseError with 1-based line/column.
Program parse_program(std::string_view text);

/// Inverse of parse_program; parse_program(serialize_program(p)) == p.
std::string serialize_program(const Program& p);

/// Counts, per variable, the distinct threads writing it. max_writers is 0
/// for write-free programs; a program is 1-Writer iff max_writers <= 1.
WriterClass classify_writers(const Program& p);

/// Checks duplicates, unknown references and per-thread order; with
/// `require_complete` also that every event occurs. Returns the first
/// violation found, or nullopt.
std::optional<Violation> validate_interleaving(const Program& p,
                                               const Interleaving& s,
                                               bool require_complete = false);

/// True iff every read r(x,d) in `s` is preceded by a write w(x,d) with no
/// differently-valued write on x in between. Reads before any write on their
/// variable fail; there are no implicit initial values. Throws
/// InterleavingError when `s` is not a valid (partial) interleaving of `p`.
bool is_sequentially_consistent(const Program& p, const Interleaving& s);

/// Number of positions j where order[j] and order[j+1] belong to different
/// threads and order[j] is not the last event of its thread. Switching away
/// from a finished thread is not a preemption.
int count_preemptions(const Program& p, const Interleaving& s);

}  // namespace vscp
