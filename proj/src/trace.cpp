#include "vscp/trace.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace vscp {

namespace {

// Token universes stay small, so a linear scan beats a per-program hash map.
int intern(std::vector<std::string>& names, const std::string& token) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == token) return static_cast<int>(i);
  names.push_back(token);
  return static_cast<int>(names.size()) - 1;
}

}  // namespace

Program::Program(std::vector<std::vector<Operation>> thread_ops,
                 std::vector<std::string> labels) {
  if (thread_ops.empty())
    throw std::invalid_argument("a program needs at least one thread");
  if (!labels.empty() && labels.size() != thread_ops.size())
    throw std::invalid_argument("label count does not match thread count");

  const int k = static_cast<int>(thread_ops.size());
  if (labels.empty()) {
    labels.reserve(k);
    for (int t = 1; t <= k; ++t) labels.push_back("T" + std::to_string(t));
  }
  for (int t = 0; t < k; ++t) {
    const std::string& label = labels[t];
    if (label.empty()) throw std::invalid_argument("empty thread label");
    for (int u = 0; u < t; ++u)
      if (labels[u] == label)
        throw std::invalid_argument("duplicate thread label: " + label);
  }
  labels_ = std::move(labels);

  threads_.resize(k);
  cells_.resize(k);
  for (int t = 0; t < k; ++t) {
    auto& ops = thread_ops[t];
    if (ops.empty())
      throw std::invalid_argument("thread " + labels_[t] + " is empty");
    threads_[t].reserve(ops.size());
    cells_[t].reserve(ops.size());
    for (size_t i = 0; i < ops.size(); ++i) {
      Operation& op = ops[i];
      if (op.variable.empty() || op.value.empty())
        throw std::invalid_argument("empty variable or value token");
      const int var = intern(var_names_, op.variable);
      const int val = intern(val_names_, op.value);
      cells_[t].push_back(Cell{op.kind == OpKind::Read, var, val});
      threads_[t].push_back(
          Event{t + 1, static_cast<int>(i), std::move(op)});
      ++total_events_;
    }
  }
}

const Event& Program::event(EventRef ref) const {
  if (!contains(ref))
    throw std::out_of_range("unknown event (" + std::to_string(ref.thread) +
                            ", " + std::to_string(ref.index) + ")");
  return threads_[ref.thread - 1][ref.index];
}

int Program::thread_by_label(std::string_view label) const {
  for (size_t t = 0; t < labels_.size(); ++t)
    if (labels_[t] == label) return static_cast<int>(t) + 1;
  return -1;
}

bool operator==(const Program& a, const Program& b) {
  return a.labels_ == b.labels_ && a.threads_ == b.threads_;
}

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

Program parse_program(std::string_view text) {
  std::vector<std::vector<Operation>> threads;
  std::vector<std::string> labels;
  std::unordered_map<std::string, size_t> slot_by_label;

  int line_no = 0;
  size_t start = 0;
  bool saw_any = false;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;

    size_t b = 0;
    while (b < line.size() && is_space(line[b])) ++b;
    size_t e = line.size();
    while (e > b && is_space(line[e - 1])) --e;
    std::string_view body = line.substr(b, e - b);

    if (!body.empty() && body[0] != '#') {
      size_t colon = body.find(':');
      if (colon == std::string_view::npos)
        throw ParseError("expected '<label>: <op> <var> <value>'", line_no, 1);
      std::string label(body.substr(0, colon));
      while (!label.empty() && is_space(label.back())) label.pop_back();
      if (label.empty())
        throw ParseError("empty thread label", line_no, 1);
      if (label.find_first_of(" \t") != std::string::npos)
        throw ParseError("thread label contains whitespace", line_no, 1);

      std::string_view rest = body.substr(colon + 1);
      std::vector<std::string> tokens;
      size_t i = 0;
      while (i < rest.size()) {
        while (i < rest.size() && is_space(rest[i])) ++i;
        size_t j = i;
        while (j < rest.size() && !is_space(rest[j])) ++j;
        if (j > i) tokens.emplace_back(rest.substr(i, j - i));
        i = j;
      }
      const int col = static_cast<int>(b + colon + 2);
      if (tokens.size() != 3)
        throw ParseError("expected '<op> <var> <value>' after ':'", line_no,
                         col);
      OpKind kind;
      if (tokens[0] == "r")
        kind = OpKind::Read;
      else if (tokens[0] == "w")
        kind = OpKind::Write;
      else
        throw ParseError("operation must be 'r' or 'w', got '" + tokens[0] +
                             "'",
                         line_no, col);

      auto [it, inserted] = slot_by_label.emplace(label, threads.size());
      if (inserted) {
        threads.emplace_back();
        labels.push_back(label);
      }
      threads[it->second].push_back(
          Operation{kind, std::move(tokens[1]), std::move(tokens[2])});
      saw_any = true;
    }

    if (end == text.size()) break;
    start = end + 1;
  }

  if (!saw_any) throw ParseError("no events in input", line_no, 1);
  return Program(std::move(threads), std::move(labels));
}

std::string serialize_program(const Program& p) {
  std::string out;
  for (int t = 1; t <= p.thread_count(); ++t) {
    for (const Event& ev : p.thread_events(t)) {
      out += p.label(t);
      out += ": ";
      out += ev.op.kind == OpKind::Read ? 'r' : 'w';
      out += ' ';
      out += ev.op.variable;
      out += ' ';
      out += ev.op.value;
      out += '\n';
    }
  }
  return out;
}

WriterClass classify_writers(const Program& p) {
  WriterClass result;
  // writers[v] is a bitset over threads for small k, falling back to a
  // vector<bool> per variable otherwise.
  const int k = p.thread_count();
  std::vector<std::vector<char>> writers(
      p.variable_count(), std::vector<char>(static_cast<size_t>(k), 0));
  for (int t = 1; t <= k; ++t)
    for (const Program::Cell& c : p.cells(t))
      if (!c.read) writers[c.var][t - 1] = 1;
  for (int v = 0; v < p.variable_count(); ++v) {
    int count = 0;
    for (char f : writers[v]) count += f != 0;
    result.per_variable.emplace(p.variables()[v], count);
    result.max_writers = std::max(result.max_writers, count);
  }
  return result;
}

std::optional<Violation> validate_interleaving(const Program& p,
                                               const Interleaving& s,
                                               bool require_complete) {
  std::vector<int> next(static_cast<size_t>(p.thread_count()), 0);
  for (size_t j = 0; j < s.order.size(); ++j) {
    const EventRef ref = s.order[j];
    if (!p.contains(ref))
      return Violation{"unknown event (" + std::to_string(ref.thread) + ", " +
                           std::to_string(ref.index) + ")",
                       static_cast<int>(j)};
    int& expect = next[ref.thread - 1];
    if (ref.index < expect)
      return Violation{"event (" + std::to_string(ref.thread) + ", " +
                           std::to_string(ref.index) + ") repeated",
                       static_cast<int>(j)};
    if (ref.index > expect)
      return Violation{"thread " + p.label(ref.thread) +
                           " skips index " + std::to_string(expect),
                       static_cast<int>(j)};
    ++expect;
  }
  if (require_complete)
    for (int t = 1; t <= p.thread_count(); ++t)
      if (next[t - 1] != p.thread_length(t))
        return Violation{"thread " + p.label(t) + " incomplete", -1};
  return std::nullopt;
}

namespace {

void require_valid(const Program& p, const Interleaving& s) {
  if (auto v = validate_interleaving(p, s))
    throw InterleavingError(v->message);
}

}  // namespace

bool is_sequentially_consistent(const Program& p, const Interleaving& s) {
  require_valid(p, s);
  // memory[v] is the value id of the latest write on v, -1 before any write.
  thread_local std::vector<int> memory;
  memory.assign(static_cast<size_t>(p.variable_count()), -1);
  for (const EventRef ref : s.order) {
    const Program::Cell& c = p.cell(ref.thread, ref.index);
    if (c.read) {
      if (memory[c.var] != c.val) return false;
    } else {
      memory[c.var] = c.val;
    }
  }
  return true;
}

int count_preemptions(const Program& p, const Interleaving& s) {
  require_valid(p, s);
  int count = 0;
  for (size_t j = 0; j + 1 < s.order.size(); ++j) {
    const EventRef cur = s.order[j];
    if (s.order[j + 1].thread != cur.thread && !p.is_last_event(cur)) ++count;
  }
  return count;
}

}  // namespace vscp
