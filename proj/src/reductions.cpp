#include "vscp/reductions.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace vscp {

namespace {

struct TokenStream {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  char comment;
  bool line_start = true;  // comments only start at the head of a line

  explicit TokenStream(std::string_view t, char comment_char)
      : text(t), comment(comment_char) {}

  std::optional<std::string_view> next() {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '\n') {
        ++line;
        ++pos;
        line_start = true;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos;
      } else if (c == comment && line_start) {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        line_start = false;
        const size_t start = pos;
        while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' &&
               text[pos] != '\r' && text[pos] != '\n')
          ++pos;
        return text.substr(start, pos - start);
      }
    }
    return std::nullopt;
  }
};

int parse_int(std::string_view token, int line, const char* what) {
  int value = 0;
  bool negative = false;
  size_t i = 0;
  if (i < token.size() && (token[i] == '-' || token[i] == '+')) {
    negative = token[i] == '-';
    ++i;
  }
  if (i == token.size())
    throw ParseError(std::string("expected ") + what + ", got '" +
                         std::string(token) + "'",
                     line, 1);
  for (; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9')
      throw ParseError(std::string("expected ") + what + ", got '" +
                           std::string(token) + "'",
                       line, 1);
    value = value * 10 + (token[i] - '0');
    if (value < 0) throw ParseError("integer overflow", line, 1);
  }
  return negative ? -value : value;
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  TokenStream ts(text, 'c');
  auto tok = ts.next();
  if (!tok || *tok != "p")
    throw ParseError("expected 'p cnf <vars> <clauses>' header", ts.line, 1);
  tok = ts.next();
  if (!tok || *tok != "cnf")
    throw ParseError("expected 'cnf' after 'p'", ts.line, 1);
  tok = ts.next();
  if (!tok) throw ParseError("missing variable count", ts.line, 1);
  const int num_vars = parse_int(*tok, ts.line, "variable count");
  tok = ts.next();
  if (!tok) throw ParseError("missing clause count", ts.line, 1);
  const int num_clauses = parse_int(*tok, ts.line, "clause count");
  if (num_vars < 0 || num_clauses < 0)
    throw ParseError("negative header counts", ts.line, 1);

  CnfFormula f;
  f.num_vars = num_vars;
  f.clauses.reserve(static_cast<size_t>(num_clauses));
  for (int j = 0; j < num_clauses; ++j) {
    std::array<int, 3> clause{};
    int got = 0;
    for (;;) {
      tok = ts.next();
      if (!tok)
        throw ParseError("clause " + std::to_string(j + 1) +
                             " not terminated by 0",
                         ts.line, 1);
      const int lit = parse_int(*tok, ts.line, "literal");
      if (lit == 0) break;
      if (got == 3)
        throw ParseError("clause " + std::to_string(j + 1) +
                             " has more than three literals",
                         ts.line, 1);
      const int var = lit < 0 ? -lit : lit;
      if (var > num_vars)
        throw ParseError("literal " + std::to_string(lit) +
                             " out of range (header declares " +
                             std::to_string(num_vars) + " variables)",
                         ts.line, 1);
      clause[static_cast<size_t>(got++)] = lit;
    }
    if (got != 3)
      throw ParseError("clause " + std::to_string(j + 1) +
                           " has fewer than three literals",
                       ts.line, 1);
    f.clauses.push_back(clause);
  }
  if (ts.next())
    throw ParseError("trailing input after the declared clauses", ts.line, 1);
  return f;
}

UndirectedGraph parse_edge_list(std::string_view text) {
  TokenStream ts(text, '#');
  auto tok = ts.next();
  if (!tok) throw ParseError("missing vertex count", ts.line, 1);
  const int vertex_count = parse_int(*tok, ts.line, "vertex count");
  if (vertex_count < 1)
    throw ParseError("vertex count must be at least 1", ts.line, 1);

  std::set<std::pair<int, int>> edges;
  for (;;) {
    tok = ts.next();
    if (!tok) break;
    const int u = parse_int(*tok, ts.line, "vertex");
    tok = ts.next();
    if (!tok) throw ParseError("edge is missing its second vertex", ts.line, 1);
    const int v = parse_int(*tok, ts.line, "vertex");
    if (u < 1 || u > vertex_count || v < 1 || v > vertex_count)
      throw ParseError("edge (" + std::to_string(u) + ", " +
                           std::to_string(v) + ") out of range",
                       ts.line, 1);
    if (u == v)
      throw ParseError("self-loop at vertex " + std::to_string(u), ts.line, 1);
    edges.emplace(std::min(u, v), std::max(u, v));
  }
  UndirectedGraph g;
  g.vertex_count = vertex_count;
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

namespace {

Operation read(std::string var, std::string val) {
  return Operation{OpKind::Read, std::move(var), std::move(val)};
}
Operation write(std::string var, std::string val) {
  return Operation{OpKind::Write, std::move(var), std::move(val)};
}

std::string var_v(int i) { return "v" + std::to_string(i); }
std::string var_c(int j) { return "c" + std::to_string(j); }
std::string var_d(int j) { return "d" + std::to_string(j); }

int lit_var(int lit) { return lit < 0 ? -lit : lit; }

/// Clause indices (1-based, ascending, unique) where `lit` occurs in any of
/// the given slots. slots is a bitmask over literal positions 0..2.
std::vector<int> clauses_of(const CnfFormula& f, int lit, unsigned slots) {
  std::vector<int> out;
  for (size_t j = 0; j < f.clauses.size(); ++j)
    for (int s = 0; s < 3; ++s)
      if ((slots & (1u << s)) && f.clauses[j][static_cast<size_t>(s)] == lit) {
        out.push_back(static_cast<int>(j) + 1);
        break;
      }
  return out;
}

/// The shared guess/guard machinery of both SAT encodings: for each formula
/// variable i, two value-writer threads (set<i>0 / set<i>1) with their guard
/// readers (chk<i>0 / chk<i>1), then the two literal threads. The literal
/// threads' write lists are encoding-specific and supplied by `literal_ops`.
template <typename LiteralOps>
void build_sat_threads(const CnfFormula& f,
                       std::vector<std::vector<Operation>>& threads,
                       std::vector<std::string>& labels,
                       std::map<std::string, std::string>& roles,
                       LiteralOps&& literal_ops) {
  for (int i = 1; i <= f.num_vars; ++i) {
    const std::string si = std::to_string(i);
    for (int bit = 0; bit <= 1; ++bit) {
      const std::string sb = std::to_string(bit);
      labels.push_back("set" + si + "_" + sb);
      roles[labels.back()] = "writes guess v" + si + " := " + sb;
      threads.push_back({write(var_v(i), sb)});
      labels.push_back("chk" + si + "_" + sb);
      roles[labels.back()] =
          "checks v" + si + " still holds " + sb + " once x is raised";
      threads.push_back({read("x", "1"), read(var_v(i), sb)});
    }
    labels.push_back("pos" + si);
    roles[labels.back()] = "literal x" + si + ": stamps its clauses when v" +
                           si + " = 1";
    std::vector<Operation> ops{read(var_v(i), "1")};
    literal_ops(i, ops);
    threads.push_back(std::move(ops));

    labels.push_back("neg" + si);
    roles[labels.back()] = "literal !x" + si + ": stamps its clauses when v" +
                           si + " = 0";
    ops = {read(var_v(i), "0")};
    literal_ops(-i, ops);
    threads.push_back(std::move(ops));
  }
}

}  // namespace

ReductionOutput sat3_to_3writer(const CnfFormula& f) {
  std::vector<std::vector<Operation>> threads;
  std::vector<std::string> labels;
  std::map<std::string, std::string> roles;
  threads.reserve(static_cast<size_t>(6 * f.num_vars + 1));

  build_sat_threads(f, threads, labels, roles,
                    [&](int lit, std::vector<Operation>& ops) {
                      for (int j : clauses_of(f, lit, 0b111))
                        ops.push_back(write(var_c(j), "1"));
                    });

  labels.push_back("fin");
  roles["fin"] = "reads every clause flag, then raises x";
  std::vector<Operation> fin;
  for (size_t j = 1; j <= f.clauses.size(); ++j)
    fin.push_back(read(var_c(static_cast<int>(j)), "1"));
  fin.push_back(write("x", "1"));
  threads.push_back(std::move(fin));

  return ReductionOutput{Program(std::move(threads), std::move(labels)), 0,
                         std::move(roles)};
}

ReductionOutput sat3_to_2writer(const CnfFormula& f) {
  std::vector<std::vector<Operation>> threads;
  std::vector<std::string> labels;
  std::map<std::string, std::string> roles;
  threads.reserve(static_cast<size_t>(6 * f.num_vars) + f.clauses.size() + 1);

  // A clause's first two literal slots stamp c<j>; its third slot stamps
  // d<j> directly, keeping every c/d variable at two writers. One thread
  // may stamp both for the same clause (duplicate literals); it emits the
  // c-write before the d-write, clauses ascending.
  build_sat_threads(f, threads, labels, roles,
                    [&](int lit, std::vector<Operation>& ops) {
                      std::vector<int> cs = clauses_of(f, lit, 0b011);
                      std::vector<int> ds = clauses_of(f, lit, 0b100);
                      size_t a = 0, b = 0;
                      while (a < cs.size() || b < ds.size()) {
                        const bool take_c =
                            b == ds.size() ||
                            (a < cs.size() && cs[a] <= ds[b]);
                        if (take_c)
                          ops.push_back(write(var_c(cs[a++]), "1"));
                        else
                          ops.push_back(write(var_d(ds[b++]), "1"));
                      }
                    });

  for (size_t j = 1; j <= f.clauses.size(); ++j) {
    const int cj = static_cast<int>(j);
    labels.push_back("relay" + std::to_string(cj));
    roles[labels.back()] =
        "forwards clause flag c" + std::to_string(cj) + " to d" +
        std::to_string(cj);
    threads.push_back({read(var_c(cj), "1"), write(var_d(cj), "1")});
  }

  labels.push_back("fin");
  roles["fin"] = "reads every clause flag, then raises x";
  std::vector<Operation> fin;
  for (size_t j = 1; j <= f.clauses.size(); ++j)
    fin.push_back(read(var_d(static_cast<int>(j)), "1"));
  fin.push_back(write("x", "1"));
  threads.push_back(std::move(fin));

  return ReductionOutput{Program(std::move(threads), std::move(labels)), 0,
                         std::move(roles)};
}

namespace {

std::string var_edge(const std::pair<int, int>& e) {
  return "y" + std::to_string(e.first) + "_" + std::to_string(e.second);
}
std::string var_x(int j) { return "x" + std::to_string(j); }
std::string var_p(int j) { return "p" + std::to_string(j); }

}  // namespace

ReductionOutput indepset_to_program(const UndirectedGraph& g, int k_sel) {
  if (g.vertex_count < 1)
    throw std::invalid_argument("graph has no vertices");
  if (k_sel < 1) throw std::invalid_argument("selection size must be >= 1");
  if (k_sel > g.vertex_count)
    throw std::invalid_argument("selection size exceeds vertex count");

  std::vector<std::pair<int, int>> edges = g.edges;
  std::sort(edges.begin(), edges.end());
  for (const auto& [u, v] : edges)
    if (u < 1 || v > g.vertex_count || u >= v)
      throw std::invalid_argument("malformed edge list");

  std::vector<std::vector<Operation>> threads;
  std::vector<std::string> labels;
  std::map<std::string, std::string> roles;

  labels.push_back("init");
  roles["init"] = "clears edge guards, raises selector guards, s and p0";
  std::vector<Operation> init;
  for (const auto& e : edges) init.push_back(write(var_edge(e), "0"));
  for (int j = 1; j <= k_sel; ++j) init.push_back(write(var_x(j), "1"));
  init.push_back(write("s", "1"));
  init.push_back(write(var_p(0), "1"));
  threads.push_back(std::move(init));

  for (int j = 1; j <= k_sel; ++j) {
    labels.push_back("checker" + std::to_string(j));
    roles[labels.back()] =
        "certifies selector " + std::to_string(j) +
        " was preempted mid-block, then passes the p-chain on";
    std::vector<Operation> ops{read(var_p(j - 1), "1")};
    if (j != k_sel) ops.push_back(write("s", "0"));
    ops.push_back(read(var_x(j), "0"));
    if (j == k_sel) ops.push_back(write("s", "1"));
    ops.push_back(write(var_p(j), "1"));
    threads.push_back(std::move(ops));
  }

  for (int j = 1; j <= k_sel; ++j) {
    const std::string sj = std::to_string(j);
    labels.push_back("sel" + sj);
    roles[labels.back()] =
        "selector " + sj + ": one block per vertex; the block left "
        "unfinished names the selected vertex";
    std::vector<Operation> ops;
    for (int u = 1; u <= g.vertex_count; ++u) {
      for (const auto& e : edges)
        if (e.first == u || e.second == u) {
          ops.push_back(read(var_edge(e), "0"));
          ops.push_back(write(var_edge(e), sj));
        }
      ops.push_back(read("s", "1"));
      ops.push_back(write(var_x(j), "0"));
      ops.push_back(write(var_x(j), "1"));
      for (const auto& e : edges)
        if (e.first == u || e.second == u) {
          ops.push_back(read(var_edge(e), sj));
          ops.push_back(write(var_edge(e), "0"));
        }
    }
    threads.push_back(std::move(ops));
  }

  return ReductionOutput{Program(std::move(threads), std::move(labels)),
                         3 * k_sel, std::move(roles)};
}

bool sat_bruteforce(const CnfFormula& f) {
  if (f.num_vars < 0 || f.num_vars > 20)
    throw std::invalid_argument("brute force supports at most 20 variables");
  const uint32_t limit = uint32_t{1} << f.num_vars;
  for (uint32_t mask = 0; mask < limit; ++mask) {
    bool all = true;
    for (const auto& clause : f.clauses) {
      bool sat = false;
      for (int lit : clause) {
        const uint32_t bit = uint32_t{1} << (lit_var(lit) - 1);
        if (lit > 0 ? (mask & bit) : !(mask & bit)) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool indepset_bruteforce(const UndirectedGraph& g, int k_sel) {
  if (g.vertex_count < 0 || g.vertex_count > 20)
    throw std::invalid_argument("brute force supports at most 20 vertices");
  if (k_sel < 0) throw std::invalid_argument("selection size must be >= 0");
  if (k_sel == 0) return true;
  if (k_sel > g.vertex_count) return false;

  std::vector<uint32_t> adj(static_cast<size_t>(g.vertex_count) + 1, 0);
  for (const auto& [u, v] : g.edges) {
    adj[u] |= uint32_t{1} << (v - 1);
    adj[v] |= uint32_t{1} << (u - 1);
  }
  const uint32_t limit = uint32_t{1} << g.vertex_count;
  for (uint32_t mask = 0; mask < limit; ++mask) {
    if (std::popcount(mask) != k_sel) continue;
    bool independent = true;
    for (int u = 1; u <= g.vertex_count && independent; ++u)
      if (mask & (uint32_t{1} << (u - 1)))
        independent = (adj[u] & mask) == 0;
    if (independent) return true;
  }
  return false;
}

}  // namespace vscp
