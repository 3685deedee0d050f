#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vscp/trace.hpp"

namespace vscp {

/// A 3-CNF formula: variables 1..num_vars, each clause exactly three literals,
/// literal +v / -v for variable v. Duplicate literals within a clause are
/// allowed.
struct CnfFormula {
  int num_vars{0};
  std::vector<std::array<int, 3>> clauses;
};

/// Simple undirected graph; vertices 1..vertex_count, edges stored as sorted
/// unique pairs (u < v).
struct UndirectedGraph {
  int vertex_count{0};
  std::vector<std::pair<int, int>> edges;
};

/// A generated program together with the preemption budget the construction
/// targets and a label -> role description map.
struct ReductionOutput {
  Program program;
  int pi{0};
  std::map<std::string, std::string> roles;
};

/// DIMACS CNF: 'c' comment lines, one 'p cnf <vars> <clauses>' header, then
/// clause literal lists each terminated by 0. Every clause must have exactly
/// three literals. Throws ParseError on malformed input.
CnfFormula parse_dimacs(std::string_view text);

/// Edge list: first significant line is the vertex count, then one "u v" pair
/// per line (1-based). '#' starts a comment. Self-loops and out-of-range
/// vertices are errors; duplicate edges collapse. Throws ParseError.
UndirectedGraph parse_edge_list(std::string_view text);

/// Encodes satisfiability of `f` (k variables, m clauses) as preemption-free
/// schedulability of a program with 6k+1 threads over k+m+1 variables, at
/// most 3 writers per variable. Threads, per variable i: set<i>0 / chk<i>0
/// (guess 0), set<i>1 / chk<i>1 (guess 1), pos<i> / neg<i> (literal threads
/// stamping the clauses the literal satisfies); plus fin reading every clause
/// flag and raising x. pi is always 0.
ReductionOutput sat3_to_3writer(const CnfFormula& f);

/// Same encoding with clause flags split so no variable has three writers:
/// a clause's first two literal threads write c<j>, its third writes d<j>,
/// and a relay thread relay<j> forwards c<j> to d<j>. A literal thread
/// occurring both as first/second and as third literal of clauses emits both
/// kinds of writes (c-writes before d-writes, clause index ascending).
/// 6k+m+1 threads, at most 2 writers per variable, pi = 0.
ReductionOutput sat3_to_2writer(const CnfFormula& f);

/// Encodes "g has an independent set of size k_sel" as schedulability with
/// pi = 3*k_sel. Threads: init (edge guards y<u>_<v> to 0, selector guards
/// x<j> to 1, s and p0 to 1), one checker per selector position, and k_sel
/// selector threads each holding one 7-event block per vertex; a selector's
/// block must be preempted exactly mid-flight, which the checkers certify
/// through s, x<j> and the p-chain. 2*k_sel+1 threads.
/// Throws std::invalid_argument when k_sel < 1, k_sel > vertex_count, or the
/// graph is empty (no vertices).
ReductionOutput indepset_to_program(const UndirectedGraph& g, int k_sel);

/// Truth-table satisfiability check; num_vars <= 20 (std::invalid_argument
/// beyond).
bool sat_bruteforce(const CnfFormula& f);

/// Exhaustive independent-set check over all k_sel-subsets; vertex_count
/// <= 20 (std::invalid_argument beyond). k_sel = 0 is trivially true;
/// k_sel > vertex_count is false.
bool indepset_bruteforce(const UndirectedGraph& g, int k_sel);

}  // namespace vscp
