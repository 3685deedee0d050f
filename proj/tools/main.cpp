// Command line front end: check a trace for sequentially consistent
// schedulability under a preemption budget, classify writer structure, and
// generate hardness-family instances from CNF formulas or graphs.
//
// Exit codes: 0 consistent / success, 1 inconsistent, 2 usage or input
// error, 3 search budget exhausted.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vscp/exact.hpp"
#include "vscp/onewriter.hpp"
#include "vscp/reductions.hpp"
#include "vscp/report.hpp"
#include "vscp/trace.hpp"

namespace {

constexpr int kExitConsistent = 0;
constexpr int kExitInconsistent = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed to write " + path);
}

uint64_t default_state_budget() {
  if (const char* env = std::getenv("VSCP_STATE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed VSCP_STATE_BUDGET='" << env
              << "'\n";
  }
  return vscp::ExactOptions{}.state_budget;
}

std::string describe_class(const vscp::WriterClass& wc) {
  if (wc.max_writers <= 1) return "1-Writer";
  return std::to_string(wc.max_writers) + "-Writer";
}

int run_check(const std::string& trace_path, int pi, const std::string& mode,
              bool as_json, uint64_t budget, int oracle_cap) {
  const vscp::Program program = vscp::parse_program(read_file(trace_path));
  const vscp::WriterClass wc = vscp::classify_writers(program);

  std::string solver = mode;
  if (mode == "auto") solver = wc.max_writers <= 1 ? "onewriter" : "exact";
  if (solver == "onewriter" && wc.max_writers > 1) {
    std::cerr << "error: --mode onewriter requires a 1-Writer program, but "
              << describe_class(wc) << " was given\n";
    return kExitUsage;
  }

  vscp::Verdict verdict;
  verdict.solver = solver;
  const auto start = std::chrono::steady_clock::now();
  if (solver == "onewriter") {
    vscp::OneWriterStats stats;
    auto witness = vscp::solve_one_writer(program, pi, &stats);
    verdict.states_explored = stats.placements;
    if (witness) {
      verdict.consistent = true;
      verdict.preemptions = vscp::count_preemptions(program, *witness);
      verdict.witness = std::move(witness);
    }
  } else if (solver == "exact") {
    vscp::ExactOptions opts;
    opts.state_budget = budget;
    vscp::ExactResult result = vscp::solve_exact(program, pi, opts);
    verdict.states_explored = result.states_explored;
    if (result.status == vscp::ExactStatus::BudgetExceeded) {
      std::cerr << "error: state budget of " << budget
                << " exhausted before a verdict (raise --budget or "
                   "VSCP_STATE_BUDGET)\n";
      return kExitBudget;
    }
    if (result.status == vscp::ExactStatus::Sat) {
      verdict.consistent = true;
      verdict.preemptions = vscp::count_preemptions(program, *result.witness);
      verdict.witness = std::move(result.witness);
    }
  } else {  // oracle
    vscp::EnumerationResult result =
        vscp::enumerate_all(program, pi, oracle_cap);
    verdict.states_explored = result.count;
    if (result.witness) {
      verdict.consistent = true;
      verdict.preemptions = vscp::count_preemptions(program, *result.witness);
      verdict.witness = std::move(result.witness);
    }
  }
  verdict.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (as_json) {
    std::cout << vscp::verdict_to_json(verdict, program).dump(2) << "\n";
  } else {
    std::cout << "program: " << program.thread_count() << " threads, "
              << program.event_count() << " events, " << describe_class(wc)
              << "\n";
    std::cout << "solver: " << solver << "\n";
    std::cout << "budget: " << pi << " preemptions\n";
    if (verdict.consistent) {
      std::cout << "verdict: consistent (" << *verdict.preemptions
                << " preemptions used)\n";
      std::cout << "witness:";
      for (const vscp::EventRef ref : verdict.witness->order)
        std::cout << ' ' << program.label(ref.thread) << '[' << ref.index
                  << ']';
      std::cout << "\n";
    } else {
      std::cout << "verdict: inconsistent (no schedule within budget)\n";
    }
  }
  return verdict.consistent ? kExitConsistent : kExitInconsistent;
}

int run_classify(const std::string& trace_path) {
  const vscp::Program program = vscp::parse_program(read_file(trace_path));
  const vscp::WriterClass wc = vscp::classify_writers(program);
  std::cout << "threads: " << program.thread_count() << "\n";
  std::cout << "events: " << program.event_count() << "\n";
  std::cout << "class: " << describe_class(wc) << "\n";
  for (const auto& [var, writers] : wc.per_variable)
    std::cout << "  " << var << ": " << writers << " writer"
              << (writers == 1 ? "" : "s") << "\n";
  return kExitConsistent;
}

int emit_reduction(const vscp::ReductionOutput& out, const std::string& path) {
  write_file(path, vscp::serialize_program(out.program));
  nlohmann::json roles(out.roles);
  nlohmann::json sidecar{{"pi", out.pi}, {"roles", roles}};
  write_file(path + ".roles.json", sidecar.dump(2) + "\n");
  std::cout << "wrote " << path << " (" << out.program.thread_count()
            << " threads, " << out.program.event_count() << " events)\n";
  std::cout << "check with preemption budget pi = " << out.pi << "\n";
  return kExitConsistent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decides whether a multi-threaded read/write trace admits a "
      "sequentially consistent interleaving with a bounded number of "
      "preemptions."};
  app.require_subcommand(1);

  // check
  std::string trace_path;
  int pi = 0;
  std::string mode = "auto";
  bool as_json = false;
  uint64_t budget = default_state_budget();
  int oracle_cap = 12;
  CLI::App* check = app.add_subcommand(
      "check", "Decide schedulability of a trace under a preemption budget");
  check->add_option("trace", trace_path, "trace file")->required();
  check->add_option("--pi", pi, "maximum number of preemptions")
      ->required()
      ->check(CLI::NonNegativeNumber);
  check->add_option("--mode", mode, "solver: auto, onewriter, exact, oracle")
      ->check(CLI::IsMember({"auto", "onewriter", "exact", "oracle"}));
  check->add_flag("--json", as_json, "emit the verdict as JSON");
  check->add_option("--budget", budget,
                    "state budget for the exact solver (default "
                    "VSCP_STATE_BUDGET or 10000000)");
  check->add_option("--oracle-cap", oracle_cap,
                    "event-count cap for --mode oracle (default 12)");

  // classify
  std::string classify_path;
  CLI::App* classify = app.add_subcommand(
      "classify", "Report per-variable writer counts of a trace");
  classify->add_option("trace", classify_path, "trace file")->required();

  // gen
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate hardness-family traces from a CNF formula or a graph");
  gen->require_subcommand(1);
  std::string cnf_path, graph_path, out_path;
  int k_sel = 0;

  CLI::App* sat3w = gen->add_subcommand(
      "sat3w", "3-CNF to a 3-Writer trace schedulable at pi = 0 iff the "
               "formula is satisfiable");
  sat3w->add_option("--cnf", cnf_path, "DIMACS CNF input")->required();
  sat3w->add_option("--out", out_path, "trace output path")->required();

  CLI::App* sat2w = gen->add_subcommand(
      "sat2w", "3-CNF to a 2-Writer trace schedulable at pi = 0 iff the "
               "formula is satisfiable");
  sat2w->add_option("--cnf", cnf_path, "DIMACS CNF input")->required();
  sat2w->add_option("--out", out_path, "trace output path")->required();

  CLI::App* indep = gen->add_subcommand(
      "indep", "graph + k to a trace schedulable at pi = 3k iff an "
               "independent set of size k exists");
  indep->add_option("--graph", graph_path, "edge list input")->required();
  indep->add_option("-k,--k", k_sel, "independent set size")->required();
  indep->add_option("--out", out_path, "trace output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed())
      return run_check(trace_path, pi, mode, as_json, budget, oracle_cap);
    if (classify->parsed()) return run_classify(classify_path);
    if (sat3w->parsed())
      return emit_reduction(vscp::sat3_to_3writer(vscp::parse_dimacs(
                                read_file(cnf_path))),
                            out_path);
    if (sat2w->parsed())
      return emit_reduction(vscp::sat3_to_2writer(vscp::parse_dimacs(
                                read_file(cnf_path))),
                            out_path);
    if (indep->parsed())
      return emit_reduction(
          vscp::indepset_to_program(
              vscp::parse_edge_list(read_file(graph_path)), k_sel),
          out_path);
  } catch (const vscp::ParseError& e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
