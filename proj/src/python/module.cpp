#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "vscp/exact.hpp"
#include "vscp/onewriter.hpp"
#include "vscp/reductions.hpp"
#include "vscp/trace.hpp"

namespace py = pybind11;

namespace {

vscp::Interleaving interleaving_from_py(const vscp::Program& p,
                                        const py::sequence& order) {
  vscp::Interleaving s;
  s.order.reserve(order.size());
  for (const auto& item : order) {
    const py::sequence pair = item.cast<py::sequence>();
    if (pair.size() != 2)
      throw std::invalid_argument("order entries must be (thread, index)");
    int thread;
    if (py::isinstance<py::str>(pair[0])) {
      thread = p.thread_by_label(pair[0].cast<std::string>());
      if (thread == -1)
        throw std::invalid_argument("unknown thread label: " +
                                    pair[0].cast<std::string>());
    } else {
      thread = pair[0].cast<int>();
    }
    s.order.push_back(vscp::EventRef{thread, pair[1].cast<int>()});
  }
  return s;
}

py::list interleaving_to_py(const vscp::Program& p,
                            const vscp::Interleaving& s) {
  py::list out;
  for (const vscp::EventRef ref : s.order)
    out.append(py::make_tuple(p.label(ref.thread), ref.index));
  return out;
}

py::object witness_to_py(const vscp::Program& p,
                         const std::optional<vscp::Interleaving>& w) {
  if (!w) return py::none();
  return interleaving_to_py(p, *w);
}

vscp::CnfFormula formula_from_py(int num_vars,
                                 const std::vector<std::array<int, 3>>& clauses) {
  vscp::CnfFormula f;
  f.num_vars = num_vars;
  f.clauses = clauses;
  return f;
}

vscp::UndirectedGraph graph_from_py(
    int vertex_count, const std::vector<std::pair<int, int>>& edges) {
  vscp::UndirectedGraph g;
  g.vertex_count = vertex_count;
  g.edges = edges;
  return g;
}

py::dict reduction_to_py(vscp::ReductionOutput out) {
  py::dict d;
  d["program"] = std::move(out.program);
  d["pi"] = out.pi;
  d["roles"] = out.roles;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = R"pbdoc(
      Decision procedures for bounded-preemption sequential consistency:
      parse multi-threaded read/write traces, classify writer structure,
      and decide whether a trace admits a sequentially consistent
      interleaving with a bounded number of preemptions.
  )pbdoc";

  py::register_exception<vscp::ParseError>(m, "TraceParseError",
                                           PyExc_ValueError);

  py::class_<vscp::Program>(m, "Program", R"pbdoc(
      An immutable multi-threaded history. Threads are numbered 1..k in
      input order; labels are preserved for reporting.
  )pbdoc")
      .def(py::init([](const std::vector<std::vector<
                           std::tuple<std::string, std::string, std::string>>>&
                           threads,
                       const std::vector<std::string>& labels) {
             std::vector<std::vector<vscp::Operation>> ops;
             ops.reserve(threads.size());
             for (const auto& thread : threads) {
               std::vector<vscp::Operation> t;
               t.reserve(thread.size());
               for (const auto& [kind, var, val] : thread) {
                 if (kind != "r" && kind != "w")
                   throw std::invalid_argument(
                       "operation kind must be 'r' or 'w'");
                 t.push_back(vscp::Operation{kind == "r" ? vscp::OpKind::Read
                                                         : vscp::OpKind::Write,
                                             var, val});
               }
               ops.push_back(std::move(t));
             }
             return vscp::Program(std::move(ops), labels);
           }),
           py::arg("threads"), py::arg("labels") = std::vector<std::string>{},
           "Build a program from [[(kind, var, value), ...], ...]")
      .def_property_readonly("thread_count", &vscp::Program::thread_count)
      .def_property_readonly("event_count", &vscp::Program::event_count)
      .def_property_readonly("labels",
                             [](const vscp::Program& p) { return p.labels(); })
      .def_property_readonly(
          "variables", [](const vscp::Program& p) { return p.variables(); })
      .def("thread_length", &vscp::Program::thread_length, py::arg("thread"))
      .def("threads",
           [](const vscp::Program& p) {
             py::list out;
             for (int t = 1; t <= p.thread_count(); ++t) {
               py::list thread;
               for (const vscp::Event& ev : p.thread_events(t))
                 thread.append(py::make_tuple(
                     ev.op.kind == vscp::OpKind::Read ? "r" : "w",
                     ev.op.variable, ev.op.value));
               out.append(thread);
             }
             return out;
           },
           "Events as [[(kind, var, value), ...], ...] in thread order")
      .def("__eq__",
           [](const vscp::Program& a, const vscp::Program& b) { return a == b; })
      .def("__repr__", [](const vscp::Program& p) {
        return "<Program threads=" + std::to_string(p.thread_count()) +
               " events=" + std::to_string(p.event_count()) + ">";
      });

  m.def("parse_program",
        [](const std::string& text) { return vscp::parse_program(text); },
        py::arg("text"), "Parse the '<label>: r|w <var> <value>' trace format");
  m.def("serialize_program", &vscp::serialize_program, py::arg("program"),
        "Render a program back into the trace format");

  m.def("classify_writers",
        [](const vscp::Program& p) {
          const vscp::WriterClass wc = vscp::classify_writers(p);
          py::dict d;
          d["per_variable"] = wc.per_variable;
          d["max_writers"] = wc.max_writers;
          return d;
        },
        py::arg("program"), "Distinct writer threads per variable");

  m.def("validate_interleaving",
        [](const vscp::Program& p, const py::sequence& order,
           bool require_complete) -> py::object {
          const auto v = vscp::validate_interleaving(
              p, interleaving_from_py(p, order), require_complete);
          if (!v) return py::none();
          py::dict d;
          d["message"] = v->message;
          d["position"] = v->position;
          return d;
        },
        py::arg("program"), py::arg("order"),
        py::arg("require_complete") = false,
        "First structural violation of the order, or None");

  m.def("is_sequentially_consistent",
        [](const vscp::Program& p, const py::sequence& order) {
          return vscp::is_sequentially_consistent(
              p, interleaving_from_py(p, order));
        },
        py::arg("program"), py::arg("order"),
        "Every read sees the latest write of its value");

  m.def("count_preemptions",
        [](const vscp::Program& p, const py::sequence& order) {
          return vscp::count_preemptions(p, interleaving_from_py(p, order));
        },
        py::arg("program"), py::arg("order"),
        "Context switches away from an unfinished thread");

  m.def("solve_one_writer",
        [](const vscp::Program& p, int pi) {
          return witness_to_py(p, vscp::solve_one_writer(p, pi));
        },
        py::arg("program"), py::arg("pi"),
        "Witness order for a 1-Writer program within the preemption budget, "
        "or None");

  m.def("solve_exact",
        [](const vscp::Program& p, int pi, uint64_t state_budget,
           bool use_memo) {
          vscp::ExactOptions opts;
          opts.state_budget = state_budget;
          opts.use_memo = use_memo;
          const vscp::ExactResult r = vscp::solve_exact(p, pi, opts);
          py::dict d;
          switch (r.status) {
            case vscp::ExactStatus::Sat: d["status"] = "sat"; break;
            case vscp::ExactStatus::Unsat: d["status"] = "unsat"; break;
            case vscp::ExactStatus::BudgetExceeded:
              d["status"] = "budget_exceeded";
              break;
          }
          d["witness"] = witness_to_py(p, r.witness);
          d["states_explored"] = r.states_explored;
          return d;
        },
        py::arg("program"), py::arg("pi"),
        py::arg("state_budget") = vscp::ExactOptions{}.state_budget,
        py::arg("use_memo") = true,
        "Memoized search over arbitrary programs; status sat, unsat or "
        "budget_exceeded");

  m.def("enumerate_all",
        [](const vscp::Program& p, int pi, int event_cap) {
          const vscp::EnumerationResult r =
              vscp::enumerate_all(p, pi, event_cap);
          py::dict d;
          d["count"] = r.count;
          d["witness"] = witness_to_py(p, r.witness);
          return d;
        },
        py::arg("program"), py::arg("pi"), py::arg("event_cap") = 12,
        "Count every consistent interleaving within the budget (oracle)");

  m.def("parse_dimacs",
        [](const std::string& text) {
          const vscp::CnfFormula f = vscp::parse_dimacs(text);
          py::dict d;
          d["num_vars"] = f.num_vars;
          d["clauses"] = f.clauses;
          return d;
        },
        py::arg("text"), "Parse DIMACS CNF with exactly three literals per "
        "clause");

  m.def("parse_edge_list",
        [](const std::string& text) {
          const vscp::UndirectedGraph g = vscp::parse_edge_list(text);
          py::dict d;
          d["vertex_count"] = g.vertex_count;
          d["edges"] = g.edges;
          return d;
        },
        py::arg("text"), "Parse '<count>' then 'u v' edge lines");

  m.def("sat3_to_3writer",
        [](int num_vars, const std::vector<std::array<int, 3>>& clauses) {
          return reduction_to_py(
              vscp::sat3_to_3writer(formula_from_py(num_vars, clauses)));
        },
        py::arg("num_vars"), py::arg("clauses"),
        "3-CNF to a 3-Writer program schedulable at pi = 0 iff satisfiable");

  m.def("sat3_to_2writer",
        [](int num_vars, const std::vector<std::array<int, 3>>& clauses) {
          return reduction_to_py(
              vscp::sat3_to_2writer(formula_from_py(num_vars, clauses)));
        },
        py::arg("num_vars"), py::arg("clauses"),
        "3-CNF to a 2-Writer program schedulable at pi = 0 iff satisfiable");

  m.def("indepset_to_program",
        [](int vertex_count, const std::vector<std::pair<int, int>>& edges,
           int k_sel) {
          return reduction_to_py(vscp::indepset_to_program(
              graph_from_py(vertex_count, edges), k_sel));
        },
        py::arg("vertex_count"), py::arg("edges"), py::arg("k_sel"),
        "Graph + k to a program schedulable at pi = 3k iff an independent "
        "set of size k exists");

  m.def("sat_bruteforce",
        [](int num_vars, const std::vector<std::array<int, 3>>& clauses) {
          return vscp::sat_bruteforce(formula_from_py(num_vars, clauses));
        },
        py::arg("num_vars"), py::arg("clauses"),
        "Truth-table satisfiability (up to 20 variables)");

  m.def("indepset_bruteforce",
        [](int vertex_count, const std::vector<std::pair<int, int>>& edges,
           int k_sel) {
          return vscp::indepset_bruteforce(graph_from_py(vertex_count, edges),
                                           k_sel);
        },
        py::arg("vertex_count"), py::arg("edges"), py::arg("k_sel"),
        "Exhaustive independent-set check (up to 20 vertices)");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
