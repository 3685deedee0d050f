#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "vscp/trace.hpp"

namespace vscp {

/// Solver-independent answer for one check: does the program admit a
/// sequentially consistent complete interleaving within the budget, and if
/// so, which one.
struct Verdict {
  bool consistent{false};
  std::optional<int> preemptions;       // present iff witness present
  std::optional<Interleaving> witness;  // present iff consistent
  std::string solver;                   // "onewriter" | "exact" | "oracle"
  uint64_t states_explored{0};
  double elapsed_seconds{0.0};
};

/// [[label, index], ...] using the program's thread labels.
nlohmann::json interleaving_to_json(const Interleaving& s, const Program& p);

/// Accepts the output of interleaving_to_json; entries may also carry 1-based
/// integer thread ids instead of labels. Throws std::invalid_argument on
/// unknown labels/ids or malformed entries.
Interleaving interleaving_from_json(const nlohmann::json& j, const Program& p);

/// {"consistent", "preemptions"?, "order"?, "solver", "stats": {...}}.
nlohmann::json verdict_to_json(const Verdict& v, const Program& p);

}  // namespace vscp
