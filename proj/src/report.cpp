#include "vscp/report.hpp"

namespace vscp {

nlohmann::json interleaving_to_json(const Interleaving& s, const Program& p) {
  nlohmann::json order = nlohmann::json::array();
  for (const EventRef ref : s.order) {
    if (!p.contains(ref))
      throw std::invalid_argument("interleaving references an unknown event");
    order.push_back({p.label(ref.thread), ref.index});
  }
  return order;
}

Interleaving interleaving_from_json(const nlohmann::json& j, const Program& p) {
  if (!j.is_array())
    throw std::invalid_argument("interleaving JSON must be an array");
  Interleaving s;
  s.order.reserve(j.size());
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::invalid_argument(
          "interleaving entries must be [thread, index] pairs");
    int thread;
    if (entry[0].is_string()) {
      thread = p.thread_by_label(entry[0].get<std::string>());
      if (thread == -1)
        throw std::invalid_argument("unknown thread label: " +
                                    entry[0].get<std::string>());
    } else if (entry[0].is_number_integer()) {
      thread = entry[0].get<int>();
      if (thread < 1 || thread > p.thread_count())
        throw std::invalid_argument("thread id out of range: " +
                                    std::to_string(thread));
    } else {
      throw std::invalid_argument("thread must be a label or a 1-based id");
    }
    if (!entry[1].is_number_integer())
      throw std::invalid_argument("event index must be an integer");
    const EventRef ref{thread, entry[1].get<int>()};
    if (!p.contains(ref))
      throw std::invalid_argument(
          "event index out of range: " + p.label(thread) + "[" +
          std::to_string(ref.index) + "]");
    s.order.push_back(ref);
  }
  return s;
}

nlohmann::json verdict_to_json(const Verdict& v, const Program& p) {
  nlohmann::json j;
  j["consistent"] = v.consistent;
  if (v.preemptions) j["preemptions"] = *v.preemptions;
  if (v.witness) j["order"] = interleaving_to_json(*v.witness, p);
  j["solver"] = v.solver;
  j["stats"] = {{"states_explored", v.states_explored},
                {"elapsed_seconds", v.elapsed_seconds}};
  return j;
}

}  // namespace vscp
