#pragma once

#include <random>
#include <string>
#include <vector>

#include "vscp/trace.hpp"

namespace vscp::testing {

inline Operation R(std::string var, std::string val) {
  return Operation{OpKind::Read, std::move(var), std::move(val)};
}
inline Operation W(std::string var, std::string val) {
  return Operation{OpKind::Write, std::move(var), std::move(val)};
}

/// Three threads handing values across two variables; the running example
/// used throughout the checker and solver tests.
///   T1: w(x,1) w(x,2) r(y,1)
///   T2: r(x,2) w(y,1)
///   T3: r(x,1)
inline Program handoff3() {
  return Program{{
      {W("x", "1"), W("x", "2"), R("y", "1")},
      {R("x", "2"), W("y", "1")},
      {R("x", "1")},
  }};
}

/// Four threads: two pure writers ramping values up, two pure readers that
/// only accept intermediate values.
///   T1: r(y,2)   T2: w(y,1) w(y,2)   T3: w(x,1) w(x,2) w(x,3)   T4: r(x,2) r(x,2)
inline Program staged_writers() {
  return Program{{
      {R("y", "2")},
      {W("y", "1"), W("y", "2")},
      {W("x", "1"), W("x", "2"), W("x", "3")},
      {R("x", "2"), R("x", "2")},
  }};
}

/// Two symmetric threads that must interleave mid-thread to satisfy each
/// other's reads.
///   T1: w(x,1) r(y,1) w(x,2)
///   T2: w(y,1) r(x,1) w(y,2)
inline Program pingpong2() {
  return Program{{
      {W("x", "1"), R("y", "1"), W("x", "2")},
      {W("y", "1"), R("x", "1"), W("y", "2")},
  }};
}

struct RandomProgramSpec {
  int min_threads = 1;
  int max_threads = 4;
  int min_len = 1;
  int max_len = 3;
  int num_vars = 2;
  int num_vals = 2;
  // when true, a fixed writer thread is assigned per variable
  bool one_writer = false;
  int max_events = 0;  // 0 = unlimited
};

inline Program random_program(std::mt19937& rng, const RandomProgramSpec& spec) {
  std::uniform_int_distribution<int> thread_dist(spec.min_threads,
                                                 spec.max_threads);
  for (;;) {
    const int k = thread_dist(rng);
    std::uniform_int_distribution<int> len_dist(spec.min_len, spec.max_len);
    std::uniform_int_distribution<int> var_dist(0, spec.num_vars - 1);
    std::uniform_int_distribution<int> val_dist(0, spec.num_vals - 1);
    std::uniform_int_distribution<int> writer_dist(1, k);
    std::uniform_int_distribution<int> kind_dist(0, 1);

    std::vector<int> writer_of(static_cast<size_t>(spec.num_vars));
    for (int v = 0; v < spec.num_vars; ++v) writer_of[v] = writer_dist(rng);

    std::vector<std::vector<Operation>> threads(static_cast<size_t>(k));
    int total = 0;
    for (int t = 1; t <= k; ++t) {
      const int len = len_dist(rng);
      total += len;
      for (int i = 0; i < len; ++i) {
        const int var = var_dist(rng);
        const int val = val_dist(rng);
        bool is_read = kind_dist(rng) != 0;
        if (spec.one_writer && !is_read && writer_of[var] != t) is_read = true;
        threads[t - 1].push_back(Operation{
            is_read ? OpKind::Read : OpKind::Write,
            std::string(1, static_cast<char>('x' + var)),
            std::to_string(val)});
      }
    }
    if (spec.max_events > 0 && total > spec.max_events) continue;
    return Program(std::move(threads));
  }
}

}  // namespace vscp::testing
