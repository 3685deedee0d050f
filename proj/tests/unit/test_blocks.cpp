#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "vscp/blocks.hpp"

using namespace vscp;
using namespace vscp::testing;

TEST_CASE("point sets: sizes are nondecreasing and unique") {
  const Program p = handoff3();  // non-last events: (1,0) (1,1) (2,0)

  PointSetEnumerator e0(p, 0);
  auto s = e0.next();
  REQUIRE(s);
  CHECK(s->points.empty());
  CHECK(!e0.next());
  CHECK(PointSetEnumerator::total_count(p, 0) == 1);

  PointSetEnumerator e1(p, 1);
  std::vector<PreemptionPointSet> sets;
  while (auto n = e1.next()) sets.push_back(*n);
  CHECK(sets.size() == 4);  // {} + three singletons
  CHECK(PointSetEnumerator::total_count(p, 1) == 4);
  CHECK(sets[0].points.empty());
  for (size_t i = 1; i < sets.size(); ++i) CHECK(sets[i].points.size() == 1);

  PointSetEnumerator e2(p, 2);
  std::set<std::vector<std::pair<int, int>>> seen;
  size_t count = 0;
  size_t prev_size = 0;
  while (auto n = e2.next()) {
    ++count;
    CHECK(n->points.size() >= prev_size);
    prev_size = n->points.size();
    std::vector<std::pair<int, int>> key;
    for (auto r : n->points) key.emplace_back(r.thread, r.index);
    CHECK(seen.insert(key).second);  // no duplicates
  }
  CHECK(count == 1 + 3 + 3);
  CHECK(PointSetEnumerator::total_count(p, 2) == 7);

  // budgets beyond the candidate count saturate
  CHECK(PointSetEnumerator::total_count(p, 99) == 8);

  CHECK_THROWS_AS(PointSetEnumerator(p, -1), std::invalid_argument);
}

TEST_CASE("point sets: single thread of length m has C(m-1, s) sets per size") {
  const Program p{{{W("x", "1"), W("x", "2"), W("x", "3"), W("x", "4"),
                    W("x", "5")}}};
  CHECK(PointSetEnumerator::total_count(p, 2) == 1 + 4 + 6);
  PointSetEnumerator e(p, 2);
  size_t count = 0;
  while (auto n = e.next()) {
    for (auto r : n->points) CHECK(r.index < 4);  // never the last event
    ++count;
  }
  CHECK(count == 11);
}

TEST_CASE("block program: thread split at the chosen points") {
  const Program p = handoff3();

  // points after (1, w(x,1)) and (2, r(x,2))
  const BlockProgram bp(p, {{{1, 0}, {2, 0}}});
  CHECK(bp.inner_count() == 2);
  REQUIRE(bp.thread_blocks(1).size() == 2);
  CHECK(bp.thread_blocks(1)[0] == Block{1, 0, 0, 0, false});
  CHECK(bp.thread_blocks(1)[1] == Block{1, 1, 2, 1, true});
  REQUIRE(bp.thread_blocks(2).size() == 2);
  CHECK(bp.thread_blocks(2)[0] == Block{2, 0, 0, 0, false});
  CHECK(bp.thread_blocks(2)[1] == Block{2, 1, 1, 1, true});
  REQUIRE(bp.thread_blocks(3).size() == 1);
  CHECK(bp.thread_blocks(3)[0] == Block{3, 0, 0, 0, true});
  CHECK(bp.outer_ref(1) == BlockRef{1, 1});
  CHECK(bp.outer_ref(3) == BlockRef{3, 0});

  // both points inside thread 1
  const BlockProgram bp2(p, {{{1, 0}, {1, 1}}});
  REQUIRE(bp2.thread_blocks(1).size() == 3);
  CHECK(bp2.thread_blocks(1)[0] == Block{1, 0, 0, 0, false});
  CHECK(bp2.thread_blocks(1)[1] == Block{1, 1, 1, 1, false});
  CHECK(bp2.thread_blocks(1)[2] == Block{1, 2, 2, 2, true});
  CHECK(bp2.thread_blocks(2).size() == 1);

  // empty point set: one outer block per thread
  const BlockProgram bp3(p, {});
  for (int t = 1; t <= 3; ++t) {
    REQUIRE(bp3.thread_blocks(t).size() == 1);
    CHECK(bp3.thread_blocks(t)[0].outer);
    CHECK(bp3.thread_blocks(t)[0].lo == 0);
    CHECK(bp3.thread_blocks(t)[0].hi == p.thread_length(t) - 1);
  }

  CHECK(bp2.inner_blocks() ==
        std::vector<BlockRef>{BlockRef{1, 0}, BlockRef{1, 1}});
}

TEST_CASE("block program: invalid points are rejected") {
  const Program p = handoff3();
  CHECK_THROWS_AS(BlockProgram(p, {{{3, 0}}}), std::invalid_argument);  // last
  CHECK_THROWS_AS(BlockProgram(p, {{{1, 2}}}), std::invalid_argument);  // last
  CHECK_THROWS_AS(BlockProgram(p, {{{7, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(BlockProgram(p, {{{1, 0}, {1, 0}}}), std::invalid_argument);
}

TEST_CASE("expand: rejected block order becomes a failing SC expansion") {
  const Program p = handoff3();
  const BlockProgram bp(p, {{{1, 0}, {2, 0}}});

  // T1 blk0, T3, T2 blk0, T1 blk1, T2 blk1:
  // w(x,1) r(x,1) r(x,2) w(x,2) r(y,1) w(y,1) -- r(x,2) reads stale x
  const Interleaving bad = expand(
      bp, {{{1, 0}, {3, 0}, {2, 0}, {1, 1}, {2, 1}}});
  CHECK(bad.order ==
        std::vector<EventRef>{{1, 0}, {3, 0}, {2, 0}, {1, 1}, {1, 2}, {2, 1}});
  CHECK(!is_sequentially_consistent(p, bad));
}

TEST_CASE("expand: accepted block order expands to an SC interleaving") {
  const Program p = handoff3();
  const BlockProgram bp(p, {{{1, 0}, {1, 1}}});

  // T1 blk0, T3, T1 blk1, T2, T1 blk2:
  // w(x,1) r(x,1) w(x,2) r(x,2) w(y,1) r(y,1)
  const Interleaving good = expand(
      bp, {{{1, 0}, {3, 0}, {1, 1}, {2, 0}, {1, 2}}});
  CHECK(good.order ==
        std::vector<EventRef>{{1, 0}, {3, 0}, {1, 1}, {2, 0}, {2, 1}, {1, 2}});
  CHECK(is_sequentially_consistent(p, good));
  CHECK(count_preemptions(p, good) == 2);
}

TEST_CASE("expand: block order violations are rejected") {
  const Program p = handoff3();
  const BlockProgram bp(p, {{{1, 0}}});
  CHECK_THROWS_AS(expand(bp, {{{1, 1}, {1, 0}}}), InterleavingError);
  CHECK_THROWS_AS(expand(bp, {{{1, 0}, {1, 0}}}), InterleavingError);
  CHECK_THROWS_AS(expand(bp, {{{5, 0}}}), InterleavingError);
  CHECK_THROWS_AS(expand(bp, {{{1, 7}}}), InterleavingError);
}

TEST_CASE("blocks partition their threads") {
  std::mt19937 rng(17);
  RandomProgramSpec spec;
  spec.max_threads = 4;
  spec.max_len = 4;
  for (int iter = 0; iter < 100; ++iter) {
    const Program p = random_program(rng, spec);
    PointSetEnumerator en(p, 2);
    std::vector<PreemptionPointSet> all;
    while (auto s = en.next()) all.push_back(*s);
    std::uniform_int_distribution<size_t> pick(0, all.size() - 1);
    const BlockProgram bp(p, all[pick(rng)]);

    int inners = 0;
    int total_blocks = 0;
    for (int t = 1; t <= p.thread_count(); ++t) {
      const auto& blocks = bp.thread_blocks(t);
      REQUIRE(!blocks.empty());
      total_blocks += static_cast<int>(blocks.size());
      CHECK(blocks.front().lo == 0);
      CHECK(blocks.back().hi == p.thread_length(t) - 1);
      CHECK(blocks.back().outer);
      for (size_t i = 0; i + 1 < blocks.size(); ++i) {
        CHECK(!blocks[i].outer);
        CHECK(blocks[i].hi + 1 == blocks[i + 1].lo);
        CHECK(blocks[i].lo <= blocks[i].hi);
        ++inners;
      }
    }
    CHECK(inners == bp.inner_count());
    CHECK(total_blocks == bp.inner_count() + p.thread_count());
  }
}

TEST_CASE("expansion preemptions never exceed the point count") {
  std::mt19937 rng(19);
  RandomProgramSpec spec;
  spec.max_threads = 3;
  spec.max_len = 3;
  for (int iter = 0; iter < 200; ++iter) {
    const Program p = random_program(rng, spec);
    PointSetEnumerator en(p, 2);
    std::vector<PreemptionPointSet> all;
    while (auto s = en.next()) all.push_back(*s);
    std::uniform_int_distribution<size_t> pick(0, all.size() - 1);
    const BlockProgram bp(p, all[pick(rng)]);

    // random complete block interleaving
    std::vector<int> next(static_cast<size_t>(p.thread_count()), 0);
    int total = 0;
    for (int t = 1; t <= p.thread_count(); ++t)
      total += static_cast<int>(bp.thread_blocks(t).size());
    BlockInterleaving s;
    while (total > 0) {
      std::uniform_int_distribution<int> pick_t(1, p.thread_count());
      const int t = pick_t(rng);
      if (next[t - 1] == static_cast<int>(bp.thread_blocks(t).size())) continue;
      s.order.push_back({t, next[t - 1]++});
      --total;
    }
    const Interleaving expanded = expand(bp, s);
    CHECK(count_preemptions(p, expanded) <=
          static_cast<int>(bp.points().points.size()));
    CHECK(!validate_interleaving(p, expanded, true));
  }
}

TEST_CASE("adjacent same-thread blocks expand without a preemption") {
  const Program p = handoff3();
  const BlockProgram bp(p, {{{1, 0}, {1, 1}}});
  // T1's three blocks scheduled back to back: zero preemptions
  const Interleaving flat =
      expand(bp, {{{1, 0}, {1, 1}, {1, 2}, {2, 0}, {3, 0}}});
  CHECK(count_preemptions(p, flat) == 0);
}
