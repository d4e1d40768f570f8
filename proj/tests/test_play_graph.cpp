#include <doctest.h>

#include <algorithm>
#include <set>

#include "chromem/errors.hpp"
#include "chromem/lowerbound.hpp"
#include "chromem/play_graph.hpp"
#include "support.hpp"

using namespace chromem;

namespace {

Strategy always_c(const Arena& arena) {
  // memoryless: play the c-edge at t, ignore everything else
  Strategy s;
  s.memory.kind = MemoryKind::chromatic;
  s.memory.state_ids = {"s"};
  s.memory.initial = 0;
  s.memory.width = arena.color_count();
  s.memory.table.assign(static_cast<size_t>(arena.color_count()), 0);
  s.moves.assign(static_cast<size_t>(arena.node_count()), -1);
  int t = arena.node_index("t");
  for (int e : arena.out(t))
    if (arena.color_symbol(arena.edge(e).color) == "c") s.set_move(t, 0, e);
  return s;
}

}  // namespace

TEST_CASE("build_play_graph") {
  SUBCASE("one owner-0 node with a self-loop and a memoryless strategy") {
    Arena arena = parse_arena(
        R"({"nodes":[{"id":"v","owner":0}],"edges":[{"source":"v","color":"a","target":"v"}]})");
    Strategy s;
    s.memory.kind = MemoryKind::chromatic;
    s.memory.state_ids = {"s"};
    s.memory.initial = 0;
    s.memory.width = 1;
    s.memory.table = {0};
    s.moves = {0};
    PlayGraph g = build_play_graph(arena, s, testsupport::all_nodes(arena));
    CHECK(g.states.size() == 1);
    REQUIRE(g.transitions.size() == 1);
    CHECK(g.transitions[0].size() == 1);
  }

  SUBCASE("A(1,2) from u reaches 7 of the 8 (node,count) pairs") {
    LowerBoundInstance inst = make_lower_bound_instance(1, 2);
    std::vector<int> start{inst.arena.node_index("u")};
    PlayGraph g = build_play_graph(inst.arena, inst.s1, start);

    // independent oracle: breadth-first walk over (node, counter) pairs
    std::set<std::pair<int, int>> reached;
    std::vector<std::pair<int, int>> frontier{{inst.arena.node_index("u"), 0}};
    while (!frontier.empty()) {
      auto [v, m] = frontier.back();
      frontier.pop_back();
      if (!reached.insert({v, m}).second) continue;
      if (inst.arena.owner(v) == Player::zero) {
        int e = strategy_move(inst.arena, inst.s1, v, m);
        frontier.emplace_back(inst.arena.edge(e).target, inst.s1.memory.step(inst.arena, m, e));
      } else {
        for (int e : inst.arena.out(v))
          frontier.emplace_back(inst.arena.edge(e).target, inst.s1.memory.step(inst.arena, m, e));
      }
    }
    CHECK(g.states.size() == reached.size());
    CHECK(g.states.size() == 7);  // (u, count=1) is the unreachable pair
  }

  SUBCASE("the consecutive-ones reference play graph is a single play") {
    Arena arena = testsupport::consecutive_ones_arena();
    Strategy s1 = testsupport::consecutive_ones_reference(arena);
    std::vector<int> start{arena.node_index("u")};
    PlayGraph g = build_play_graph(arena, s1, start);
    CHECK(g.states.size() == 12);
    for (const auto& out : g.transitions) CHECK(out.size() == 1);
  }

  SUBCASE("missing next-move entries at reachable states are reported") {
    Arena arena = testsupport::consecutive_ones_arena();
    Strategy s1 = testsupport::consecutive_ones_reference(arena);
    s1.set_move(arena.node_index("v"), 1, -1);
    std::vector<int> start{arena.node_index("u")};
    CHECK_THROWS_AS(build_play_graph(arena, s1, start), LookupError);
  }

  SUBCASE("every reachable state has a successor") {
    testsupport::Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
      Arena arena = testsupport::random_arena(rng, 5, 3);
      Strategy s = testsupport::random_strategy(rng, arena, 3);
      PlayGraph g = build_play_graph(arena, s, testsupport::random_start_set(rng, arena));
      for (const auto& out : g.transitions) CHECK(!out.empty());
    }
  }
}

TEST_CASE("bounded_traces") {
  LowerBoundInstance inst = make_lower_bound_instance(1, 2);
  std::vector<int> start{inst.arena.node_index("u")};
  PlayGraph g = build_play_graph(inst.arena, inst.s1, start);

  SUBCASE("depth 0 yields only the empty word") {
    auto words = bounded_traces(g, 0);
    REQUIRE(words.size() == 1);
    CHECK(words.count({}) == 1);
  }
  SUBCASE("depth 1 from u sees only z") {
    auto words = bounded_traces(g, 1);
    CHECK(words.size() == 2);
    CHECK(words.count(testsupport::word_of(inst.arena, "z")) == 1);
  }
  SUBCASE("depth 4 contains zxzc and excludes zxzd") {
    auto words = bounded_traces(g, 4);
    CHECK(words.count(testsupport::word_of(inst.arena, "zxzc")) == 1);
    CHECK(words.count(testsupport::word_of(inst.arena, "zxzd")) == 0);
  }
  SUBCASE("the depth guard can be lifted") {
    CHECK_THROWS_AS(bounded_traces(g, 17), GuardError);
    CHECK_NOTHROW(bounded_traces(g, 17, 18));
  }
  SUBCASE("prefix-closed at every depth") {
    testsupport::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      Arena arena = testsupport::random_arena(rng, 4, 3);
      Strategy s = testsupport::random_strategy(rng, arena, 2);
      PlayGraph pg = build_play_graph(arena, s, testsupport::random_start_set(rng, arena));
      auto words = bounded_traces(pg, 6);
      for (auto word : words) {
        if (word.empty()) continue;
        word.pop_back();
        CHECK(words.count(word) == 1);
      }
    }
  }
}

TEST_CASE("trace_inclusion") {
  LowerBoundInstance inst = make_lower_bound_instance(1, 2);
  std::vector<int> start{inst.arena.node_index("u")};
  PlayGraph reference = build_play_graph(inst.arena, inst.s1, start);

  SUBCASE("identity holds") {
    CHECK(trace_inclusion(reference, reference).holds);
  }
  SUBCASE("chromatized vs original holds") {
    ChromatizeResult s2 = chromatize_winning(inst.arena, inst.s1, start);
    PlayGraph left = build_play_graph(inst.arena, s2.strategy, start);
    CHECK(trace_inclusion(left, reference).holds);
  }
  SUBCASE("always-c fails with the counterexample z y z c") {
    Strategy naive = always_c(inst.arena);
    PlayGraph left = build_play_graph(inst.arena, naive, start);
    InclusionVerdict verdict = trace_inclusion(left, reference);
    REQUIRE_FALSE(verdict.holds);
    REQUIRE(verdict.counterexample.has_value());
    CHECK(format_word(inst.arena, *verdict.counterexample) == "z y z c");
  }
  SUBCASE("macro-state cap is a hard error") {
    CHECK_THROWS_AS(trace_inclusion(reference, reference, 1), GuardError);
  }

  SUBCASE("colors are matched by symbol across different arenas") {
    Arena narrow = parse_arena(
        R"({"nodes":[{"id":"v","owner":1}],"edges":[{"source":"v","color":"a","target":"v"}]})");
    Arena wide = parse_arena(
        R"({"nodes":[{"id":"w","owner":1}],
            "edges":[{"source":"w","color":"b","target":"w"},
                     {"source":"w","color":"a","target":"w"}]})");
    Strategy stateless;
    stateless.memory.kind = MemoryKind::chromatic;
    stateless.memory.state_ids = {"s"};
    stateless.memory.initial = 0;

    Strategy on_narrow = stateless, on_wide = stateless;
    on_narrow.memory.width = narrow.color_count();
    on_narrow.memory.table.assign(1, 0);
    on_narrow.moves.assign(1, -1);
    on_wide.memory.width = wide.color_count();
    on_wide.memory.table.assign(2, 0);
    on_wide.moves.assign(1, -1);

    PlayGraph only_a = build_play_graph(narrow, on_narrow, testsupport::all_nodes(narrow));
    PlayGraph a_and_b = build_play_graph(wide, on_wide, testsupport::all_nodes(wide));
    CHECK(trace_inclusion(only_a, a_and_b).holds);
    InclusionVerdict verdict = trace_inclusion(a_and_b, only_a);
    REQUIRE_FALSE(verdict.holds);
    CHECK(format_word(wide, *verdict.counterexample) == "b");
  }
}

TEST_CASE("trace_inclusion agrees with the bounded-traces oracle") {
  testsupport::Rng rng(17);
  int negatives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Arena arena = testsupport::random_arena(rng, 4, 3);
    Strategy left_s = testsupport::random_strategy(rng, arena, 2);
    Strategy right_s = testsupport::random_strategy(rng, arena, 2);
    std::vector<int> left_start = testsupport::random_start_set(rng, arena);
    std::vector<int> right_start = testsupport::random_start_set(rng, arena);
    PlayGraph left = build_play_graph(arena, left_s, left_start);
    PlayGraph right = build_play_graph(arena, right_s, right_start);

    InclusionVerdict verdict = trace_inclusion(left, right);
    if (verdict.holds) {
      auto left_words = bounded_traces(left, 8);
      auto right_words = bounded_traces(right, 8);
      CHECK(std::includes(right_words.begin(), right_words.end(), left_words.begin(),
                          left_words.end()));
    } else {
      ++negatives;
      const std::vector<int>& w = *verdict.counterexample;
      int len = static_cast<int>(w.size());
      auto left_exact = bounded_traces(left, len, std::max(len, 16));
      auto right_exact = bounded_traces(right, len, std::max(len, 16));
      CHECK(left_exact.count(w) == 1);
      CHECK(right_exact.count(w) == 0);
      // shortest: the one-shorter prefix is realizable on both sides
      std::vector<int> prefix(w.begin(), w.end() - 1);
      CHECK(left_exact.count(prefix) == 1);
      CHECK(right_exact.count(prefix) == 1);
    }
  }
  CHECK(negatives > 0);  // the sample exercises both verdicts
}
