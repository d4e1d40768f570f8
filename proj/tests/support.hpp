#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chromem/arena.hpp"
#include "chromem/chromatize.hpp"
#include "chromem/play_graph.hpp"
#include "chromem/strategy.hpp"

namespace testsupport {

using chromem::Arena;
using chromem::EdgeSpec;
using chromem::Node;
using chromem::Player;
using chromem::Strategy;

// One-player arena over colors "0","1": a two-edge-colored setup path into v,
// a six-edge detour loop at v whose tail is four 1-edges, a 1-colored exit
// and a 0-colored sink loop. Looping once and then exiting realizes five
// consecutive 1s; exiting immediately realizes three, looping forever four.
inline Arena consecutive_ones_arena() {
  std::vector<Node> nodes;
  for (const char* id : {"u", "a", "b", "c", "v", "d", "e", "f", "g", "h", "w"})
    nodes.push_back({id, Player::zero});
  std::vector<EdgeSpec> edges = {
      {"u", "0", "a"}, {"a", "0", "b"}, {"b", "1", "c"}, {"c", "1", "v"},
      {"v", "0", "d"}, {"d", "0", "e"}, {"e", "1", "f"}, {"f", "1", "g"},
      {"g", "1", "h"}, {"h", "1", "v"}, {"v", "1", "w"}, {"w", "0", "w"},
  };
  return Arena(std::move(nodes), edges);
}

// Two-state reference for the consecutive-ones arena: flips to its second
// state after any edge out of v, loops on the first visit, exits on the
// second. Not chromatic: the flip reacts to edges of both colors.
inline Strategy consecutive_ones_reference(const Arena& arena) {
  Strategy s;
  s.memory.kind = chromem::MemoryKind::general;
  s.memory.state_ids = {"m0", "m1"};
  s.memory.initial = 0;
  s.memory.width = arena.edge_count();
  int v = arena.node_index("v");
  s.memory.table.resize(2 * static_cast<size_t>(arena.edge_count()));
  for (int m = 0; m < 2; ++m)
    for (int e = 0; e < arena.edge_count(); ++e)
      s.memory.table[static_cast<size_t>(m) * static_cast<size_t>(arena.edge_count()) +
                     static_cast<size_t>(e)] = m == 1 || arena.edge(e).source == v ? 1 : m;

  s.moves.assign(static_cast<size_t>(arena.node_count()) * 2, -1);
  int loop_entry = -1, exit_edge = -1;
  for (int e : arena.out(v))
    (arena.color_symbol(arena.edge(e).color) == "0" ? loop_entry : exit_edge) = e;
  for (int node = 0; node < arena.node_count(); ++node) {
    if (node == v) continue;
    for (int m = 0; m < 2; ++m) s.set_move(node, m, arena.out(node)[0]);
  }
  s.set_move(v, 0, loop_entry);
  s.set_move(v, 1, exit_edge);
  return s;
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
};

inline Arena random_arena(Rng& rng, int max_nodes, int max_colors) {
  int n = 1 + rng.below(max_nodes);
  int k = 1 + rng.below(max_colors);
  static const char* palette[] = {"a", "b", "c", "d", "e"};
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i)
    nodes.push_back({"n" + std::to_string(i), rng.below(2) ? Player::one : Player::zero});

  std::set<std::tuple<int, int, int>> used;
  std::vector<EdgeSpec> edges;
  auto add = [&](int s, int c, int t) {
    if (!used.insert({s, c, t}).second) return;
    edges.push_back({nodes[static_cast<size_t>(s)].id, palette[c], nodes[static_cast<size_t>(t)].id});
  };
  for (int s = 0; s < n; ++s) add(s, rng.below(k), rng.below(n));
  int extra = rng.below(2 * n + 1);
  for (int i = 0; i < extra; ++i) add(rng.below(n), rng.below(k), rng.below(n));
  return Arena(std::move(nodes), edges);
}

inline Strategy random_strategy(Rng& rng, const Arena& arena, int max_states) {
  int q = 1 + rng.below(max_states);
  Strategy s;
  s.memory.kind = chromem::MemoryKind::general;
  for (int m = 0; m < q; ++m) s.memory.state_ids.push_back("m" + std::to_string(m));
  s.memory.initial = 0;
  s.memory.width = arena.edge_count();
  s.memory.table.resize(static_cast<size_t>(q) * static_cast<size_t>(arena.edge_count()));
  for (int& cell : s.memory.table) cell = rng.below(q);
  s.moves.assign(static_cast<size_t>(arena.node_count()) * static_cast<size_t>(q), -1);
  for (int v = 0; v < arena.node_count(); ++v) {
    if (arena.owner(v) != Player::zero) continue;
    for (int m = 0; m < q; ++m)
      s.set_move(v, m, arena.out(v)[static_cast<size_t>(rng.below(static_cast<int>(arena.out(v).size())))]);
  }
  return s;
}

inline std::vector<int> random_start_set(Rng& rng, const Arena& arena) {
  std::vector<int> nodes;
  for (int v = 0; v < arena.node_count(); ++v)
    if (rng.below(2)) nodes.push_back(v);
  if (nodes.empty()) nodes.push_back(rng.below(arena.node_count()));
  return nodes;
}

inline std::vector<int> all_nodes(const Arena& arena) {
  std::vector<int> nodes(static_cast<size_t>(arena.node_count()));
  for (int v = 0; v < arena.node_count(); ++v) nodes[static_cast<size_t>(v)] = v;
  return nodes;
}

inline std::vector<int> word_of(const Arena& arena, const std::string& symbols) {
  std::vector<int> word;
  for (char ch : symbols) {
    int c = arena.color_index(std::string(1, ch));
    if (c < 0) throw std::runtime_error("word_of: unknown color");
    word.push_back(c);
  }
  return word;
}

// All (endpoint, memory state) pairs of paths from u whose coloring is
// z w z, enumerated exhaustively on a lower-bound instance.
inline std::vector<std::pair<int, int>> endpoints_of_zwz(const Arena& arena, const Strategy& s1,
                                                         const std::string& w) {
  std::vector<int> word = word_of(arena, "z" + w + "z");
  struct Frame {
    int v, m;
    size_t pos;
  };
  std::vector<std::pair<int, int>> ends;
  std::vector<Frame> stack{{arena.node_index("u"), s1.memory.initial, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.pos == word.size()) {
      ends.emplace_back(f.v, f.m);
      continue;
    }
    for (int e : arena.out(f.v)) {
      if (arena.edge(e).color != word[f.pos]) continue;
      stack.push_back({arena.edge(e).target, s1.memory.step(arena, f.m, e), f.pos + 1});
    }
  }
  return ends;
}

template <typename Fn>
void for_all_xy_words(int max_len, const Fn& fn) {
  for (int len = 0; len <= max_len; ++len) {
    for (int bits = 0; bits < (1 << len); ++bits) {
      std::string w;
      for (int i = 0; i < len; ++i) w += (bits >> i) & 1 ? 'y' : 'x';
      fn(w);
    }
  }
}

// Exhaustive check: does a reference-consistent path with the given coloring
// exist from `from` to `target_v`, ending with memory state `target_m`?
inline bool exists_reference_path(const Arena& arena, const Strategy& s1, int from,
                                  std::span<const int> word, int target_v, int target_m) {
  struct Frame {
    int v, m;
    size_t pos;
  };
  std::vector<Frame> stack{{from, s1.memory.initial, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.pos == word.size()) {
      if (f.v == target_v && f.m == target_m) return true;
      continue;
    }
    for (int e : arena.out(f.v)) {
      if (arena.edge(e).color != word[f.pos]) continue;
      if (arena.owner(f.v) == Player::zero && s1.move_at(f.v, f.m) != e) continue;
      stack.push_back({arena.edge(e).target, s1.memory.step(arena, f.m, e), f.pos + 1});
    }
  }
  return false;
}

// Result of walking every consistent play prefix of the chromatized
// strategy up to a depth and checking its knowledge invariants by
// brute-force path search on the reference side.
struct ObligationOutcome {
  long long prefixes = 0;
  bool sound = true;
  bool complete = true;
};

inline ObligationOutcome check_knowledge_obligations(const Arena& arena, const Strategy& s1,
                                                     const chromem::ChromatizeResult& s2,
                                                     std::span<const int> starts, int depth,
                                                     const chromem::NodePreorder* preorder) {
  ObligationOutcome outcome;
  int q = s1.memory.state_count();

  struct Frame {
    int start, v, k, len;
    std::vector<int> word;
  };
  std::vector<Frame> stack;
  for (int v : starts) stack.push_back({v, v, s2.strategy.memory.initial, 0, {}});

  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    ++outcome.prefixes;
    const chromem::KnowledgeState& knowledge = s2.states[static_cast<size_t>(f.k)];

    int here = knowledge[static_cast<size_t>(f.v)];
    if (here < 0) outcome.complete = false;
    if (preorder && here >= 0 &&
        preorder->class_of[static_cast<size_t>(f.start)] >
            preorder->class_of[static_cast<size_t>(chromem::pref_origin(here, q))])
      outcome.complete = false;

    for (int v = 0; v < arena.node_count(); ++v) {
      int entry = knowledge[static_cast<size_t>(v)];
      if (entry < 0) continue;
      bool witnessed = false;
      if (preorder) {
        witnessed = exists_reference_path(arena, s1, chromem::pref_origin(entry, q), f.word, v,
                                          chromem::pref_state(entry, q));
      } else {
        for (int u : starts)
          if ((witnessed = exists_reference_path(arena, s1, u, f.word, v, entry))) break;
      }
      if (!witnessed) outcome.sound = false;
    }

    if (f.len == depth || !outcome.sound || !outcome.complete) continue;
    for (int e : arena.out(f.v)) {
      if (arena.owner(f.v) == Player::zero &&
          chromem::strategy_move(arena, s2.strategy, f.v, f.k) != e)
        continue;
      Frame next = f;
      next.v = arena.edge(e).target;
      next.k = s2.strategy.memory.step(arena, f.k, e);
      next.len = f.len + 1;
      next.word.push_back(arena.edge(e).color);
      stack.push_back(std::move(next));
    }
  }
  return outcome;
}

}  // namespace testsupport
