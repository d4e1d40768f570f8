#include "chromem/play_graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "chromem/errors.hpp"

namespace chromem {

std::vector<int> start_set(const Arena& arena, std::span<const std::string> node_ids) {
  std::vector<int> nodes;
  for (const std::string& id : node_ids) nodes.push_back(arena.node_index(id));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (nodes.empty()) throw ValidationError("start set must be non-empty");
  return nodes;
}

PlayGraph build_play_graph(const Arena& arena, const Strategy& strategy,
                           std::span<const int> start_nodes) {
  if (start_nodes.empty()) throw ValidationError("start set must be non-empty");
  PlayGraph g;
  g.arena = &arena;

  std::unordered_map<long long, int> index;
  auto key = [&](int v, int m) {
    return static_cast<long long>(v) * strategy.memory.state_count() + m;
  };
  auto intern = [&](int v, int m) {
    auto [it, fresh] = index.emplace(key(v, m), static_cast<int>(g.states.size()));
    if (fresh) g.states.emplace_back(v, m);
    return it->second;
  };

  for (int v : start_nodes) g.initial.push_back(intern(v, strategy.memory.initial));

  for (size_t next = 0; next < g.states.size(); ++next) {
    auto [v, m] = g.states[next];
    std::vector<std::pair<int, int>> out;
    if (arena.owner(v) == Player::zero) {
      int e = strategy_move(arena, strategy, v, m);
      out.emplace_back(arena.edge(e).color, intern(arena.edge(e).target, strategy.memory.step(arena, m, e)));
    } else {
      for (int e : arena.out(v)) {
        out.emplace_back(arena.edge(e).color,
                         intern(arena.edge(e).target, strategy.memory.step(arena, m, e)));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    g.transitions.push_back(std::move(out));
  }
  return g;
}

std::set<std::vector<int>> bounded_traces(const PlayGraph& g, int depth, int guard) {
  if (depth < 0) throw ValidationError("bounded_traces: depth must be nonnegative");
  if (depth > guard)
    throw GuardError("bounded_traces: depth " + std::to_string(depth) + " exceeds guard " +
                     std::to_string(guard));

  std::set<std::vector<int>> words;
  // Frontier maps each word of the current length to the set of states the
  // word can end in.
  std::map<std::vector<int>, std::vector<int>> frontier;
  std::vector<int> init = g.initial;
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  frontier.emplace(std::vector<int>{}, std::move(init));
  words.insert(std::vector<int>{});

  for (int len = 0; len < depth; ++len) {
    std::map<std::vector<int>, std::vector<int>> next;
    for (const auto& [word, states] : frontier) {
      std::map<int, std::vector<int>> by_color;
      for (int s : states)
        for (auto [c, succ] : g.transitions[static_cast<size_t>(s)])
          by_color[c].push_back(succ);
      for (auto& [c, succs] : by_color) {
        std::sort(succs.begin(), succs.end());
        succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
        std::vector<int> extended = word;
        extended.push_back(c);
        words.insert(extended);
        next.emplace(std::move(extended), std::move(succs));
      }
    }
    frontier = std::move(next);
  }
  return words;
}

TraceAutomaton determinize_traces(const PlayGraph& g, std::size_t macro_cap) {
  TraceAutomaton aut;
  aut.color_count = g.arena->color_count();

  std::map<std::vector<int>, int> macro_index;
  std::vector<std::vector<int>> macros;
  auto intern = [&](std::vector<int> states) {
    auto [it, fresh] = macro_index.emplace(std::move(states), static_cast<int>(macros.size()));
    if (fresh) {
      if (macros.size() >= macro_cap)
        throw GuardError("trace_inclusion: macro-state cap " + std::to_string(macro_cap) +
                         " exceeded");
      macros.push_back(it->first);
    }
    return it->second;
  };

  std::vector<int> init = g.initial;
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  intern(std::move(init));

  for (size_t next = 0; next < macros.size(); ++next) {
    std::map<int, std::vector<int>> by_color;
    for (int s : macros[next])
      for (auto [c, succ] : g.transitions[static_cast<size_t>(s)]) by_color[c].push_back(succ);
    std::vector<int> row(static_cast<size_t>(aut.color_count), -1);
    for (auto& [c, succs] : by_color) {
      std::sort(succs.begin(), succs.end());
      succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
      row[static_cast<size_t>(c)] = intern(std::move(succs));
    }
    aut.delta.insert(aut.delta.end(), row.begin(), row.end());
  }
  aut.macro_count = static_cast<int>(macros.size());
  return aut;
}

InclusionVerdict trace_inclusion(const PlayGraph& left, const PlayGraph& right,
                                 std::size_t macro_cap) {
  TraceAutomaton ref = determinize_traces(right, macro_cap);

  // Colors are matched by symbol so graphs over different arenas compare
  // correctly; -1 marks a left color the right arena never uses.
  std::vector<int> to_right(static_cast<size_t>(left.arena->color_count()));
  for (int c = 0; c < left.arena->color_count(); ++c)
    to_right[static_cast<size_t>(c)] = right.arena->color_index(left.arena->color_symbol(c));

  // Level-synchronous search over (left state, macro) pairs, expanding each
  // level in word order: the first level with violations yields the shortest
  // counterexample and the minimum over it is the lexicographically least.
  auto key = [&](int l, int r) { return static_cast<long long>(l) * ref.macro_count + r; };
  std::set<long long> visited;
  std::map<long long, std::pair<std::vector<int>, std::pair<int, int>>> level;
  for (int l : left.initial) {
    long long k = key(l, 0);
    if (visited.insert(k).second) level.emplace(k, std::make_pair(std::vector<int>{}, std::make_pair(l, 0)));
  }

  while (!level.empty()) {
    std::vector<std::pair<std::vector<int>, std::pair<int, int>>> ordered;
    ordered.reserve(level.size());
    for (auto& [k, entry] : level) ordered.push_back(entry);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::optional<std::vector<int>> violation;
    std::map<long long, std::pair<std::vector<int>, std::pair<int, int>>> next;
    for (const auto& [word, state] : ordered) {
      auto [l, r] = state;
      for (auto [c, succ] : left.transitions[static_cast<size_t>(l)]) {
        int rc = to_right[static_cast<size_t>(c)];
        int r2 = rc < 0 ? -1 : ref.delta[static_cast<size_t>(r) * ref.color_count + rc];
        std::vector<int> extended = word;
        extended.push_back(c);
        if (r2 < 0) {
          if (!violation || extended < *violation) violation = std::move(extended);
          continue;
        }
        long long k = key(succ, r2);
        if (visited.count(k)) continue;
        auto it = next.find(k);
        if (it == next.end()) {
          next.emplace(k, std::make_pair(std::move(extended), std::make_pair(succ, r2)));
        } else if (extended < it->second.first) {
          it->second.first = std::move(extended);
        }
      }
    }
    if (violation) return InclusionVerdict{false, std::move(violation)};
    for (auto& [k, entry] : next) visited.insert(k);
    level = std::move(next);
  }
  return InclusionVerdict{true, std::nullopt};
}

std::string format_word(const Arena& arena, std::span<const int> word) {
  std::ostringstream os;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) os << ' ';
    os << arena.color_symbol(word[i]);
  }
  return os.str();
}

}  // namespace chromem
