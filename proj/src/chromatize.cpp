#include "chromem/chromatize.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "chromem/errors.hpp"

namespace chromem {

NodePreorder make_preorder(const Arena& arena,
                           const std::vector<std::vector<std::string>>& classes) {
  NodePreorder pre;
  pre.class_of.assign(static_cast<size_t>(arena.node_count()), -1);
  for (const auto& cls : classes) {
    std::vector<int> members;
    for (const std::string& id : cls) {
      int v = arena.node_index(id);
      if (pre.class_of[static_cast<size_t>(v)] != -1)
        throw ValidationError("preorder: node " + id + " occurs in more than one class");
      pre.class_of[static_cast<size_t>(v)] = static_cast<int>(pre.classes.size());
      members.push_back(v);
    }
    pre.classes.push_back(std::move(members));
  }
  for (int v = 0; v < arena.node_count(); ++v) {
    if (pre.class_of[static_cast<size_t>(v)] == -1)
      throw ValidationError("preorder: node " + arena.node(v).id + " is absent from all classes");
  }
  return pre;
}

NodePreorder parse_preorder(const std::string& text, const Arena& arena) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw FormatError(std::string("syntax error: ") + err.what());
  }
  if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array())
    throw FormatError("preorder file: expected object with a \"classes\" array");
  std::vector<std::vector<std::string>> classes;
  for (const auto& cls : doc["classes"]) {
    if (!cls.is_array()) throw FormatError("preorder file: each class must be an array");
    std::vector<std::string> members;
    for (const auto& id : cls) {
      if (!id.is_string()) throw FormatError("preorder file: node ids must be strings");
      members.push_back(id.get<std::string>());
    }
    classes.push_back(std::move(members));
  }
  try {
    return make_preorder(arena, classes);
  } catch (const LookupError& err) {
    throw FormatError(std::string("preorder file: ") + err.what());
  }
}

std::vector<int> good_edges(const Arena& arena, const Strategy& s1, const KnowledgeState& f,
                            int v, int c) {
  std::vector<int> result;
  for (int e = 0; e < arena.edge_count(); ++e) {
    const Edge& edge = arena.edge(e);
    if (edge.target != v || edge.color != c) continue;
    int known = f[static_cast<size_t>(edge.source)];
    if (known < 0) continue;
    if (arena.owner(edge.source) == Player::zero &&
        strategy_move(arena, s1, edge.source, known) != e)
      continue;
    result.push_back(e);
  }
  return result;
}

namespace {

// Shared frame for both constructions: lazy BFS over knowledge states with a
// canonical vector representation, so equal assignments always collapse.
struct KnowledgeBfs {
  std::map<KnowledgeState, int> index;
  std::vector<KnowledgeState> states;
  std::vector<std::vector<int>> sigma;  // per state, per color

  int intern(KnowledgeState f) {
    auto [it, fresh] = index.emplace(std::move(f), static_cast<int>(states.size()));
    if (fresh) states.push_back(it->first);
    return it->second;
  }
};

// edges grouped by (target, color), file order preserved within a group
std::vector<std::vector<int>> edges_by_target_color(const Arena& arena) {
  std::vector<std::vector<int>> by_tc(
      static_cast<size_t>(arena.node_count()) * static_cast<size_t>(arena.color_count()));
  for (int e = 0; e < arena.edge_count(); ++e) {
    const Edge& edge = arena.edge(e);
    by_tc[static_cast<size_t>(edge.target) * static_cast<size_t>(arena.color_count()) +
          static_cast<size_t>(edge.color)]
        .push_back(e);
  }
  return by_tc;
}

ChromatizeResult finish(const Arena& arena, const Strategy& s1, KnowledgeBfs bfs,
                        bool preference) {
  int q = s1.memory.state_count();
  ChromatizeResult result;
  Strategy& out = result.strategy;
  out.memory.kind = MemoryKind::chromatic;
  out.memory.initial = 0;
  out.memory.width = arena.color_count();
  int n_states = static_cast<int>(bfs.states.size());
  out.memory.state_ids.reserve(static_cast<size_t>(n_states));
  for (int i = 0; i < n_states; ++i) out.memory.state_ids.push_back("k" + std::to_string(i));
  out.memory.table.reserve(static_cast<size_t>(n_states) * static_cast<size_t>(out.memory.width));
  for (const auto& row : bfs.sigma) out.memory.table.insert(out.memory.table.end(), row.begin(), row.end());

  out.moves.assign(static_cast<size_t>(arena.node_count()) * static_cast<size_t>(n_states), -1);
  for (int i = 0; i < n_states; ++i) {
    const KnowledgeState& f = bfs.states[static_cast<size_t>(i)];
    for (int v = 0; v < arena.node_count(); ++v) {
      if (arena.owner(v) != Player::zero) continue;
      int known = f[static_cast<size_t>(v)];
      int e;
      if (known >= 0) {
        e = strategy_move(arena, s1, v, preference ? pref_state(known, q) : known);
      } else {
        e = arena.out(v)[0];  // never reached on consistent plays
      }
      out.set_move(v, i, e);
    }
  }
  result.states = std::move(bfs.states);
  return result;
}

}  // namespace

ChromatizeResult chromatize_winning(const Arena& arena, const Strategy& s1,
                                    std::span<const int> start_nodes) {
  if (start_nodes.empty()) throw ValidationError("chromatize_winning: start set must be non-empty");

  KnowledgeBfs bfs;
  KnowledgeState init(static_cast<size_t>(arena.node_count()), -1);
  for (int v : start_nodes) init[static_cast<size_t>(v)] = s1.memory.initial;
  bfs.intern(std::move(init));

  auto by_tc = edges_by_target_color(arena);
  for (size_t at = 0; at < bfs.states.size(); ++at) {
    std::vector<int> row(static_cast<size_t>(arena.color_count()));
    for (int c = 0; c < arena.color_count(); ++c) {
      KnowledgeState g(static_cast<size_t>(arena.node_count()), -1);
      for (int v = 0; v < arena.node_count(); ++v) {
        const KnowledgeState& f = bfs.states[at];
        for (int e : by_tc[static_cast<size_t>(v) * static_cast<size_t>(arena.color_count()) +
                           static_cast<size_t>(c)]) {
          const Edge& edge = arena.edge(e);
          int known = f[static_cast<size_t>(edge.source)];
          if (known < 0) continue;
          if (arena.owner(edge.source) == Player::zero &&
              strategy_move(arena, s1, edge.source, known) != e)
            continue;
          g[static_cast<size_t>(v)] = s1.memory.step(arena, known, e);
          break;  // first good edge in file order
        }
      }
      row[static_cast<size_t>(c)] = bfs.intern(std::move(g));
    }
    bfs.sigma.push_back(std::move(row));
  }
  return finish(arena, s1, std::move(bfs), /*preference=*/false);
}

ChromatizeResult chromatize_preference(const Arena& arena, const Strategy& s1,
                                       const NodePreorder& preorder) {
  if (static_cast<int>(preorder.class_of.size()) != arena.node_count())
    throw ValidationError("chromatize_preference: preorder does not cover all nodes");
  int q = s1.memory.state_count();

  KnowledgeBfs bfs;
  KnowledgeState init(static_cast<size_t>(arena.node_count()));
  for (int v = 0; v < arena.node_count(); ++v)
    init[static_cast<size_t>(v)] = v * q + s1.memory.initial;
  bfs.intern(std::move(init));

  auto by_tc = edges_by_target_color(arena);
  for (size_t at = 0; at < bfs.states.size(); ++at) {
    std::vector<int> row(static_cast<size_t>(arena.color_count()));
    for (int c = 0; c < arena.color_count(); ++c) {
      KnowledgeState g(static_cast<size_t>(arena.node_count()), -1);
      for (int v = 0; v < arena.node_count(); ++v) {
        const KnowledgeState& f = bfs.states[at];
        // Among good edges, maximize the preorder class of the recorded
        // origin; ties go to the smallest source index, then edge index.
        int best_edge = -1, best_class = -1, best_source = -1;
        for (int e : by_tc[static_cast<size_t>(v) * static_cast<size_t>(arena.color_count()) +
                           static_cast<size_t>(c)]) {
          const Edge& edge = arena.edge(e);
          int known = f[static_cast<size_t>(edge.source)];
          if (known < 0) continue;
          int state = pref_state(known, q);
          if (arena.owner(edge.source) == Player::zero &&
              strategy_move(arena, s1, edge.source, state) != e)
            continue;
          int cls = preorder.class_of[static_cast<size_t>(pref_origin(known, q))];
          if (cls > best_class || (cls == best_class && edge.source < best_source)) {
            best_edge = e;
            best_class = cls;
            best_source = edge.source;
          }
        }
        if (best_edge >= 0) {
          const Edge& edge = arena.edge(best_edge);
          int known = f[static_cast<size_t>(edge.source)];
          g[static_cast<size_t>(v)] =
              pref_origin(known, q) * q + s1.memory.step(arena, pref_state(known, q), best_edge);
        }
      }
      row[static_cast<size_t>(c)] = bfs.intern(std::move(g));
    }
    bfs.sigma.push_back(std::move(row));
  }
  return finish(arena, s1, std::move(bfs), /*preference=*/true);
}

std::pair<BigInt, BigInt> nominal_bounds(int n, int q) {
  if (n < 1 || q < 1) throw ValidationError("nominal_bounds: n and q must be positive");
  BigInt winning = boost::multiprecision::pow(BigInt(q + 1), static_cast<unsigned>(n));
  BigInt preference =
      boost::multiprecision::pow(BigInt(static_cast<long long>(q) * n + 1), static_cast<unsigned>(n));
  return {winning, preference};
}

}  // namespace chromem
