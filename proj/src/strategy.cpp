#include "chromem/strategy.hpp"

#include <unordered_map>

#include <json.hpp>

#include "chromem/errors.hpp"

namespace chromem {

int run_memory(const Arena& arena, const MemoryStructure& mem, int m, std::span<const int> edges) {
  if (m < 0 || m >= mem.state_count()) throw LookupError("run_memory: unknown state");
  for (int ei : edges) {
    if (ei < 0 || ei >= arena.edge_count())
      throw LookupError("run_memory: edge index outside declared domain");
    m = mem.step(arena, m, ei);
  }
  return m;
}

bool is_chromatic(const MemoryStructure& mem, const Arena& arena) {
  if (mem.kind == MemoryKind::chromatic) return true;
  // A factorization through colors exists iff, per state, all same-colored
  // edges share a successor.
  for (int m = 0; m < mem.state_count(); ++m) {
    std::vector<int> per_color(static_cast<size_t>(arena.color_count()), -1);
    for (int e = 0; e < arena.edge_count(); ++e) {
      int c = arena.edge(e).color;
      int succ = mem.step(arena, m, e);
      int& slot = per_color[static_cast<size_t>(c)];
      if (slot == -1) {
        slot = succ;
      } else if (slot != succ) {
        return false;
      }
    }
  }
  return true;
}

bool consistent(const Arena& arena, const Strategy& strategy, const Path& p) {
  if (!is_path(arena, p)) throw LookupError("consistent: not a path in this arena");
  int at = p.start;
  int m = strategy.memory.initial;
  for (int ei : p.edges) {
    if (arena.owner(at) == Player::zero) {
      int chosen = strategy.move_at(at, m);
      if (chosen != ei) return false;
    }
    m = strategy.memory.step(arena, m, ei);
    at = arena.edge(ei).target;
  }
  return true;
}

int strategy_move(const Arena& arena, const Strategy& strategy, int v, int m) {
  if (arena.owner(v) != Player::zero)
    throw LookupError("strategy_move: node " + arena.node(v).id + " is not an owner-0 node");
  int e = strategy.move_at(v, m);
  if (e < 0)
    throw LookupError("strategy_move: no entry for node " + arena.node(v).id + ", state " +
                      strategy.memory.state_ids[static_cast<size_t>(m)]);
  return e;
}

namespace {

using nlohmann::json;

int resolve_state(const std::unordered_map<std::string, int>& index, const std::string& id) {
  auto it = index.find(id);
  if (it == index.end()) throw FormatError("strategy file: unknown state \"" + id + "\"");
  return it->second;
}

int resolve_edge(const Arena& arena, const json& obj, const char* where) {
  if (!obj.is_object()) throw FormatError(std::string(where) + ": expected edge object");
  std::string source = obj.value("source", std::string());
  std::string color = obj.value("color", std::string());
  std::string target = obj.value("target", std::string());
  for (int e = 0; e < arena.edge_count(); ++e) {
    const EdgeSpec& spec = arena.edge_spec(e);
    if (spec.source == source && spec.color == color && spec.target == target) return e;
  }
  throw FormatError(std::string(where) + ": no such edge (" + source + ", " + color + ", " +
                    target + ")");
}

}  // namespace

Strategy parse_strategy(const std::string& text, const Arena& arena) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw FormatError(std::string("syntax error: ") + err.what());
  }
  if (!doc.is_object() || !doc.contains("memory") || !doc.contains("moves"))
    throw FormatError("strategy file: expected object with \"memory\" and \"moves\"");

  const json& mem_doc = doc["memory"];
  std::string kind = mem_doc.value("kind", std::string());
  if (kind != "general" && kind != "chromatic")
    throw FormatError("strategy file: kind must be \"general\" or \"chromatic\"");

  Strategy s;
  s.memory.kind = kind == "general" ? MemoryKind::general : MemoryKind::chromatic;
  if (!mem_doc.contains("states") || !mem_doc["states"].is_array() || mem_doc["states"].empty())
    throw FormatError("strategy file: \"states\" must be a non-empty array");

  std::unordered_map<std::string, int> state_index;
  for (const json& sid : mem_doc["states"]) {
    if (!sid.is_string()) throw FormatError("strategy file: state ids must be strings");
    std::string id = sid.get<std::string>();
    if (!state_index.emplace(id, s.memory.state_count()).second)
      throw FormatError("strategy file: duplicate state id \"" + id + "\"");
    s.memory.state_ids.push_back(std::move(id));
  }
  if (!mem_doc.contains("initial") || !mem_doc["initial"].is_string())
    throw FormatError("strategy file: missing \"initial\" state");
  s.memory.initial = resolve_state(state_index, mem_doc["initial"].get<std::string>());

  s.memory.width =
      s.memory.kind == MemoryKind::general ? arena.edge_count() : arena.color_count();
  s.memory.table.assign(
      static_cast<size_t>(s.memory.state_count()) * static_cast<size_t>(s.memory.width), -1);

  if (!mem_doc.contains("transitions") || !mem_doc["transitions"].is_array())
    throw FormatError("strategy file: missing \"transitions\" array");
  for (const json& tr : mem_doc["transitions"]) {
    int from = resolve_state(state_index, tr.value("from", std::string()));
    int to = resolve_state(state_index, tr.value("to", std::string()));
    int column;
    if (s.memory.kind == MemoryKind::general) {
      if (!tr.contains("edge")) throw FormatError("transition: general kind requires \"edge\"");
      column = resolve_edge(arena, tr["edge"], "transition");
    } else {
      if (!tr.contains("color") || !tr["color"].is_string())
        throw FormatError("transition: chromatic kind requires a \"color\" string");
      std::string symbol = tr["color"].get<std::string>();
      column = arena.color_index(symbol);
      if (column < 0) throw FormatError("transition: unknown color \"" + symbol + "\"");
    }
    int& cell = s.memory.table[static_cast<size_t>(from) * static_cast<size_t>(s.memory.width) +
                               static_cast<size_t>(column)];
    if (cell != -1) throw FormatError("strategy file: duplicate transition entry");
    cell = to;
  }
  for (int cell : s.memory.table)
    if (cell == -1) throw FormatError("strategy file: transition mapping is not total");

  s.moves.assign(
      static_cast<size_t>(arena.node_count()) * static_cast<size_t>(s.memory.state_count()), -1);
  if (!doc["moves"].is_array()) throw FormatError("strategy file: \"moves\" must be an array");
  for (const json& mv : doc["moves"]) {
    std::string node_id = mv.value("node", std::string());
    int v;
    try {
      v = arena.node_index(node_id);
    } catch (const LookupError&) {
      throw FormatError("move: unknown node \"" + node_id + "\"");
    }
    if (arena.owner(v) != Player::zero)
      throw FormatError("move: node \"" + node_id + "\" is not an owner-0 node");
    int m = resolve_state(state_index, mv.value("state", std::string()));
    if (!mv.contains("edge")) throw FormatError("move: missing \"edge\"");
    int e = resolve_edge(arena, mv["edge"], "move");
    if (arena.edge(e).source != v)
      throw FormatError("move: edge does not leave node \"" + node_id + "\"");
    if (s.move_at(v, m) != -1) throw FormatError("move: duplicate entry");
    s.set_move(v, m, e);
  }
  return s;
}

namespace {

nlohmann::ordered_json edge_json(const Arena& arena, int e) {
  const EdgeSpec& spec = arena.edge_spec(e);
  nlohmann::ordered_json obj;
  obj["source"] = spec.source;
  obj["color"] = spec.color;
  obj["target"] = spec.target;
  return obj;
}

}  // namespace

std::string serialize(const Strategy& strategy, const Arena& arena) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json mem;
  mem["kind"] = strategy.memory.kind == MemoryKind::general ? "general" : "chromatic";
  mem["states"] = strategy.memory.state_ids;
  mem["initial"] = strategy.memory.state_ids[static_cast<size_t>(strategy.memory.initial)];
  mem["transitions"] = nlohmann::ordered_json::array();
  for (int m = 0; m < strategy.memory.state_count(); ++m) {
    for (int column = 0; column < strategy.memory.width; ++column) {
      nlohmann::ordered_json tr;
      tr["from"] = strategy.memory.state_ids[static_cast<size_t>(m)];
      if (strategy.memory.kind == MemoryKind::general) {
        tr["edge"] = edge_json(arena, column);
      } else {
        tr["color"] = arena.color_symbol(column);
      }
      tr["to"] = strategy.memory.state_ids[static_cast<size_t>(
          strategy.memory.table[static_cast<size_t>(m) *
                                    static_cast<size_t>(strategy.memory.width) +
                                static_cast<size_t>(column)])];
      mem["transitions"].push_back(std::move(tr));
    }
  }
  doc["memory"] = std::move(mem);
  doc["moves"] = nlohmann::ordered_json::array();
  for (int v = 0; v < arena.node_count(); ++v) {
    for (int m = 0; m < strategy.memory.state_count(); ++m) {
      int e = strategy.move_at(v, m);
      if (e < 0) continue;
      nlohmann::ordered_json mv;
      mv["node"] = arena.node(v).id;
      mv["state"] = strategy.memory.state_ids[static_cast<size_t>(m)];
      mv["edge"] = edge_json(arena, e);
      doc["moves"].push_back(std::move(mv));
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace chromem
