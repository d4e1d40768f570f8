#include "chromem/arena.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chromem/errors.hpp"

namespace chromem {

Arena::Arena(std::vector<Node> nodes, const std::vector<EdgeSpec>& edges)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) violations_.push_back("empty arena: no nodes declared");

  for (int i = 0; i < node_count(); ++i) {
    const std::string& id = nodes_[static_cast<size_t>(i)].id;
    if (id.empty()) violations_.push_back("empty node id at position " + std::to_string(i));
    auto [it, fresh] = node_index_.emplace(id, i);
    if (!fresh) violations_.push_back("duplicate node id: " + id);
  }

  out_.resize(nodes_.size());
  edges_.reserve(edges.size());
  edge_specs_ = edges;
  std::set<std::tuple<int, int, int>> seen;
  for (size_t i = 0; i < edges.size(); ++i) {
    const EdgeSpec& spec = edges[i];
    Edge e;
    if (spec.color.empty()) {
      violations_.push_back("empty color symbol on edge " + std::to_string(i));
    } else {
      auto [it, fresh] = color_index_.emplace(spec.color, color_count());
      if (fresh) colors_.push_back(spec.color);
      e.color = it->second;
    }
    if (auto it = node_index_.find(spec.source); it != node_index_.end()) {
      e.source = it->second;
    } else {
      violations_.push_back("dangling edge source: " + spec.source);
    }
    if (auto it = node_index_.find(spec.target); it != node_index_.end()) {
      e.target = it->second;
    } else {
      violations_.push_back("dangling edge target: " + spec.target);
    }
    if (e.source >= 0 && e.color >= 0 && e.target >= 0 &&
        !seen.insert({e.source, e.color, e.target}).second) {
      violations_.push_back("duplicate edge (" + spec.source + ", " + spec.color + ", " +
                            spec.target + ")");
    }
    if (e.source >= 0) out_[static_cast<size_t>(e.source)].push_back(static_cast<int>(i));
    edges_.push_back(e);
  }

  for (int v = 0; v < node_count(); ++v) {
    if (out_[static_cast<size_t>(v)].empty())
      violations_.push_back("zero out-degree: " + nodes_[static_cast<size_t>(v)].id);
  }
}

int Arena::node_index(std::string_view id) const {
  auto it = node_index_.find(std::string(id));
  if (it == node_index_.end()) throw LookupError("unknown node: " + std::string(id));
  return it->second;
}

int Arena::color_index(std::string_view symbol) const {
  auto it = color_index_.find(std::string(symbol));
  return it == color_index_.end() ? -1 : it->second;
}

bool is_path(const Arena& arena, const Path& p) {
  if (p.start < 0 || p.start >= arena.node_count()) return false;
  int at = p.start;
  for (int ei : p.edges) {
    if (ei < 0 || ei >= arena.edge_count()) return false;
    const Edge& e = arena.edge(ei);
    if (e.source != at) return false;
    at = e.target;
  }
  return true;
}

int path_target(const Arena& arena, const Path& p) {
  return p.edges.empty() ? p.start : arena.edge(p.edges.back()).target;
}

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw FormatError(std::string("syntax error: ") + err.what());
  }
}

std::string require_string(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string())
    throw FormatError(std::string(where) + ": missing string field \"" + key + "\"");
  return obj[key].get<std::string>();
}

}  // namespace

Arena parse_arena_unchecked(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array() ||
      !doc.contains("edges") || !doc["edges"].is_array())
    throw FormatError("arena file: expected object with \"nodes\" and \"edges\" arrays");

  std::vector<Node> nodes;
  for (const json& n : doc["nodes"]) {
    Node node;
    node.id = require_string(n, "id", "node");
    if (!n.contains("owner") || !n["owner"].is_number_integer())
      throw FormatError("node " + node.id + ": missing integer field \"owner\"");
    int owner = n["owner"].get<int>();
    if (owner != 0 && owner != 1)
      throw FormatError("node " + node.id + ": owner must be 0 or 1");
    node.owner = owner == 0 ? Player::zero : Player::one;
    nodes.push_back(std::move(node));
  }

  std::vector<EdgeSpec> edges;
  for (const json& e : doc["edges"]) {
    edges.push_back(EdgeSpec{require_string(e, "source", "edge"), require_string(e, "color", "edge"),
                             require_string(e, "target", "edge")});
  }
  return Arena(std::move(nodes), edges);
}

Arena parse_arena(const std::string& text) {
  Arena arena = parse_arena_unchecked(text);
  if (!arena.valid()) {
    std::ostringstream msg;
    msg << "invalid arena:";
    for (const std::string& v : arena.violations()) msg << "\n  " << v;
    throw ValidationError(msg.str());
  }
  return arena;
}

std::vector<std::string> validate(const Arena& arena) { return arena.violations(); }

std::vector<Edge> out_edges(const Arena& arena, std::string_view node_id) {
  int v = arena.node_index(node_id);
  std::vector<Edge> result;
  for (int ei : arena.out(v)) result.push_back(arena.edge(ei));
  return result;
}

std::string serialize(const Arena& arena) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const Node& n : arena.nodes()) {
    nlohmann::ordered_json item;
    item["id"] = n.id;
    item["owner"] = static_cast<int>(n.owner);
    doc["nodes"].push_back(std::move(item));
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (int e = 0; e < arena.edge_count(); ++e) {
    const EdgeSpec& spec = arena.edge_spec(e);
    nlohmann::ordered_json item;
    item["source"] = spec.source;
    item["color"] = spec.color;
    item["target"] = spec.target;
    doc["edges"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const Arena& arena) {
  std::ostringstream os;
  os << "digraph arena {\n";
  for (const Node& n : arena.nodes()) {
    os << "  " << dot_quote(n.id)
       << (n.owner == Player::zero ? " [shape=box];\n" : " [shape=ellipse];\n");
  }
  for (int e = 0; e < arena.edge_count(); ++e) {
    const EdgeSpec& spec = arena.edge_spec(e);
    os << "  " << dot_quote(spec.source) << " -> " << dot_quote(spec.target)
       << " [label=" << dot_quote(spec.color) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace chromem
