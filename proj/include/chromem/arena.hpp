#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chromem {

enum class Player : int { zero = 0, one = 1 };

struct Node {
  std::string id;
  Player owner = Player::zero;
};

/// Edge with endpoints and color interned to dense indices.
/// An unresolved endpoint (undeclared node id) is kept as -1 so that an
/// ill-formed arena can still be inspected by validate().
struct Edge {
  int source = -1;
  int color = -1;
  int target = -1;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge as written in a file: raw symbols, no interning.
struct EdgeSpec {
  std::string source;
  std::string color;
  std::string target;
};

/// Finite edge-colored arena with player-partitioned nodes.
///
/// Nodes, colors and edges keep the order of the source file. That order is
/// the tie-break for every deterministic choice made downstream, so it is
/// never re-sorted. Construction never throws on semantic problems; they are
/// collected and reported by validate(). Arenas are immutable once built and
/// safe to share across threads.
class Arena {
 public:
  Arena() = default;
  Arena(std::vector<Node> nodes, const std::vector<EdgeSpec>& edges);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int color_count() const { return static_cast<int>(colors_.size()); }

  const Node& node(int v) const { return nodes_[static_cast<size_t>(v)]; }
  const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }
  const EdgeSpec& edge_spec(int e) const { return edge_specs_[static_cast<size_t>(e)]; }
  const std::string& color_symbol(int c) const { return colors_[static_cast<size_t>(c)]; }
  Player owner(int v) const { return nodes_[static_cast<size_t>(v)].owner; }

  /// Dense index of a declared node id; throws LookupError if unknown.
  int node_index(std::string_view id) const;
  /// Dense index of a color symbol, or -1 if the symbol never occurs.
  int color_index(std::string_view symbol) const;

  /// Outgoing edge indices of node v, in file order.
  std::span<const int> out(int v) const { return out_[static_cast<size_t>(v)]; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& colors() const { return colors_; }

  /// Violations recorded at construction time; empty iff the arena is valid.
  const std::vector<std::string>& violations() const { return violations_; }
  bool valid() const { return violations_.empty(); }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<EdgeSpec> edge_specs_;
  std::vector<std::string> colors_;
  std::vector<std::vector<int>> out_;
  std::unordered_map<std::string, int> node_index_;
  std::unordered_map<std::string, int> color_index_;
  std::vector<std::string> violations_;
};

/// Finite path: a start node and a chain of edge indices (empty = the
/// 0-length path at `start`).
struct Path {
  int start = -1;
  std::vector<int> edges;
};

/// True iff consecutive edges chain and the first edge leaves `start`.
bool is_path(const Arena& arena, const Path& p);
/// Target node of a path (its start when empty).
int path_target(const Arena& arena, const Path& p);

/// Parse an arena file; throws FormatError on malformed input and
/// ValidationError when the content violates an arena invariant.
Arena parse_arena(const std::string& text);
/// Parse without the validity check; throws FormatError only. The result may
/// be invalid and is only suitable for validate().
Arena parse_arena_unchecked(const std::string& text);

/// All invariant violations of an arena; empty list means valid.
std::vector<std::string> validate(const Arena& arena);

/// Outgoing edges of the node with the given id, in file order.
std::vector<Edge> out_edges(const Arena& arena, std::string_view node_id);

/// Canonical JSON serialization; byte-stable for a fixed arena.
std::string serialize(const Arena& arena);

/// Graphviz rendering: owner-0 nodes square, owner-1 nodes round, edges
/// labeled by color. Byte-stable for a fixed arena.
std::string export_dot(const Arena& arena);

}  // namespace chromem
