#pragma once

#include <span>
#include <string>
#include <vector>

#include "chromem/arena.hpp"

namespace chromem {

enum class MemoryKind { general, chromatic };

/// Deterministic finite automaton driving a strategy's memory.
///
/// A general structure reads edges; a chromatic one reads only colors. The
/// transition table is dense and total over its declared domain: rows are
/// states in file order, columns are edge indices (general) or color indices
/// (chromatic) of the arena the structure was declared against.
struct MemoryStructure {
  MemoryKind kind = MemoryKind::general;
  std::vector<std::string> state_ids;  // file order; index = dense state id
  int initial = 0;
  int width = 0;            // #edges (general) or #colors (chromatic)
  std::vector<int> table;   // table[m * width + column] = successor state

  int state_count() const { return static_cast<int>(state_ids.size()); }

  /// Successor state after feeding one edge.
  int step(const Arena& arena, int m, int edge_idx) const {
    int column = kind == MemoryKind::chromatic ? arena.edge(edge_idx).color : edge_idx;
    return table[static_cast<size_t>(m) * static_cast<size_t>(width) +
                 static_cast<size_t>(column)];
  }

  /// Successor state on a color; meaningful for chromatic structures only.
  int step_color(int m, int color) const {
    return table[static_cast<size_t>(m) * static_cast<size_t>(width) +
                 static_cast<size_t>(color)];
  }
};

/// Strategy of Player 0: a memory structure plus the next-move table.
/// Moves may be absent (-1) on pairs the construction never reaches.
struct Strategy {
  MemoryStructure memory;
  std::vector<int> moves;  // moves[v * states + m] = edge index, or -1

  int move_at(int v, int m) const {
    return moves[static_cast<size_t>(v) * static_cast<size_t>(memory.state_count()) +
                 static_cast<size_t>(m)];
  }
  void set_move(int v, int m, int edge_idx) {
    moves[static_cast<size_t>(v) * static_cast<size_t>(memory.state_count()) +
          static_cast<size_t>(m)] = edge_idx;
  }
};

/// State reached from m after feeding a finite edge sequence (left fold).
/// Throws LookupError when an edge index is outside the declared domain.
int run_memory(const Arena& arena, const MemoryStructure& mem, int m, std::span<const int> edges);

/// True iff some color-indexed table reproduces the structure's transitions;
/// true by construction for chromatic-kind structures.
bool is_chromatic(const MemoryStructure& mem, const Arena& arena);

/// True iff every owner-0 decision along p (including the first move when
/// source(p) is owner-0) equals the strategy's next-move at the then-current
/// memory state. A missing next-move entry makes the path inconsistent.
bool consistent(const Arena& arena, const Strategy& strategy, const Path& p);

/// Next-move entry at (v, m); throws LookupError when v is not an owner-0
/// node or the entry is absent.
int strategy_move(const Arena& arena, const Strategy& strategy, int v, int m);

/// Parse a strategy file against the arena it was declared for. Throws
/// FormatError on malformed or unresolvable content (unknown states, nodes,
/// colors, edges, non-total transition table, owner-1 move entries).
Strategy parse_strategy(const std::string& text, const Arena& arena);

/// Canonical JSON serialization; byte-stable for a fixed strategy.
std::string serialize(const Strategy& strategy, const Arena& arena);

}  // namespace chromem
