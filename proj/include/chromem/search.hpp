#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "chromem/arena.hpp"
#include "chromem/strategy.hpp"

namespace chromem {

struct SearchBudget {
  int max_states = 4;
  /// Per-level cap on candidates checked; setting it forces a sequential
  /// scan so the cut-off point is reproducible.
  std::optional<std::uint64_t> max_candidates{};
  std::size_t macro_cap = 1u << 20;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct LevelReport {
  int states = 0;
  std::uint64_t candidates = 0;  // candidates checked (exact for full scans)
  bool exhausted = false;        // stopped by max_candidates
  bool witness_found = false;
  std::uint64_t witness_table = 0;  // enumeration indices of the witness
  std::uint64_t witness_move = 0;
};

struct SearchResult {
  std::optional<int> minimal_states;
  std::optional<Strategy> witness;
  /// True when some level stopped at the candidate cap, so minimality could
  /// not be established. Distinct from "no witness up to max_states", where
  /// every level was scanned exhaustively.
  bool budget_exhausted = false;
  std::vector<LevelReport> levels;
};

/// Visit every chromatic strategy with exactly `states` memory states, up to
/// state renaming: transition tables in canonical form (state 0 initial,
/// states numbered by first appearance when reading the table from the
/// initial state column by column in color file order), crossed with all
/// next-move tables over owner-0 nodes and states restricted to pairs
/// reachable from the full node set. Returns the number visited; the
/// callback may stop the stream by returning false.
std::uint64_t enumerate_chromatic_strategies(const Arena& arena, int states,
                                             const std::function<bool(const Strategy&)>& visit);

/// Same stream for general memory structures (tables indexed by edges in
/// file order).
std::uint64_t enumerate_general_strategies(const Arena& arena, int states,
                                           const std::function<bool(const Strategy&)>& visit);

/// Smallest number of chromatic memory states admitting a strategy whose
/// traces from the start set are included in the reference's traces from the
/// same set, together with the first witness in enumeration order. Candidate
/// move tables are restricted to pairs reachable from the start set. The
/// witness is re-verified with trace_inclusion before it is returned.
SearchResult min_chromatic_states(const Arena& arena, const Strategy& reference,
                                  std::span<const int> start_nodes,
                                  const SearchBudget& budget = {});

/// Same search over general memory structures.
SearchResult min_general_states(const Arena& arena, const Strategy& reference,
                                std::span<const int> start_nodes, const SearchBudget& budget = {});

}  // namespace chromem
