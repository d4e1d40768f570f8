#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chromem/arena.hpp"
#include "chromem/strategy.hpp"

namespace chromem {

/// Strategy-restricted product of an arena and a memory structure. States
/// are (node, memory state) pairs reachable from the start set; its finite
/// traces are exactly the colorings of consistent play prefixes. Immutable
/// after construction.
struct PlayGraph {
  const Arena* arena = nullptr;
  std::vector<std::pair<int, int>> states;  // (node, memory state), BFS discovery order
  std::vector<int> initial;                 // state indices
  // Per state: (color, successor) pairs sorted by color then successor.
  std::vector<std::vector<std::pair<int, int>>> transitions;
};

/// Normalized start set: node indices sorted by file order, deduplicated.
/// Throws LookupError for unknown ids and ValidationError when empty.
std::vector<int> start_set(const Arena& arena, std::span<const std::string> node_ids);

/// Build the reachable play graph of `strategy` from the given start nodes.
/// Owner-1 states branch over all outgoing edges; owner-0 states follow the
/// strategy's single move (missing entries throw LookupError).
PlayGraph build_play_graph(const Arena& arena, const Strategy& strategy,
                           std::span<const int> start_nodes);

/// All colorings (as color-index words) of consistent plays of length
/// <= depth, including the empty word. `guard` bounds the enumerable depth;
/// exceeding it throws GuardError.
std::set<std::vector<int>> bounded_traces(const PlayGraph& g, int depth, int guard = 16);

/// Deterministic automaton of the (prefix-closed) trace language of a play
/// graph, built by subset construction. delta is dense over the arena's
/// colors; -1 marks the dead successor.
struct TraceAutomaton {
  int color_count = 0;
  int macro_count = 0;
  std::vector<int> delta;  // delta[macro * color_count + c] = macro or -1
};

/// Subset construction over a play graph; throws GuardError when more than
/// `macro_cap` macro-states get materialized.
TraceAutomaton determinize_traces(const PlayGraph& g, std::size_t macro_cap = 1u << 20);

struct InclusionVerdict {
  bool holds = false;
  /// Shortest violating color word (lexicographically least among shortest,
  /// by color file order), as color indices of the left arena. Present iff
  /// holds is false; always realizable on the left, never on the right.
  std::optional<std::vector<int>> counterexample;
};

/// Decide exactly whether every trace of `left` is a trace of `right`.
/// Colors are matched by symbol, so the two play graphs may live on
/// different arenas; a left color with no right counterpart is a violation
/// as soon as it is realizable.
InclusionVerdict trace_inclusion(const PlayGraph& left, const PlayGraph& right,
                                 std::size_t macro_cap = 1u << 20);

/// Space-separated color symbols of a color-index word.
std::string format_word(const Arena& arena, std::span<const int> word);

}  // namespace chromem
