#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chromem/arena.hpp"
#include "chromem/strategy.hpp"

namespace chromem {

using BigInt = boost::multiprecision::cpp_int;

/// Knowledge carried by a chromatized strategy: one entry per node in file
/// order. In winning mode an entry is a reference-strategy state or -1
/// (unknown). In preference mode an entry packs (origin node, reference
/// state) as origin * q + state, again with -1 for unknown.
using KnowledgeState = std::vector<int>;

inline int pref_origin(int packed, int q) { return packed / q; }
inline int pref_state(int packed, int q) { return packed % q; }

/// Total preorder on nodes given as ascending equivalence classes (a later
/// class is strictly greater).
struct NodePreorder {
  std::vector<std::vector<int>> classes;  // node indices, ascending classes
  std::vector<int> class_of;              // per node index
};

/// Build a preorder from classes of node ids; every node must occur exactly
/// once (ValidationError otherwise, LookupError on unknown ids).
NodePreorder make_preorder(const Arena& arena,
                           const std::vector<std::vector<std::string>>& classes);

/// Parse a preorder file `{"classes":[["v1","v2"],["u"]]}` (ascending).
NodePreorder parse_preorder(const std::string& text, const Arena& arena);

/// Edges usable to justify knowledge about node v after seeing color c:
/// target v, color c, a known source, and (for owner-0 sources) agreement
/// with the reference strategy's move. Returned in arena file order.
std::vector<int> good_edges(const Arena& arena, const Strategy& s1, const KnowledgeState& f,
                            int v, int c);

struct ChromatizeResult {
  Strategy strategy;                  // chromatic kind, state ids "k0", "k1", ...
  std::vector<KnowledgeState> states; // decoded knowledge per memory state
  int reachable_states() const { return static_cast<int>(states.size()); }
};

/// Chromatic strategy whose traces from the start set are traces of s1 from
/// the same set. Reachable state count is at most (q+1)^n.
ChromatizeResult chromatize_winning(const Arena& arena, const Strategy& s1,
                                    std::span<const int> start_nodes);

/// Chromatic strategy that is, from every node v, at least as good as s1
/// started anywhere weakly above v in the preorder: traces of the result
/// from {v} are traces of s1 from {u : v <= u}. Reachable state count is at
/// most (qn+1)^n.
ChromatizeResult chromatize_preference(const Arena& arena, const Strategy& s1,
                                       const NodePreorder& preorder);

/// Worst-case chromatic state counts ((q+1)^n, (qn+1)^n) as exact integers.
std::pair<BigInt, BigInt> nominal_bounds(int n, int q);

}  // namespace chromem
