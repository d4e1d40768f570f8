#include "chromem/search.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "chromem/errors.hpp"
#include "chromem/play_graph.hpp"

namespace chromem {

namespace {

using u64 = std::uint64_t;

constexpr u64 kNoTable = std::numeric_limits<u64>::max();
constexpr u64 kChunkTables = 1u << 16;

struct Domain {
  const Arena* arena = nullptr;
  MemoryKind kind = MemoryKind::chromatic;
  int states = 1;           // Q
  int width = 0;            // table columns: colors (chromatic) or edges (general)
  std::vector<int> column;  // per edge index
};

Domain make_domain(const Arena& arena, MemoryKind kind, int states) {
  if (states < 1) throw ValidationError("enumeration requires at least one state");
  if (states >= (1 << 7)) throw GuardError("enumeration: too many states");
  Domain dom;
  dom.arena = &arena;
  dom.kind = kind;
  dom.states = states;
  dom.width = kind == MemoryKind::chromatic ? arena.color_count() : arena.edge_count();
  dom.column.resize(static_cast<size_t>(arena.edge_count()));
  for (int e = 0; e < arena.edge_count(); ++e)
    dom.column[static_cast<size_t>(e)] = kind == MemoryKind::chromatic ? arena.edge(e).color : e;
  return dom;
}

// Number of transition tables Q^(Q*width), or kNoTable on overflow.
u64 table_space(const Domain& dom) {
  unsigned __int128 total = 1;
  for (int i = 0; i < dom.states * dom.width; ++i) {
    total *= static_cast<unsigned>(dom.states);
    if (total > std::numeric_limits<u64>::max()) return kNoTable;
  }
  return static_cast<u64>(total);
}

// Advance a fixed-radix odometer; false once it wraps around to all zeros.
bool advance_uniform(std::vector<int>& digits, int radix) {
  for (size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix) return true;
    digits[i] = 0;
  }
  return false;
}

bool advance_mixed(std::vector<int>& digits, const std::vector<int>& radices) {
  for (size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radices[i]) return true;
    digits[i] = 0;
  }
  return false;
}

void decode_table(u64 index, int radix, std::vector<int>& digits) {
  for (size_t i = digits.size(); i-- > 0;) {
    digits[i] = static_cast<int>(index % static_cast<u64>(radix));
    index /= static_cast<u64>(radix);
  }
}

// Canonical form: all states reachable from 0 and numbered by first
// appearance when rows are expanded in discovery order, columns in file
// order. Enumerating only such tables visits each machine once per
// renaming orbit.
bool canonical_table(const Domain& dom, const std::vector<int>& table) {
  int next_expected = 1;
  int discovered[1 << 7];
  bool seen[1 << 7] = {};
  discovered[0] = 0;
  seen[0] = true;
  int count = 1;
  for (int at = 0; at < count; ++at) {
    const int m = discovered[at];
    for (int a = 0; a < dom.width; ++a) {
      int s = table[static_cast<size_t>(m) * static_cast<size_t>(dom.width) +
                    static_cast<size_t>(a)];
      if (seen[s]) continue;
      if (s != next_expected) return false;
      seen[s] = true;
      ++next_expected;
      discovered[count++] = s;
    }
  }
  return next_expected == dom.states;
}

// Owner-0 (node, state) pairs reachable from the start set when owner-0
// nodes are allowed to take any edge; a superset of the pairs any concrete
// move table can reach, computed before move enumeration.
void reachable_decision_pairs(const Domain& dom, const std::vector<int>& table,
                              std::span<const int> start, std::vector<std::pair<int, int>>& pairs,
                              std::vector<char>& visited, std::vector<int>& stack) {
  const Arena& arena = *dom.arena;
  const int q = dom.states;
  pairs.clear();
  stack.clear();
  std::fill(visited.begin(), visited.end(), 0);
  auto push = [&](int v, int m) {
    int id = v * q + m;
    if (!visited[static_cast<size_t>(id)]) {
      visited[static_cast<size_t>(id)] = 1;
      stack.push_back(id);
    }
  };
  for (int v : start) push(v, 0);
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    int v = id / q, m = id % q;
    if (arena.owner(v) == Player::zero) pairs.emplace_back(v, m);
    for (int e : arena.out(v)) {
      int m2 = table[static_cast<size_t>(m) * static_cast<size_t>(dom.width) +
                     static_cast<size_t>(dom.column[static_cast<size_t>(e)])];
      push(arena.edge(e).target, m2);
    }
  }
  std::sort(pairs.begin(), pairs.end());
}

// Per-candidate inclusion check against the pre-determinized reference:
// depth-first walk of (node, candidate state, reference macro) triples,
// failing as soon as the candidate realizes a color the reference cannot.
struct InclusionChecker {
  const Domain* dom = nullptr;
  const TraceAutomaton* ref = nullptr;
  std::span<const int> start;
  std::vector<int> moves;  // dense (node, state) -> edge, -1 when absent
  std::vector<char> visited;
  std::vector<int> touched;
  std::vector<int> stack;

  InclusionChecker(const Domain& d, const TraceAutomaton& r, std::span<const int> s)
      : dom(&d), ref(&r), start(s) {
    moves.assign(static_cast<size_t>(d.arena->node_count()) * static_cast<size_t>(d.states), -1);
    visited.assign(moves.size() * static_cast<size_t>(r.macro_count), 0);
  }

  bool included(const std::vector<int>& table) {
    const Arena& arena = *dom->arena;
    const int q = dom->states;
    const int r_count = ref->macro_count;
    for (int id : touched) visited[static_cast<size_t>(id)] = 0;
    touched.clear();
    stack.clear();
    auto push = [&](int v, int m, int r) {
      int id = (v * q + m) * r_count + r;
      if (!visited[static_cast<size_t>(id)]) {
        visited[static_cast<size_t>(id)] = 1;
        touched.push_back(id);
        stack.push_back(id);
      }
    };
    for (int v : start) push(v, 0, 0);
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      int r = id % r_count;
      int vm = id / r_count;
      int v = vm / q, m = vm % q;
      auto step = [&](int e) {
        int c = arena.edge(e).color;
        int r2 = ref->delta[static_cast<size_t>(r) * static_cast<size_t>(ref->color_count) +
                            static_cast<size_t>(c)];
        if (r2 < 0) return false;
        int m2 = table[static_cast<size_t>(m) * static_cast<size_t>(dom->width) +
                       static_cast<size_t>(dom->column[static_cast<size_t>(e)])];
        push(arena.edge(e).target, m2, r2);
        return true;
      };
      if (arena.owner(v) == Player::zero) {
        if (!step(moves[static_cast<size_t>(vm)])) return false;
      } else {
        for (int e : arena.out(v))
          if (!step(e)) return false;
      }
    }
    return true;
  }
};

Strategy build_candidate(const Domain& dom, const std::vector<int>& table,
                         const std::vector<std::pair<int, int>>& pairs,
                         const std::vector<int>& move_digits) {
  const Arena& arena = *dom.arena;
  Strategy s;
  s.memory.kind = dom.kind;
  for (int m = 0; m < dom.states; ++m) s.memory.state_ids.push_back("m" + std::to_string(m));
  s.memory.initial = 0;
  s.memory.width = dom.width;
  s.memory.table = table;
  s.moves.assign(static_cast<size_t>(arena.node_count()) * static_cast<size_t>(dom.states), -1);
  for (size_t i = 0; i < pairs.size(); ++i) {
    auto [v, m] = pairs[i];
    s.set_move(v, m, arena.out(v)[static_cast<size_t>(move_digits[i])]);
  }
  return s;
}

u64 enumerate_impl(const Arena& arena, MemoryKind kind, int states,
                   const std::function<bool(const Strategy&)>& visit) {
  Domain dom = make_domain(arena, kind, states);

  std::vector<int> all_nodes(static_cast<size_t>(arena.node_count()));
  for (int v = 0; v < arena.node_count(); ++v) all_nodes[static_cast<size_t>(v)] = v;

  std::vector<int> table(static_cast<size_t>(states) * static_cast<size_t>(dom.width), 0);
  std::vector<std::pair<int, int>> pairs;
  std::vector<char> visited(static_cast<size_t>(arena.node_count()) * static_cast<size_t>(states));
  std::vector<int> stack;
  u64 count = 0;
  do {
    if (!canonical_table(dom, table)) continue;
    reachable_decision_pairs(dom, table, all_nodes, pairs, visited, stack);
    std::vector<int> radices;
    for (auto [v, m] : pairs) radices.push_back(static_cast<int>(arena.out(v).size()));
    std::vector<int> move_digits(pairs.size(), 0);
    do {
      ++count;
      if (!visit(build_candidate(dom, table, pairs, move_digits))) return count;
    } while (advance_mixed(move_digits, radices));
  } while (advance_uniform(table, states));
  return count;
}

struct LevelOutcome {
  bool found = false;
  u64 table_idx = 0;
  u64 move_idx = 0;
  u64 candidates = 0;
  bool exhausted = false;
};

LevelOutcome scan_level_sequential(const Domain& dom, std::span<const int> start,
                                   const TraceAutomaton& ref, std::optional<u64> cap) {
  const Arena& arena = *dom.arena;
  LevelOutcome outcome;
  InclusionChecker checker(dom, ref, start);
  std::vector<int> table(static_cast<size_t>(dom.states) * static_cast<size_t>(dom.width), 0);
  std::vector<std::pair<int, int>> pairs;
  std::vector<char> visited(static_cast<size_t>(arena.node_count()) *
                            static_cast<size_t>(dom.states));
  std::vector<int> stack;
  u64 table_idx = 0;
  do {
    if (!canonical_table(dom, table)) {
      ++table_idx;
      continue;
    }
    reachable_decision_pairs(dom, table, start, pairs, visited, stack);
    std::vector<int> radices;
    for (auto [v, m] : pairs) radices.push_back(static_cast<int>(arena.out(v).size()));
    std::vector<int> move_digits(pairs.size(), 0);
    u64 move_idx = 0;
    do {
      if (cap && outcome.candidates >= *cap) {
        outcome.exhausted = true;
        return outcome;
      }
      ++outcome.candidates;
      for (size_t i = 0; i < pairs.size(); ++i) {
        auto [v, m] = pairs[i];
        checker.moves[static_cast<size_t>(v) * static_cast<size_t>(dom.states) +
                      static_cast<size_t>(m)] =
            arena.out(v)[static_cast<size_t>(move_digits[i])];
      }
      if (checker.included(table)) {
        outcome.found = true;
        outcome.table_idx = table_idx;
        outcome.move_idx = move_idx;
        return outcome;
      }
      ++move_idx;
    } while (advance_mixed(move_digits, radices));
    ++table_idx;
  } while (advance_uniform(table, dom.states));
  return outcome;
}

LevelOutcome scan_level_parallel(const Domain& dom, std::span<const int> start,
                                 const TraceAutomaton& ref, unsigned threads, u64 total_tables) {
  const Arena& arena = *dom.arena;
  std::atomic<u64> next_chunk{0};
  std::atomic<u64> best_table{kNoTable};
  std::atomic<u64> candidates{0};
  std::mutex best_mutex;
  u64 best_move = 0;
  const u64 chunk_count = (total_tables + kChunkTables - 1) / kChunkTables;

  auto worker = [&]() {
    InclusionChecker checker(dom, ref, start);
    std::vector<int> table(static_cast<size_t>(dom.states) * static_cast<size_t>(dom.width));
    std::vector<std::pair<int, int>> pairs;
    std::vector<char> visited(static_cast<size_t>(arena.node_count()) *
                              static_cast<size_t>(dom.states));
    std::vector<int> stack;
    u64 local = 0;
    for (u64 chunk = next_chunk.fetch_add(1); chunk < chunk_count;
         chunk = next_chunk.fetch_add(1)) {
      u64 begin = chunk * kChunkTables;
      if (begin > best_table.load(std::memory_order_relaxed)) break;
      u64 end = std::min(begin + kChunkTables, total_tables);
      decode_table(begin, dom.states, table);
      for (u64 table_idx = begin; table_idx < end;
           ++table_idx, advance_uniform(table, dom.states)) {
        if (table_idx > best_table.load(std::memory_order_relaxed)) break;
        if (!canonical_table(dom, table)) continue;
        reachable_decision_pairs(dom, table, start, pairs, visited, stack);
        std::vector<int> radices;
        for (auto [v, m] : pairs) radices.push_back(static_cast<int>(arena.out(v).size()));
        std::vector<int> move_digits(pairs.size(), 0);
        u64 move_idx = 0;
        do {
          ++local;
          for (size_t i = 0; i < pairs.size(); ++i) {
            auto [v, m] = pairs[i];
            checker.moves[static_cast<size_t>(v) * static_cast<size_t>(dom.states) +
                          static_cast<size_t>(m)] =
                arena.out(v)[static_cast<size_t>(move_digits[i])];
          }
          if (checker.included(table)) {
            std::lock_guard<std::mutex> lock(best_mutex);
            u64 current = best_table.load(std::memory_order_relaxed);
            if (table_idx < current || (table_idx == current && move_idx < best_move)) {
              best_table.store(table_idx, std::memory_order_relaxed);
              best_move = move_idx;
            }
            break;  // later moves of this table cannot beat this hit
          }
          ++move_idx;
        } while (advance_mixed(move_digits, radices));
      }
    }
    candidates.fetch_add(local, std::memory_order_relaxed);
  };

  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  LevelOutcome outcome;
  outcome.candidates = candidates.load();
  if (best_table.load() != kNoTable) {
    outcome.found = true;
    outcome.table_idx = best_table.load();
    outcome.move_idx = best_move;
  }
  return outcome;
}

// Rebuild the concrete witness from its enumeration indices.
Strategy rebuild_witness(const Domain& dom, std::span<const int> start, u64 table_idx,
                         u64 move_idx) {
  const Arena& arena = *dom.arena;
  std::vector<int> table(static_cast<size_t>(dom.states) * static_cast<size_t>(dom.width));
  decode_table(table_idx, dom.states, table);
  std::vector<std::pair<int, int>> pairs;
  std::vector<char> visited(static_cast<size_t>(arena.node_count()) *
                            static_cast<size_t>(dom.states));
  std::vector<int> stack;
  reachable_decision_pairs(dom, table, start, pairs, visited, stack);
  std::vector<int> radices;
  for (auto [v, m] : pairs) radices.push_back(static_cast<int>(arena.out(v).size()));
  std::vector<int> move_digits(pairs.size(), 0);
  for (u64 i = 0; i < move_idx; ++i) advance_mixed(move_digits, radices);
  return build_candidate(dom, table, pairs, move_digits);
}

SearchResult min_states_impl(const Arena& arena, const Strategy& reference,
                             std::span<const int> start_nodes, const SearchBudget& budget,
                             MemoryKind kind) {
  if (budget.max_states < 1) throw ValidationError("search budget must allow at least one state");
  PlayGraph ref_graph = build_play_graph(arena, reference, start_nodes);
  TraceAutomaton ref = determinize_traces(ref_graph, budget.macro_cap);

  unsigned threads = budget.threads ? budget.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;

  SearchResult result;
  for (int q = 1; q <= budget.max_states; ++q) {
    Domain dom = make_domain(arena, kind, q);
    u64 total_tables = table_space(dom);
    if (total_tables == kNoTable && !budget.max_candidates)
      throw GuardError("search: table space at " + std::to_string(q) +
                       " states overflows; set a candidate cap");

    LevelOutcome outcome;
    bool sequential = threads <= 1 || budget.max_candidates.has_value() ||
                      total_tables <= 2 * kChunkTables;
    if (sequential) {
      outcome = scan_level_sequential(dom, start_nodes, ref, budget.max_candidates);
    } else {
      outcome = scan_level_parallel(dom, start_nodes, ref, threads, total_tables);
    }

    LevelReport report;
    report.states = q;
    report.candidates = outcome.candidates;
    report.exhausted = outcome.exhausted;
    report.witness_found = outcome.found;
    report.witness_table = outcome.table_idx;
    report.witness_move = outcome.move_idx;
    result.levels.push_back(report);

    if (outcome.found) {
      Strategy witness = rebuild_witness(dom, start_nodes, outcome.table_idx, outcome.move_idx);
      PlayGraph left = build_play_graph(arena, witness, start_nodes);
      if (!trace_inclusion(left, ref_graph, budget.macro_cap).holds)
        throw Error("search: witness failed post-hoc inclusion verification");
      result.minimal_states = q;
      result.witness = std::move(witness);
      return result;
    }
    if (outcome.exhausted) {
      result.budget_exhausted = true;
      return result;
    }
  }
  return result;
}

}  // namespace

std::uint64_t enumerate_chromatic_strategies(const Arena& arena, int states,
                                             const std::function<bool(const Strategy&)>& visit) {
  return enumerate_impl(arena, MemoryKind::chromatic, states, visit);
}

std::uint64_t enumerate_general_strategies(const Arena& arena, int states,
                                           const std::function<bool(const Strategy&)>& visit) {
  return enumerate_impl(arena, MemoryKind::general, states, visit);
}

SearchResult min_chromatic_states(const Arena& arena, const Strategy& reference,
                                  std::span<const int> start_nodes, const SearchBudget& budget) {
  return min_states_impl(arena, reference, start_nodes, budget, MemoryKind::chromatic);
}

SearchResult min_general_states(const Arena& arena, const Strategy& reference,
                                std::span<const int> start_nodes, const SearchBudget& budget) {
  return min_states_impl(arena, reference, start_nodes, budget, MemoryKind::general);
}

}  // namespace chromem
