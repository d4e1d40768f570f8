#include "chromem/lowerbound.hpp"

#include <algorithm>
#include <set>

#include "chromem/errors.hpp"

namespace chromem {

LowerBoundInstance make_lower_bound_instance(int n, int q) {
  if (n < 1 || q < 1) throw ValidationError("lower bound instance requires n, q >= 1");

  auto ring = [](int i) { return "v" + std::to_string(i); };

  std::vector<Node> nodes;
  nodes.push_back({"u", Player::one});
  for (int i = 0; i <= n; ++i) nodes.push_back({ring(i), Player::one});
  nodes.push_back({"t", Player::zero});

  std::vector<EdgeSpec> edges;
  for (int i = 0; i <= n; ++i) edges.push_back({"u", "z", ring(i)});
  for (int i = 1; i <= n; ++i) edges.push_back({ring(i), "x", ring(i - 1)});
  edges.push_back({ring(0), "x", ring(n)});
  int reset_edge = static_cast<int>(edges.size()) - 1;  // the only resetting x-edge
  for (int i = 0; i <= n; ++i) edges.push_back({ring(i), "y", ring(i)});
  edges.push_back({ring(0), "z", "t"});
  edges.push_back({"t", "c", ring(0)});
  edges.push_back({"t", "d", ring(0)});

  LowerBoundInstance inst;
  inst.n = n;
  inst.q = q;
  inst.arena = Arena(std::move(nodes), edges);

  Strategy& s1 = inst.s1;
  s1.memory.kind = MemoryKind::general;
  for (int m = 0; m < q; ++m) s1.memory.state_ids.push_back(std::to_string(m));
  s1.memory.initial = 0;
  s1.memory.width = inst.arena.edge_count();
  s1.memory.table.resize(static_cast<size_t>(q) * static_cast<size_t>(s1.memory.width));
  int y_color = inst.arena.color_index("y");
  for (int m = 0; m < q; ++m) {
    for (int e = 0; e < inst.arena.edge_count(); ++e) {
      int succ = m;
      if (inst.arena.edge(e).color == y_color)
        succ = (m + 1) % q;
      else if (e == reset_edge)
        succ = 0;
      s1.memory.table[static_cast<size_t>(m) * static_cast<size_t>(s1.memory.width) +
                      static_cast<size_t>(e)] = succ;
    }
  }

  int t = inst.arena.node_index("t");
  int c_edge = -1, d_edge = -1;
  for (int e : inst.arena.out(t)) {
    const std::string& symbol = inst.arena.color_symbol(inst.arena.edge(e).color);
    (symbol == "c" ? c_edge : d_edge) = e;
  }
  s1.moves.assign(static_cast<size_t>(inst.arena.node_count()) * static_cast<size_t>(q), -1);
  for (int m = 0; m < q; ++m) s1.set_move(t, m, m == 0 ? c_edge : d_edge);
  return inst;
}

int counter_value(std::string_view w, int n, int q) {
  int xs = 0;
  for (char ch : w) {
    if (ch != 'x' && ch != 'y') throw FormatError(std::string("foreign symbol in word: ") + ch);
    if (ch == 'x') ++xs;
  }
  size_t begin = 0;
  if (xs > n) {
    // position one past the (n+1)st x from the right
    int remaining = n + 1;
    for (size_t i = w.size(); i-- > 0;) {
      if (w[i] == 'x' && --remaining == 0) {
        begin = i + 1;
        break;
      }
    }
  }
  int ys = 0;
  for (size_t i = begin; i < w.size(); ++i)
    if (w[i] == 'y') ++ys;
  return ys % q;
}

std::string block_word(std::span<const int> runs) {
  std::string word;
  for (int r : runs) {
    if (r < 0) throw ValidationError("block_word: run lengths must be nonnegative");
    word += 'x';
    word.append(static_cast<size_t>(r), 'y');
  }
  return word;
}

std::string distinguishing_word(std::span<const int> k1, std::span<const int> k2, int n, int q) {
  if (static_cast<int>(k1.size()) != n || static_cast<int>(k2.size()) != n)
    throw ValidationError("distinguishing_word: run-length sequences must have length n");
  for (std::span<const int> k : {k1, k2})
    for (int entry : k)
      if (entry < 0 || entry >= q)
        throw ValidationError("distinguishing_word: entries must lie in [0, q)");

  int diff = -1;  // largest differing index
  for (int i = 0; i < n; ++i)
    if (k1[static_cast<size_t>(i)] != k2[static_cast<size_t>(i)]) diff = i;
  if (diff < 0) throw ValidationError("distinguishing_word: sequences are equal");

  int tail = 0;
  for (int i = diff; i < n; ++i) tail += k1[static_cast<size_t>(i)];
  int r = (q - tail % q) % q;
  std::string word(static_cast<size_t>(diff + 1), 'x');
  word.append(static_cast<size_t>(r), 'y');
  return word;
}

bool verify_separation(const MemoryStructure& mem, const Arena& arena, int n, int q) {
  if (mem.kind != MemoryKind::chromatic)
    throw ValidationError("verify_separation: memory structure must be chromatic");
  int color_of[3];
  const char* needed = "zxy";
  for (int i = 0; i < 3; ++i) {
    color_of[i] = arena.color_index(std::string(1, needed[i]));
    if (color_of[i] < 0)
      throw ValidationError(std::string("verify_separation: arena lacks color ") + needed[i]);
  }

  double budget = 1.0;
  for (int i = 0; i < n; ++i) budget *= q;
  if (budget > static_cast<double>(1u << 22))
    throw GuardError("verify_separation: q^n too large to enumerate");

  std::vector<int> runs(static_cast<size_t>(n), 0);
  std::set<int> reached;
  std::uint64_t total = 0;
  while (true) {
    int m = mem.initial;
    m = mem.step_color(m, color_of[0]);  // leading z
    for (int r : runs) {
      m = mem.step_color(m, color_of[1]);
      for (int i = 0; i < r; ++i) m = mem.step_color(m, color_of[2]);
    }
    ++total;
    if (!reached.insert(m).second) return false;

    int pos = n - 1;
    while (pos >= 0 && runs[static_cast<size_t>(pos)] == q - 1) runs[static_cast<size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++runs[static_cast<size_t>(pos)];
  }
  return reached.size() == total;
}

}  // namespace chromem
