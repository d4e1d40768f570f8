#pragma once

#include <span>
#include <string>
#include <string_view>

#include "chromem/arena.hpp"
#include "chromem/strategy.hpp"

namespace chromem {

/// Hard instance for chromatic memory: an (n+3)-node arena over colors
/// {x, y, z, c, d} together with the q-state counting strategy played on it.
/// Any chromatic strategy whose traces from u stay inside the reference
/// traces needs at least q^n memory states.
struct LowerBoundInstance {
  int n = 0;
  int q = 0;
  Arena arena;
  Strategy s1;
};

/// Build the instance for given n, q >= 1. Node order: u, v_0..v_n, t; edge
/// order: z-edges u->v_i, the x-cycle (v_i->v_{i-1} for i >= 1, then
/// v_0->v_n), y-self-loops, z-edge v_0->t, then the c- and d-edges t->v_0.
LowerBoundInstance make_lower_bound_instance(int n, int q);

/// Counter value the reference strategy ends with after any play colored
/// z w z: the number of y's modulo q in the suffix of w that starts right of
/// the (n+1)st x from the right (all of w when it has at most n x's).
/// Throws FormatError when w contains symbols other than x and y.
int counter_value(std::string_view w, int n, int q);

/// The word x y^{r_1} x y^{r_2} ... x y^{r_k} for run lengths (r_1..r_k).
std::string block_word(std::span<const int> runs);

/// A word w with counter_value(block_word(k1) + w) == 0 and
/// counter_value(block_word(k2) + w) != 0. Requires two distinct run-length
/// sequences of length n with entries in [0, q).
std::string distinguishing_word(std::span<const int> k1, std::span<const int> k2, int n, int q);

/// True iff the q^n words z + block_word(runs) drive the chromatic memory
/// into pairwise distinct states from its initial state. False means the
/// structure is too small to follow the reference strategy on this family.
bool verify_separation(const MemoryStructure& mem, const Arena& arena, int n, int q);

}  // namespace chromem
