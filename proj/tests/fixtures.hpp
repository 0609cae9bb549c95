#pragma once

// Shared hand-built instances for tests.

#include "kpack/instance.hpp"

namespace kpack::fixtures {

// "LB-3": the smallest instance whose only route to the optimum goes
// through a tail change. Greedy (index order) picks the three packing sets
// s, m, t. The outside sets are:
//   v1 = {s0, m0, t0}   degree 3 (s, m, t)
//   z  = {m1, t1, m2}   degree 2 (m, t)
//   g  = {s1, s2, f1}   degree 1 (s)
//   w1 = {t2, f2, f3}   degree 1 (t)
// No improvement removes <= 2 sets. The unique optimum swaps all of
// {s, m, t} for {v1, z, g, w1}; reaching it canonically requires the size-1
// tail change (t <-> w1) anchored at edge (v1, t), after which v1 becomes a
// degree-2 edge between s and m.
inline SetSystem lb3() {
  SetSystem sys;
  sys.universe_size = 12;
  sys.pad_begin = 12;
  sys.k = 3;
  sys.sets = {
      {0, 1, 2},    // 0: s
      {3, 4, 5},    // 1: m
      {6, 7, 8},    // 2: t
      {0, 3, 6},    // 3: v1
      {4, 5, 7},    // 4: z
      {1, 2, 9},    // 5: g
      {8, 10, 11},  // 6: w1
  };
  return sys;
}

inline Packing lb3_start() { return Packing{{0, 1, 2}}; }

}  // namespace kpack::fixtures
