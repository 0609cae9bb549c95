#pragma once

// Ground truth: exact branch-and-bound optimum and an unconstrained
// brute-force improvement search, used to judge the fast paths.

#include <cstdint>
#include <optional>

#include "kpack/instance.hpp"

namespace kpack {

struct ExactResult {
  Packing packing;
  bool proved = false;       // search completed within the node budget
  long long nodes = 0;
};

// Maximum packing by branch and bound; sets are ordered by conflict degree
// (descending, ties by index) and pruned with the remaining-count bound.
ExactResult exact_optimum(const SetSystem& sys,
                          long long node_budget = 10'000'000);

// Exhaustively tries every remove-subset of `a` up to max_remove and every
// disjoint add family one larger. With require_tail_structure the witness
// must contain an added set intersecting at least 3 packing sets.
std::optional<Improvement> enumerate_improvements(const SetSystem& sys,
                                                  const Packing& a,
                                                  int max_remove,
                                                  bool require_tail_structure
                                                  = false);

}  // namespace kpack
