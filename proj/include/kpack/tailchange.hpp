#pragma once

// Tail changes: equal-size swaps U <-> V that delete one edge of a
// high-degree vertex of the conflict graph, and colorful consistent groups
// of them that drop such a vertex's degree to exactly 2.

#include <vector>

#include "kpack/coloring.hpp"
#include "kpack/instance.hpp"

namespace kpack {

struct ConflictGraph;

struct TailChange {
  int anchor_c = -1;           // the high-degree vertex v (c-position)
  int anchor_a = -1;           // u, the one neighbor of v that gets removed
  std::vector<int> removed_a;  // U: a-positions, sorted, contains anchor_a
  std::vector<int> added_c;    // V: c-positions, sorted
  ColorSet added_colors = 0;   // union over V of set colors

  int size() const { return static_cast<int>(added_c.size()); }
  bool operator==(const TailChange&) const = default;
};

// One tail change per covered edge of a common vertex, pairwise color- and
// set-disjoint; applying all of them leaves the vertex with degree 2.
struct TailGroup {
  int c_pos = -1;
  std::vector<int> removed_a;  // union of member U's, sorted, deduped
  std::vector<int> added_c;    // union of member V's, sorted
  ColorSet colors = 0;         // union of member added colors
};

// All colorful tail changes of size <= cap anchored at edge (v_pos, u_pos),
// in increasing size then lexicographic added-set order.
std::vector<TailChange> enumerate_tail_changes(const SetSystem& sys,
                                               const ConflictGraph& cg,
                                               int v_pos, int u_pos, int cap,
                                               const Coloring& coloring);

// All colorful groups covering every edge of v except the two kept ones,
// built from the per-edge catalogs (one catalog per edge of v, in c_adj
// order; the kept positions are ignored). Members must have pairwise
// disjoint colors and added sets.
std::vector<TailGroup> colorful_groups(
    const ConflictGraph& cg, int v_pos, std::pair<int, int> kept,
    const std::vector<std::vector<TailChange>>& per_edge,
    const Coloring& coloring);

}  // namespace kpack
