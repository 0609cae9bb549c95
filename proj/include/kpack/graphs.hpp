#pragma once

// Bipartite conflict graph G(A,C) between a packing and the remaining sets,
// and the auxiliary multigraph G_A whose edges come from low-degree sets in
// C, or from high-degree sets whose extra edges are paid for by a colorful
// group of tail changes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kpack/coloring.hpp"
#include "kpack/instance.hpp"
#include "kpack/tailchange.hpp"

namespace kpack {

struct ConflictGraph {
  std::vector<int> a_sets;  // packing set indices, sorted
  std::vector<int> c_sets;  // non-packing set indices, sorted
  // c_adj[c_pos] = sorted a-positions whose sets intersect c; a_adj reverse.
  std::vector<std::vector<int>> c_adj;
  std::vector<std::vector<int>> a_adj;
  std::vector<int> degree0_c;  // c-positions with no conflicts (1-improvements)

  int n_a() const { return static_cast<int>(a_sets.size()); }
  int n_c() const { return static_cast<int>(c_sets.size()); }
  int degree(int c_pos) const { return static_cast<int>(c_adj[c_pos].size()); }
};

ConflictGraph build_conflict_graph(const SetSystem& sys, const Packing& a);

// Tail swap carried by a parallel edge: remove `removed_a`, add `added_c`.
struct TailPayload {
  std::vector<int> removed_a;  // a-positions, sorted
  std::vector<int> added_c;    // c-positions, sorted
  ColorSet colors = 0;         // colors of the added sets
};

struct ColoredEdge {
  int u = -1, v = -1;  // a-positions; u == v is a self-loop
  int source_c = -1;   // c-position the edge comes from
  ColorSet colors = 0;
  int group = -1;  // index into AuxMultigraph::groups, -1 = plain edge
};

struct AuxBuildDiagnostics {
  int skipped_color_budget = 0;   // edge colors exceeded the configured bound
  int skipped_color_overlap = 0;  // source and group colors not disjoint
  int capped_parallel = 0;        // parallel edges dropped by the cap
  int merged_duplicates = 0;
};

struct AuxMultigraph {
  int n_vertices = 0;  // == ConflictGraph::n_a()
  std::vector<ColoredEdge> edges;
  std::vector<TailPayload> groups;
  std::vector<std::vector<int>> incident;  // vertex -> edge ids (loops once)
  AuxBuildDiagnostics diag;

  bool has_groups() const { return !groups.empty(); }
};

// Groups available for one degree->=3 c-vertex: by_kept_pair[p] lists the
// colorful groups that leave the pair_at(p)-th pair of edges standing.
struct VertexGroupCatalog {
  int c_pos = -1;
  // Pairs (i, j), i < j, indices into ConflictGraph::c_adj[c_pos].
  std::vector<std::pair<int, int>> kept_pairs;
  std::vector<std::vector<TailGroup>> by_kept_pair;
};

using GroupCatalog = std::vector<VertexGroupCatalog>;

struct AuxBuildOptions {
  int max_parallel_per_source = 64;  // per (vertex pair, source set)
  int max_edge_colors = 0;           // 0 = no bound
};

// Degree-2 sets become edges, degree-1 sets self-loops; each colorful group
// of a degree->=3 set contributes one parallel edge between the endpoints of
// its kept pair. Without a coloring all color sets are empty.
AuxMultigraph build_aux_multigraph(const SetSystem& sys, const ConflictGraph& cg,
                                   const GroupCatalog& groups,
                                   const std::optional<Coloring>& coloring,
                                   const AuxBuildOptions& opts = {});

// Human-readable dump: one vertex line per packing set, one line per edge
// annotated with source set, tail group size and color list.
std::string dump_aux_multigraph(const ConflictGraph& cg,
                                const AuxMultigraph& g);

}  // namespace kpack
