#pragma once

// The colorful path/cycle dynamic program over the auxiliary multigraph,
// with endpoint flags certifying that a traversed tail group removes the
// path's start or end vertex, plus the combination step that assembles the
// six canonical improvement shapes.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kpack/coloring.hpp"
#include "kpack/graphs.hpp"
#include "kpack/instance.hpp"

namespace kpack {

// Table entry semantics: entry(u, v, j, C, qu, qv) is set iff there is a
// colorful walk of j edges from u to v whose edge color sets are pairwise
// disjoint with union exactly C, where qu (qv) says whether some walk edge
// carries a tail group removing u (v). Vertex repetition is not excluded
// here; candidates that revisit vertices simply fail the final improvement
// check after materialization.
class DPTable {
 public:
  struct Entry {
    int j;
    ColorSet colors;
    bool qu, qv;
  };

  bool has(int u, int v, int j, ColorSet colors, bool qu, bool qv) const;
  // Walk edge ids from u to v; throws internal_error on a broken chain.
  std::vector<int> reconstruct(int u, int v, int j, ColorSet colors, bool qu,
                               bool qv) const;
  // Entries with endpoints (u, v), sorted by (j, colors, qu, qv).
  const std::vector<Entry>& finals(int u, int v) const;

  std::size_t states_set() const { return states_.size(); }
  int n_vertices() const { return n_; }

 private:
  friend DPTable dp_colorful_paths(const AuxMultigraph&, int, const Coloring&);

  // State key: target-tracked run (u, z) at position v after j edges.
  static std::uint64_t key(int u, int z, int v, int j, ColorSet colors, bool qu,
                           bool qz);
  struct Witness {
    std::uint64_t prev;
    int edge;  // -1 for length-0 states
  };

  int n_ = 0;
  int p_ = 0;
  std::unordered_map<std::uint64_t, Witness> states_;
  std::vector<char> z_relevant_;  // vertex appears in some group's removed set
  std::vector<std::vector<Entry>> finals_;  // (u * n_ + v) -> entries
  static const std::vector<Entry> kNoEntries;
};

// Fills the table for all walks of length <= p_path. Requires
// coloring.kt <= kMaxColors and p_path <= 31 (parameter error otherwise).
DPTable dp_colorful_paths(const AuxMultigraph& g, int p_path,
                          const Coloring& coloring);

enum class Shape {
  kTwoCyclesAtPoint = 1,   // binocular
  kTwoCyclesWithPath = 2,  // binocular
  kThreePaths = 3,         // binocular (two cycles with a common arc)
  kFlaggedPath = 4,        // both endpoints removed by traversed groups
  kFlaggedPathWithCycle = 5,
  kFlaggedCycle = 6,
};

struct CanonicalImprovement {
  Shape shape;
  std::vector<std::vector<int>> segments;  // edge ids per path/cycle witness
  Improvement improvement;
};

struct CitcParams {
  int p_path = 8;
  int tail_cap = 3;
  bool use_tail_changes = true;  // false = plain binocular pipeline
  int max_add = 0;               // 0 = unlimited; else skip larger candidates
  AuxBuildOptions aux;
};

struct CitcStats {
  long long tail_changes = 0;
  long long groups = 0;
  long long edges = 0;
  long long dp_states = 0;
  long long shapes_tried = 0;
  int found_shape = 0;

  CitcStats& operator+=(const CitcStats& o);
};

// Enumerates the six shapes over the table (shape order, then lexicographic
// witness order) and returns the first candidate whose materialized
// improvement verifies. Shapes 4-6 require the q-flag certificates.
std::optional<CanonicalImprovement> find_canonical_improvement(
    const SetSystem& sys, const Packing& a, const ConflictGraph& cg,
    const AuxMultigraph& g, const DPTable& table, int p_path, int max_add = 0,
    CitcStats* stats = nullptr);

// One round of Algorithm CITC under a fixed coloring: tail-change catalogs,
// auxiliary multigraph, DP, shape combination.
std::optional<Improvement> citc_round(const SetSystem& sys, const Packing& a,
                                      const CitcParams& params,
                                      const Coloring& coloring,
                                      CitcStats* stats = nullptr);

}  // namespace kpack
