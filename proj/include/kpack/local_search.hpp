#pragma once

// Greedy construction, exhaustive constant-size improvement search, and the
// top-level local-improvement driver that alternates the constant phase with
// color-coded canonical-improvement rounds.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "kpack/colorful_dp.hpp"
#include "kpack/instance.hpp"

namespace kpack {

enum class Mode { kGreedy, kSmallOnly, kBinocular, kCitc };

const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(const std::string& name);

struct SearchParams {
  double epsilon = 0.5;
  int p_small = 3;    // constant-size improvement bound (removals)
  int p_path = 8;     // max combined path/cycle length per improvement
  int tail_cap = 3;   // max tail change size
  int color_groups = 3;  // t; kt = k*t colors
  int trials = 200;   // random colorings per round
  bool exhaustive_colorings = false;  // enumerate color classes instead
  long long exhaustive_budget = 5'000'000;
  int max_add = 0;    // 0 = unlimited improvement size
  std::uint64_t seed = 1;
  Mode mode = Mode::kCitc;

  void validate(const SetSystem& sys) const;  // throws std::invalid_argument
  // Asymptotic reference values at this epsilon (reported, not enforced).
  double tail_cap_formula(int k) const;
  double p_path_formula(int n) const;
  double color_groups_formula(int n, int k) const;
};

struct RunStats {
  int iterations = 0;          // improvements applied
  int passes = 0;              // driver loop passes
  int small_improvements = 0;
  int citc_improvements = 0;
  long long trials_run = 0;
  CitcStats citc;
};

// Scans sets in index order, keeping each set disjoint from those taken.
Packing greedy_maximal(const SetSystem& sys);

// Smallest q <= p such that q packed sets can be swapped for q+1 others,
// lexicographic among witnesses; add candidates are restricted to sets
// conflicting only with the removed ones.
std::optional<Improvement> find_small_improvement(const SetSystem& sys,
                                                  const Packing& a, int p);

// Returns the grown packing; throws std::invalid_argument when imp does not
// verify against a.
Packing apply_improvement(const SetSystem& sys, const Packing& a,
                          const Improvement& imp);

// Algorithm LI driver. Starts from `initial` when given (greedy otherwise).
Packing run_li(const SetSystem& sys, const SearchParams& params,
               RunStats* stats = nullptr,
               const std::optional<Packing>& initial = std::nullopt);

// Enumerates canonical colorings (set partitions with at most kt blocks) of
// the elements whose colors the pipeline can read, finest partitions first.
// Used by the exhaustive-colorings mode; counts are pre-checked against the
// budget. `on_coloring` returns true to stop early.
long long for_each_canonical_coloring(
    const SetSystem& sys, const std::vector<int>& relevant_elements, int kt,
    long long budget, const std::function<bool(const Coloring&)>& on_coloring);

// Number of set partitions of m elements into at most kt blocks (saturates
// at a large cap rather than overflowing).
double count_canonical_colorings(int m, int kt);

}  // namespace kpack
