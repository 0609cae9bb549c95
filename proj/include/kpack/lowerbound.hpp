#pragma once

// The adversarial locality-gap construction: disjoint collections A (3n
// k-sets) and B ((k+1)n k-sets) such that, with good probability, every t
// sets of B intersect at least t sets of A. Plus the combinatorial
// calculators behind its analysis.

#include <cstdint>
#include <optional>
#include <vector>

#include "kpack/instance.hpp"

namespace kpack {

struct LowerBoundInstance {
  SetSystem sys;   // A-sets first (indices 0..3n-1), then B-sets
  Packing a_pack;  // the 3n disjoint sets A
  Packing b_pack;  // the (k+1)n disjoint sets B
  int n_param = 0;
  int k_param = 0;
  std::uint64_t seed = 0;
};

// Universe of 3kn elements for A; B has 3n cyclic 2-intersection sets and
// (k-2)n 3-intersection sets from a uniform random partition of the
// remaining A-elements into triples; off-A elements are fresh. k >= 3.
LowerBoundInstance gen_lower_bound(int n, int k, std::uint64_t seed);

struct StabilityReport {
  int t_max = 0;
  // B-indices (positions in b_pack) of a violating collection, if any:
  // fewer than |witness| A-sets are intersected.
  std::optional<std::vector<int>> witness;
  int retries = 0;  // filled by gen_lower_bound_stable

  bool stable() const { return !witness.has_value(); }
};

// Exhaustive over all subsets of B of size <= t_max; a subset must always
// intersect at least as many A-sets as it has members.
StabilityReport verify_stability(const LowerBoundInstance& inst, int t_max);

// Retries gen_lower_bound with seed+1 until verify_stability passes, up to
// max_retries attempts; nullopt if all fail.
std::optional<LowerBoundInstance> gen_lower_bound_stable(
    int n, int k, std::uint64_t seed, int t_max, int max_retries = 64,
    StabilityReport* report = nullptr);

// Number of ways to partition m elements into m/3 unordered triples:
// m! / (3!^{m/3} (m/3)!). Exact; throws on m % 3 != 0 or overflow.
std::uint64_t tau(int m);

// Estimate of the probability that r random triples land inside the
// m_t = (k-2)t + 2r exposed elements: C(m_t,3r) C(m_3/3,r) / C(m_3,3r),
// clamped to [0, 1] (the raw expression overcounts for extreme t, r).
double unstable_probability(int t, int r, int k, int n);

struct UnstableBound {
  double per_tr;      // (k t^4 / (3 e^3 a r^3))^r at the queried (t, r)
  double exact_expectation;  // C(t-1,r-1) C(a-t,r) Pr(t,r), unrelaxed
  double sum;         // relaxed bound summed over r <= t, t <= t_max
  double t0;          // (3 e^3 n / k)^{1/5}
};

UnstableBound expected_unstable_bound(int t_max, int r, int k, int n);

}  // namespace kpack
