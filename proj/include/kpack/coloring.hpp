#pragma once

// Random colorings of the universe and the color-count calculators behind
// the randomized search: trial counts and injectivity probabilities.

#include <cstdint>
#include <vector>

#include "kpack/instance.hpp"

namespace kpack {

// Color subsets are machine-word bitmasks; kt is capped accordingly.
using ColorSet = std::uint32_t;
inline constexpr int kMaxColors = 24;

struct Coloring {
  std::vector<std::uint8_t> color_of;  // element id -> color id in 0..kt-1
  int kt = 0;

  ColorSet set_colors(const std::vector<int>& elems) const {
    ColorSet c = 0;
    for (int e : elems) c |= ColorSet{1} << color_of[e];
    return c;
  }
};

// Each element gets an independent uniform color from k*t colors.
Coloring sample_coloring(const SetSystem& sys, int t, std::uint64_t seed);

// Probability that ki elements independently colored from kt colors are all
// distinct: (kt)! / ((kt-ki)! * kt^ki). Zero when ki > kt.
double success_probability(int kt, int ki);

// Analytic lower bound for the above: e^{-kt}, independent of ki.
double success_probability_lower_bound(int kt);

// ln(2N) for the full trial count N = n^{8k^3/eps^2} * ln n; the count is
// astronomically large, so only its logarithm is ever materialized.
double trial_count_log(double n, int k, double epsilon);

}  // namespace kpack
