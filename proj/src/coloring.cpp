#include "kpack/coloring.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kpack {

Coloring sample_coloring(const SetSystem& sys, int t, std::uint64_t seed) {
  if (t < 1) throw std::invalid_argument("sample_coloring: t must be >= 1");
  const int kt = sys.k * t;
  if (kt > kMaxColors)
    throw std::invalid_argument("sample_coloring: kt exceeds color width " +
                                std::to_string(kMaxColors));
  std::mt19937_64 rng(seed);
  Coloring c;
  c.kt = kt;
  c.color_of.resize(sys.universe_size);
  for (int e = 0; e < sys.universe_size; ++e)
    c.color_of[e] = static_cast<std::uint8_t>(rng() % kt);
  return c;
}

double success_probability(int kt, int ki) {
  if (kt < 1 || ki < 0) throw std::invalid_argument("success_probability");
  if (ki > kt) return 0.0;
  double p = 1.0;
  for (int i = 0; i < ki; ++i) p *= double(kt - i) / double(kt);
  return p;
}

double success_probability_lower_bound(int kt) { return std::exp(-double(kt)); }

double trial_count_log(double n, int k, double epsilon) {
  if (n <= 1.0 || k < 1 || epsilon <= 0.0)
    throw std::invalid_argument("trial_count_log: need n > 1, k >= 1, eps > 0");
  const double k3 = double(k) * k * k;
  const double ln_n = std::log(n);
  return (8.0 * k3 / (epsilon * epsilon)) * ln_n + std::log(ln_n) +
         std::log(2.0);
}

}  // namespace kpack
