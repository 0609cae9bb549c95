#include "kpack/lowerbound.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace kpack {

LowerBoundInstance gen_lower_bound(int n, int k, std::uint64_t seed) {
  if (k < 3) throw std::invalid_argument("gen_lower_bound: k must be >= 3");
  if (n < 1) throw std::invalid_argument("gen_lower_bound: n must be >= 1");

  const int a_count = 3 * n;
  const int b2_count = 3 * n;
  const int b3_count = (k - 2) * n;
  const int a_universe = 3 * k * n;

  LowerBoundInstance inst;
  inst.n_param = n;
  inst.k_param = k;
  inst.seed = seed;
  SetSystem& sys = inst.sys;
  sys.k = k;

  // A_i occupies elements k*i .. k*i+k-1. Element 0 of each A-set goes to
  // the i-th 2-set, element 1 to the (i+1)-th; the other k-2 stay for the
  // random triples.
  for (int i = 0; i < a_count; ++i) {
    std::vector<int> s(k);
    for (int e = 0; e < k; ++e) s[e] = k * i + e;
    sys.sets.push_back(std::move(s));
  }

  int next_fresh = a_universe;
  for (int i = 0; i < b2_count; ++i) {
    const int prev = (i + a_count - 1) % a_count;
    std::vector<int> s = {k * prev + 1, k * i};
    for (int f = 0; f < k - 2; ++f) s.push_back(next_fresh++);
    std::sort(s.begin(), s.end());
    sys.sets.push_back(std::move(s));
  }

  std::vector<int> leftovers;
  for (int i = 0; i < a_count; ++i)
    for (int e = 2; e < k; ++e) leftovers.push_back(k * i + e);
  std::mt19937_64 rng(seed);
  std::shuffle(leftovers.begin(), leftovers.end(), rng);
  for (int i = 0; i < b3_count; ++i) {
    std::vector<int> s = {leftovers[3 * i], leftovers[3 * i + 1],
                          leftovers[3 * i + 2]};
    for (int f = 0; f < k - 3; ++f) s.push_back(next_fresh++);
    std::sort(s.begin(), s.end());
    sys.sets.push_back(std::move(s));
  }

  sys.universe_size = next_fresh;
  sys.pad_begin = next_fresh;
  for (int i = 0; i < a_count; ++i) inst.a_pack.members.push_back(i);
  for (int i = 0; i < b2_count + b3_count; ++i)
    inst.b_pack.members.push_back(a_count + i);
  return inst;
}

StabilityReport verify_stability(const LowerBoundInstance& inst, int t_max) {
  if (t_max < 1) throw std::invalid_argument("verify_stability: t_max < 1");
  StabilityReport report;
  report.t_max = t_max;

  const SetSystem& sys = inst.sys;
  const int a_count = inst.a_pack.size();
  const int b_count = inst.b_pack.size();
  const int words = (a_count + 63) / 64;

  // A-neighborhood bitmask per B-set.
  std::vector<int> owner(sys.universe_size, -1);
  for (int i = 0; i < a_count; ++i)
    for (int e : sys.sets[inst.a_pack.members[i]]) owner[e] = i;
  std::vector<std::vector<std::uint64_t>> nbr(
      b_count, std::vector<std::uint64_t>(words, 0));
  for (int b = 0; b < b_count; ++b)
    for (int e : sys.sets[inst.b_pack.members[b]])
      if (owner[e] >= 0) nbr[b][owner[e] / 64] |= 1ULL << (owner[e] % 64);

  std::vector<std::uint64_t> mask(words, 0);
  std::vector<int> chosen;
  auto popcount_all = [&](const std::vector<std::uint64_t>& m) {
    int c = 0;
    for (auto w : m) c += std::popcount(w);
    return c;
  };

  std::function<bool(int)> dfs = [&](int start) -> bool {
    const int depth = static_cast<int>(chosen.size());
    if (depth >= 1 && popcount_all(mask) < depth) {
      report.witness = chosen;
      return true;
    }
    if (depth == t_max) return false;
    // Once the neighborhood already has t_max sets, no extension up to
    // t_max members can fall short.
    if (popcount_all(mask) >= t_max) return false;
    for (int b = start; b < b_count; ++b) {
      std::vector<std::uint64_t> saved = mask;
      for (int w = 0; w < words; ++w) mask[w] |= nbr[b][w];
      chosen.push_back(b);
      if (dfs(b + 1)) return true;
      chosen.pop_back();
      mask = std::move(saved);
    }
    return false;
  };
  dfs(0);
  return report;
}

std::optional<LowerBoundInstance> gen_lower_bound_stable(
    int n, int k, std::uint64_t seed, int t_max, int max_retries,
    StabilityReport* report) {
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    LowerBoundInstance inst = gen_lower_bound(n, k, seed + attempt);
    StabilityReport r = verify_stability(inst, t_max);
    r.retries = attempt;
    if (r.stable()) {
      if (report) *report = r;
      return inst;
    }
  }
  if (report) {
    report->t_max = t_max;
    report->retries = max_retries;
  }
  return std::nullopt;
}

std::uint64_t tau(int m) {
  if (m < 0 || m % 3 != 0)
    throw std::invalid_argument("tau: m must be a nonnegative multiple of 3");
  // tau(m) = C(m-1, 2) * tau(m-3): the first element picks its two partners.
  std::uint64_t result = 1;
  for (int i = m; i >= 3; i -= 3) {
    const std::uint64_t ways =
        static_cast<std::uint64_t>(i - 1) * (i - 2) / 2;
    if (result > UINT64_MAX / ways) throw std::overflow_error("tau overflow");
    result *= ways;
  }
  return result;
}

namespace {

// lgamma-based binomial; exact to double precision for the desk-scale args.
double log_binom(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

using u128 = unsigned __int128;

// Exact binomial while it fits 128 bits; nullopt on overflow.
std::optional<u128> binom128(int n, int k) {
  if (k < 0 || k > n) return u128{0};
  k = std::min(k, n - k);
  u128 r = 1;
  constexpr u128 kMax = ~u128{0};
  for (int i = 1; i <= k; ++i) {
    const u128 num = u128(n - k + i);
    if (r > kMax / num) return std::nullopt;
    r = r * num / u128(i);  // divisible at every step
  }
  return r;
}

}  // namespace

namespace {

// Raw value of the containment estimate; exceeds 1 for parameters where the
// union-style overcount outgrows the event space.
double unstable_estimate(int t, int r, int k, int n) {
  const int m3 = 3 * k * n - 6 * n;
  const int mt = (k - 2) * t + 2 * r;
  if (3 * r > mt || r > m3 / 3 || 3 * r > m3) return 0.0;
  const auto b1 = binom128(mt, 3 * r);
  const auto b2 = binom128(m3 / 3, r);
  const auto b3 = binom128(m3, 3 * r);
  if (b1 && b2 && b3 && *b2 != 0 && *b1 <= ~u128{0} / *b2) {
    return double(static_cast<long double>(*b1 * *b2) /
                  static_cast<long double>(*b3));
  }
  const double lg =
      log_binom(mt, 3 * r) + log_binom(m3 / 3, r) - log_binom(m3, 3 * r);
  return std::exp(lg);
}

}  // namespace

double unstable_probability(int t, int r, int k, int n) {
  if (t < 1 || r < 1 || r > t || k < 3 || n < 1)
    throw std::invalid_argument("unstable_probability: bad parameters");
  return std::min(1.0, unstable_estimate(t, r, k, n));
}

UnstableBound expected_unstable_bound(int t_max, int r, int k, int n) {
  if (t_max < 1 || r < 1 || k < 3 || n < 1)
    throw std::invalid_argument("expected_unstable_bound: bad parameters");
  const double a = 3.0 * n;
  const double e3 = std::exp(3.0);

  UnstableBound out;
  auto per = [&](int tt, int rr) {
    const double base =
        k * std::pow(double(tt), 4) / (3.0 * e3 * a * std::pow(double(rr), 3));
    return std::pow(base, rr);
  };
  out.per_tr = r <= t_max ? per(t_max, r) : 0.0;
  out.exact_expectation =
      r <= t_max ? std::exp(log_binom(t_max - 1, r - 1) +
                            log_binom(3 * n - t_max, r)) *
                       unstable_estimate(t_max, r, k, n)
                 : 0.0;
  out.sum = 0.0;
  for (int tt = 1; tt <= t_max; ++tt)
    for (int rr = 1; rr <= tt; ++rr) out.sum += per(tt, rr);
  out.t0 = std::pow(3.0 * e3 * n / k, 0.2);
  return out;
}

}  // namespace kpack
