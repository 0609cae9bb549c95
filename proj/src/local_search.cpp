#include "kpack/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kpack/graphs.hpp"

namespace kpack {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kGreedy: return "greedy";
    case Mode::kSmallOnly: return "small_only";
    case Mode::kBinocular: return "binocular";
    case Mode::kCitc: return "citc";
  }
  return "?";
}

std::optional<Mode> mode_from_name(const std::string& name) {
  if (name == "greedy") return Mode::kGreedy;
  if (name == "small_only") return Mode::kSmallOnly;
  if (name == "binocular") return Mode::kBinocular;
  if (name == "citc") return Mode::kCitc;
  return std::nullopt;
}

void SearchParams::validate(const SetSystem& sys) const {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
  if (p_small < 0) throw std::invalid_argument("p_small must be >= 0");
  if (p_path < 1 || p_path > 31)
    throw std::invalid_argument("p_path must be in 1..31");
  if (tail_cap < 1) throw std::invalid_argument("tail_cap must be >= 1");
  if (color_groups < 1) throw std::invalid_argument("t must be >= 1");
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");
  if (max_add < 0) throw std::invalid_argument("max_add must be >= 0");
  if (sys.k * color_groups > kMaxColors)
    throw std::invalid_argument("k*t exceeds color width " +
                                std::to_string(kMaxColors));
}

double SearchParams::tail_cap_formula(int k) const {
  return 2.0 * (k - 1) / epsilon;
}

double SearchParams::p_path_formula(int n) const {
  return 4.0 / epsilon * std::log(std::max(2, n));
}

double SearchParams::color_groups_formula(int n, int k) const {
  return p_path_formula(n) * (2.0 * (k - 1) / epsilon) * std::max(1, k - 2);
}

Packing greedy_maximal(const SetSystem& sys) {
  Packing p;
  std::vector<char> used(sys.universe_size, 0);
  for (int i = 0; i < sys.n_sets(); ++i) {
    bool free = true;
    for (int e : sys.sets[i])
      if (used[e]) {
        free = false;
        break;
      }
    if (!free) continue;
    for (int e : sys.sets[i]) used[e] = 1;
    p.members.push_back(i);
  }
  return p;
}

namespace {

// Finds `need` pairwise disjoint candidate sets, indices ascending.
bool pick_disjoint(const SetSystem& sys, const std::vector<int>& candidates,
                   std::size_t start, int need, std::vector<char>& used_elem,
                   std::vector<int>& picked) {
  if (need == 0) return true;
  for (std::size_t i = start; i + need <= candidates.size(); ++i) {
    const int idx = candidates[i];
    bool free = true;
    for (int e : sys.sets[idx])
      if (used_elem[e]) {
        free = false;
        break;
      }
    if (!free) continue;
    for (int e : sys.sets[idx]) used_elem[e] = 1;
    picked.push_back(idx);
    if (pick_disjoint(sys, candidates, i + 1, need - 1, used_elem, picked))
      return true;
    picked.pop_back();
    for (int e : sys.sets[idx]) used_elem[e] = 0;
  }
  return false;
}

}  // namespace

std::optional<Improvement> find_small_improvement(const SetSystem& sys,
                                                  const Packing& a, int p) {
  const ConflictGraph cg = build_conflict_graph(sys, a);
  const int na = cg.n_a();

  for (int q = 0; q <= std::min(p, na); ++q) {
    // q-subsets of a-positions in lexicographic order.
    std::vector<int> comb(q);
    for (int i = 0; i < q; ++i) comb[i] = i;
    while (true) {
      std::vector<char> removed(na, 0);
      for (int ap : comb) removed[ap] = 1;
      // Add candidates: sets conflicting only with the removed ones.
      std::vector<int> candidates;
      for (int cp = 0; cp < cg.n_c(); ++cp) {
        bool ok = true;
        for (int ap : cg.c_adj[cp])
          if (!removed[ap]) {
            ok = false;
            break;
          }
        if (ok) candidates.push_back(cg.c_sets[cp]);
      }
      if (static_cast<int>(candidates.size()) >= q + 1) {
        std::vector<char> used_elem(sys.universe_size, 0);
        std::vector<int> picked;
        if (pick_disjoint(sys, candidates, 0, q + 1, used_elem, picked)) {
          Improvement imp;
          for (int ap : comb) imp.remove.push_back(cg.a_sets[ap]);
          std::sort(imp.remove.begin(), imp.remove.end());
          imp.add = std::move(picked);
          return imp;
        }
      }
      // next combination
      if (q == 0) break;
      int i = q - 1;
      while (i >= 0 && comb[i] == na - q + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int l = i + 1; l < q; ++l) comb[l] = comb[l - 1] + 1;
    }
  }
  return std::nullopt;
}

Packing apply_improvement(const SetSystem& sys, const Packing& a,
                          const Improvement& imp) {
  std::string reason;
  if (!verify_improvement(sys, a, imp, &reason))
    throw std::invalid_argument("invalid improvement: " + reason);
  Packing out;
  std::set<int> removed(imp.remove.begin(), imp.remove.end());
  for (int idx : a.members)
    if (!removed.count(idx)) out.members.push_back(idx);
  out.members.insert(out.members.end(), imp.add.begin(), imp.add.end());
  std::sort(out.members.begin(), out.members.end());
  return out;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + b;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Elements whose colors the citc pipeline can read this round: those of
// non-packing sets (binocular rounds only look at degree-<=2 sets).
std::vector<int> relevant_elements(const SetSystem& sys, const Packing& a,
                                   Mode mode) {
  const ConflictGraph cg = build_conflict_graph(sys, a);
  std::set<int> elems;
  for (int cp = 0; cp < cg.n_c(); ++cp) {
    if (mode == Mode::kBinocular && cg.degree(cp) > 2) continue;
    for (int e : sys.sets[cg.c_sets[cp]]) elems.insert(e);
  }
  return {elems.begin(), elems.end()};
}

}  // namespace

double count_canonical_colorings(int m, int kt) {
  // Stirling numbers of the second kind, summed over block counts <= kt.
  if (m == 0) return 1.0;
  std::vector<double> s(m + 1, 0.0);  // s[b] = S(i, b)
  s[0] = 1.0;                         // S(0,0)
  for (int i = 1; i <= m; ++i) {
    for (int b = std::min(i, m); b >= 1; --b)
      s[b] = s[b - 1] + double(b) * s[b];
    s[0] = 0.0;
  }
  double total = 0.0;
  for (int b = 1; b <= std::min(m, kt); ++b) total += s[b];
  return total;
}

long long for_each_canonical_coloring(
    const SetSystem& sys, const std::vector<int>& relevant, int kt,
    long long budget, const std::function<bool(const Coloring&)>& on_coloring) {
  const int m = static_cast<int>(relevant.size());
  const double count = count_canonical_colorings(m, kt);
  if (count > static_cast<double>(budget))
    throw std::invalid_argument(
        "exhaustive colorings: " + std::to_string(count) +
        " canonical colorings exceed budget " + std::to_string(budget));

  Coloring c;
  c.kt = kt;
  c.color_of.assign(sys.universe_size, 0);
  long long enumerated = 0;
  bool stop = false;

  if (m == 0) {
    ++enumerated;
    on_coloring(c);
    return enumerated;
  }

  // Restricted growth strings with exactly `blocks` classes, finest first.
  std::vector<int> rgs(m, 0);
  std::function<void(int, int, int)> gen = [&](int i, int used, int blocks) {
    if (stop) return;
    if (used + (m - i) < blocks) return;  // cannot reach the block count
    if (i == m) {
      if (used != blocks) return;
      ++enumerated;
      for (int l = 0; l < m; ++l)
        c.color_of[relevant[l]] = static_cast<std::uint8_t>(rgs[l]);
      if (on_coloring(c)) stop = true;
      return;
    }
    const int limit = std::min(used, blocks - 1);
    for (int v = 0; v <= limit && !stop; ++v) {
      rgs[i] = v;
      gen(i + 1, std::max(used, v + 1), blocks);
    }
  };
  for (int blocks = std::min(m, kt); blocks >= 1 && !stop; --blocks)
    gen(0, 0, blocks);
  return enumerated;
}

Packing run_li(const SetSystem& sys, const SearchParams& params,
               RunStats* stats, const std::optional<Packing>& initial) {
  params.validate(sys);
  RunStats local;

  Packing packing;
  if (initial) {
    if (!verify_packing(sys, *initial))
      throw std::invalid_argument("run_li: initial packing is invalid");
    packing = *initial;
  } else {
    packing = greedy_maximal(sys);
  }
  if (params.mode == Mode::kGreedy) {
    if (stats) *stats = local;
    return packing;
  }

  CitcParams citc;
  citc.p_path = params.p_path;
  citc.tail_cap = params.tail_cap;
  citc.use_tail_changes = params.mode == Mode::kCitc;
  citc.max_add = params.max_add;
  // Edge color budget 2k^3/eps; with kt <= kMaxColors it rarely binds.
  const double budget = 2.0 * sys.k * sys.k * sys.k / params.epsilon;
  citc.aux.max_edge_colors =
      budget < kMaxColors ? std::max(1, int(budget)) : 0;

  bool pass_improved = true;
  while (pass_improved) {
    pass_improved = false;
    ++local.passes;

    while (auto imp = find_small_improvement(sys, packing, params.p_small)) {
      packing = apply_improvement(sys, packing, *imp);
      ++local.iterations;
      ++local.small_improvements;
      pass_improved = true;
    }

    if (params.mode == Mode::kBinocular || params.mode == Mode::kCitc) {
      std::optional<Improvement> found;
      if (params.exhaustive_colorings) {
        const auto relevant = relevant_elements(sys, packing, params.mode);
        local.trials_run += for_each_canonical_coloring(
            sys, relevant, sys.k * params.color_groups,
            params.exhaustive_budget, [&](const Coloring& coloring) {
              found = citc_round(sys, packing, citc, coloring, &local.citc);
              return found.has_value();
            });
      } else {
        for (int trial = 0; trial < params.trials; ++trial) {
          const Coloring coloring = sample_coloring(
              sys, params.color_groups,
              mix_seed(params.seed, local.passes, trial));
          ++local.trials_run;
          found = citc_round(sys, packing, citc, coloring, &local.citc);
          if (found) break;
        }
      }
      if (found) {
        packing = apply_improvement(sys, packing, *found);
        ++local.iterations;
        ++local.citc_improvements;
        pass_improved = true;
      }
    }
  }

  if (stats) *stats = local;
  return packing;
}

}  // namespace kpack
