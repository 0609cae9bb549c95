#include "kpack/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace kpack {

ExactResult exact_optimum(const SetSystem& sys, long long node_budget) {
  const int n = sys.n_sets();
  // Static order: highest conflict degree first, ties by index.
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (sets_intersect(sys.sets[i], sys.sets[j])) {
        ++degree[i];
        ++degree[j];
      }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    return a < b;
  });

  ExactResult res;
  res.proved = true;
  std::vector<int> chosen;
  std::vector<char> used_elem(sys.universe_size, 0);

  std::function<void(int)> dfs = [&](int pos) {
    ++res.nodes;
    if (res.nodes > node_budget) {
      res.proved = false;
      return;
    }
    if (static_cast<int>(chosen.size()) > res.packing.size()) {
      res.packing.members = chosen;
      std::sort(res.packing.members.begin(), res.packing.members.end());
    }
    if (pos == n) return;
    // Remaining-count bound.
    if (static_cast<int>(chosen.size()) + (n - pos) <= res.packing.size())
      return;
    const int idx = order[pos];
    bool free = true;
    for (int e : sys.sets[idx])
      if (used_elem[e]) {
        free = false;
        break;
      }
    if (free) {
      for (int e : sys.sets[idx]) used_elem[e] = 1;
      chosen.push_back(idx);
      dfs(pos + 1);
      chosen.pop_back();
      for (int e : sys.sets[idx]) used_elem[e] = 0;
    }
    dfs(pos + 1);
  };
  dfs(0);
  return res;
}

std::optional<Improvement> enumerate_improvements(const SetSystem& sys,
                                                  const Packing& a,
                                                  int max_remove,
                                                  bool require_tail_structure) {
  const int na = a.size();
  std::vector<int> outside;
  {
    std::vector<char> in_a(sys.n_sets(), 0);
    for (int idx : a.members) in_a[idx] = 1;
    for (int i = 0; i < sys.n_sets(); ++i)
      if (!in_a[i]) outside.push_back(i);
  }
  // Conflict degree of each outside set against the full packing.
  std::vector<int> a_degree(outside.size(), 0);
  for (std::size_t i = 0; i < outside.size(); ++i)
    for (int idx : a.members)
      if (sets_intersect(sys.sets[outside[i]], sys.sets[idx])) ++a_degree[i];

  for (int q = 0; q <= std::min(max_remove, na); ++q) {
    std::vector<int> comb(q);
    for (int i = 0; i < q; ++i) comb[i] = i;
    while (true) {
      // Elements covered by the surviving packing.
      std::vector<char> survivor_elem(sys.universe_size, 0);
      {
        std::vector<char> drop(na, 0);
        for (int i : comb) drop[i] = 1;
        for (int i = 0; i < na; ++i) {
          if (drop[i]) continue;
          for (int e : sys.sets[a.members[i]]) survivor_elem[e] = 1;
        }
      }
      std::vector<std::size_t> cand;  // positions into `outside`
      for (std::size_t i = 0; i < outside.size(); ++i) {
        bool ok = true;
        for (int e : sys.sets[outside[i]])
          if (survivor_elem[e]) {
            ok = false;
            break;
          }
        if (ok) cand.push_back(i);
      }

      if (static_cast<int>(cand.size()) >= q + 1) {
        std::vector<char> used(sys.universe_size, 0);
        std::vector<int> picked;
        std::function<bool(std::size_t, int, bool)> choose =
            [&](std::size_t start, int need, bool has_high) -> bool {
          if (need == 0) return !require_tail_structure || has_high;
          for (std::size_t i = start; i + need <= cand.size(); ++i) {
            const int idx = outside[cand[i]];
            bool free = true;
            for (int e : sys.sets[idx])
              if (used[e]) {
                free = false;
                break;
              }
            if (!free) continue;
            for (int e : sys.sets[idx]) used[e] = 1;
            picked.push_back(idx);
            if (choose(i + 1, need - 1, has_high || a_degree[cand[i]] >= 3))
              return true;
            picked.pop_back();
            for (int e : sys.sets[idx]) used[e] = 0;
          }
          return false;
        };
        if (choose(0, q + 1, false)) {
          Improvement imp;
          for (int i : comb) imp.remove.push_back(a.members[i]);
          imp.add = picked;
          return imp;
        }
      }

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

}  // namespace kpack
