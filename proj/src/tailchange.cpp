#include "kpack/tailchange.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <stdexcept>

#include "kpack/graphs.hpp"

namespace kpack {

namespace {

bool is_rainbow(const SetSystem& sys, const Coloring& coloring, int set_index) {
  return std::popcount(coloring.set_colors(sys.sets[set_index])) ==
         static_cast<int>(sys.sets[set_index].size());
}

}  // namespace

std::vector<TailChange> enumerate_tail_changes(const SetSystem& sys,
                                               const ConflictGraph& cg,
                                               int v_pos, int u_pos, int cap,
                                               const Coloring& coloring) {
  if (cg.degree(v_pos) < 3)
    throw std::invalid_argument("enumerate_tail_changes: degree(v) < 3");
  if (cap < 1) throw std::invalid_argument("enumerate_tail_changes: cap < 1");

  const int v_set = cg.c_sets[v_pos];
  const ColorSet v_colors = coloring.set_colors(sys.sets[v_set]);

  // Any neighbor of v other than u showing up in N(V) breaks requirement (2).
  std::vector<char> banned_a(cg.n_a(), 0);
  for (int ap : cg.c_adj[v_pos])
    if (ap != u_pos) banned_a[ap] = 1;

  // Candidate pool for V, by increasing c-position. Sets must avoid v (both
  // as a set and colorwise), be rainbow, and touch only allowed a-vertices.
  std::vector<int> pool;
  for (int cp = 0; cp < cg.n_c(); ++cp) {
    if (cp == v_pos || cg.degree(cp) == 0) continue;
    bool ok = true;
    for (int ap : cg.c_adj[cp])
      if (banned_a[ap]) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (sets_intersect(sys.sets[cg.c_sets[cp]], sys.sets[v_set])) continue;
    if (!is_rainbow(sys, coloring, cg.c_sets[cp])) continue;
    const ColorSet cc = coloring.set_colors(sys.sets[cg.c_sets[cp]]);
    if (cc & v_colors) continue;
    pool.push_back(cp);
  }

  std::vector<TailChange> out;
  std::vector<int> chosen;
  std::set<int> nbrs;  // N(V) so far
  ColorSet used_colors = 0;

  auto accept = [&]() {
    if (static_cast<int>(nbrs.size()) != static_cast<int>(chosen.size()))
      return;
    if (!nbrs.count(u_pos)) return;
    TailChange tc;
    tc.anchor_c = v_pos;
    tc.anchor_a = u_pos;
    tc.removed_a.assign(nbrs.begin(), nbrs.end());
    tc.added_c = chosen;
    tc.added_colors = used_colors;
    out.push_back(std::move(tc));
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t start) {
    if (!chosen.empty()) accept();
    if (static_cast<int>(chosen.size()) == cap) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      const int cp = pool[i];
      const ColorSet cc = coloring.set_colors(sys.sets[cg.c_sets[cp]]);
      if (cc & used_colors) continue;  // colorful: pairwise disjoint colors
      std::vector<int> new_nbrs;
      for (int ap : cg.c_adj[cp])
        if (!nbrs.count(ap)) new_nbrs.push_back(ap);
      if (static_cast<int>(nbrs.size() + new_nbrs.size()) > cap) continue;
      chosen.push_back(cp);
      for (int ap : new_nbrs) nbrs.insert(ap);
      used_colors |= cc;
      dfs(i + 1);
      used_colors &= ~cc;
      for (int ap : new_nbrs) nbrs.erase(ap);
      chosen.pop_back();
    }
  };
  dfs(0);

  std::stable_sort(out.begin(), out.end(),
                   [](const TailChange& a, const TailChange& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a.added_c < b.added_c;
                   });
  return out;
}

std::vector<TailGroup> colorful_groups(
    const ConflictGraph& cg, int v_pos, std::pair<int, int> kept,
    const std::vector<std::vector<TailChange>>& per_edge,
    const Coloring& /*coloring*/) {
  const int d = cg.degree(v_pos);
  if (d < 3) throw std::invalid_argument("colorful_groups: degree(v) < 3");
  if (kept.first == kept.second || kept.first < 0 || kept.second >= d)
    throw std::invalid_argument("colorful_groups: bad kept pair");

  std::vector<int> open;  // edge indices needing a tail change
  for (int i = 0; i < d; ++i)
    if (i != kept.first && i != kept.second) open.push_back(i);

  std::vector<TailGroup> out;
  std::vector<const TailChange*> members(open.size(), nullptr);

  std::function<void(std::size_t, ColorSet)> dfs = [&](std::size_t idx,
                                                       ColorSet used) {
    if (idx == open.size()) {
      TailGroup grp;
      grp.c_pos = v_pos;
      std::set<int> removed, added;
      ColorSet colors = 0;
      for (const TailChange* tc : members) {
        removed.insert(tc->removed_a.begin(), tc->removed_a.end());
        added.insert(tc->added_c.begin(), tc->added_c.end());
        colors |= tc->added_colors;
      }
      grp.removed_a.assign(removed.begin(), removed.end());
      grp.added_c.assign(added.begin(), added.end());
      grp.colors = colors;
      out.push_back(std::move(grp));
      return;
    }
    for (const TailChange& tc : per_edge[open[idx]]) {
      if (tc.added_colors & used) continue;  // consistency via disjoint colors
      members[idx] = &tc;
      dfs(idx + 1, used | tc.added_colors);
    }
  };
  dfs(0, 0);
  return out;
}

}  // namespace kpack
