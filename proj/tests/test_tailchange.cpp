#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "kpack/graphs.hpp"
#include "kpack/local_search.hpp"
#include "kpack/tailchange.hpp"

using namespace kpack;

namespace {

Coloring injective_coloring(const SetSystem& sys) {
  Coloring c;
  c.kt = sys.universe_size;
  c.color_of.resize(sys.universe_size);
  for (int e = 0; e < sys.universe_size; ++e) c.color_of[e] = std::uint8_t(e);
  return c;
}

SetSystem make_sys(int k, int universe, std::vector<std::vector<int>> sets) {
  SetSystem sys;
  sys.k = k;
  sys.universe_size = universe;
  sys.pad_begin = universe;
  for (auto& s : sets) std::sort(s.begin(), s.end());
  sys.sets = std::move(sets);
  return sys;
}

// Definition check, independent of the enumerator: V avoids v, is pairwise
// disjoint, rainbow with colors off C(v); its neighborhood is exactly U with
// |U| = |V|; and u is v's only neighbor inside U.
bool is_valid_tail_change(const SetSystem& sys, const ConflictGraph& cg,
                          int v_pos, int u_pos, const std::vector<int>& added,
                          const Coloring& coloring) {
  if (added.empty()) return false;
  std::set<int> vset(added.begin(), added.end());
  if (vset.size() != added.size() || vset.count(v_pos)) return false;
  const ColorSet v_colors = coloring.set_colors(sys.sets[cg.c_sets[v_pos]]);
  ColorSet used = 0;
  std::set<int> nbrs;
  for (int cp : added) {
    const auto& elems = sys.sets[cg.c_sets[cp]];
    ColorSet cc = 0;
    int distinct = 0;
    for (int e : elems) {
      const ColorSet bit = ColorSet{1} << coloring.color_of[e];
      if (!(cc & bit)) ++distinct;
      cc |= bit;
    }
    if (distinct != int(elems.size())) return false;  // not rainbow
    if (cc & used) return false;
    if (cc & v_colors) return false;
    used |= cc;
    if (sets_intersect(elems, sys.sets[cg.c_sets[v_pos]])) return false;
    for (int ap : cg.c_adj[cp]) nbrs.insert(ap);
  }
  if (nbrs.size() != added.size()) return false;
  if (!nbrs.count(u_pos)) return false;
  for (int ap : nbrs)
    if (ap != u_pos &&
        std::binary_search(cg.c_adj[v_pos].begin(), cg.c_adj[v_pos].end(), ap))
      return false;
  return true;
}

}  // namespace

TEST_CASE("smallest tail change: a private partner for the anchor") {
  // v = {0,3,6} meets a0, a1, a2; w = {1,2,9} meets only a0.
  auto sys = parse_instance(
      "p setpack 11 5 3\n1 2 3\n4 5 6\n7 8 9\n1 4 7\n2 3 10\n");
  auto cg = build_conflict_graph(sys, Packing{{0, 1, 2}});
  auto coloring = injective_coloring(sys);
  auto changes = enumerate_tail_changes(sys, cg, 0, 0, 2, coloring);
  REQUIRE(changes.size() == 1);
  CHECK(changes[0].removed_a == std::vector<int>{0});
  CHECK(changes[0].added_c == std::vector<int>{1});
}

TEST_CASE("tail change candidates sharing a color with v are excluded") {
  auto sys = parse_instance(
      "p setpack 11 5 3\n1 2 3\n4 5 6\n7 8 9\n1 4 7\n2 3 10\n");
  auto cg = build_conflict_graph(sys, Packing{{0, 1, 2}});
  auto coloring = injective_coloring(sys);
  // Make one element of the candidate collide with one of v's colors.
  coloring.color_of[1] = coloring.color_of[0];
  CHECK(enumerate_tail_changes(sys, cg, 0, 0, 2, coloring).empty());
}

TEST_CASE("LB-3 per-edge tail-change catalogs at cap 1") {
  auto sys = fixtures::lb3();
  auto cg = build_conflict_graph(sys, fixtures::lb3_start());
  auto coloring = injective_coloring(sys);
  // v1 is c-position 0 with neighbors a-positions {0 (s), 1 (m), 2 (t)}.
  auto at_s = enumerate_tail_changes(sys, cg, 0, 0, 1, coloring);
  auto at_m = enumerate_tail_changes(sys, cg, 0, 1, 1, coloring);
  auto at_t = enumerate_tail_changes(sys, cg, 0, 2, 1, coloring);
  REQUIRE(at_t.size() == 1);  // the planted change: swap t out, w1 in
  CHECK(at_t[0].removed_a == std::vector<int>{2});
  CHECK(at_t[0].added_c == std::vector<int>{3});
  CHECK(at_m.empty());
  REQUIRE(at_s.size() == 1);  // s <-> g also satisfies the definition
  CHECK(at_s[0].added_c == std::vector<int>{2});
}

TEST_CASE("catalog is exhaustive against a brute-force subset scan") {
  std::mt19937_64 seeds(99);
  int verified_edges = 0;
  for (int round = 0; round < 40; ++round) {
    auto sys =
        gen_random(10 + int(seeds() % 6), 3, 12 + int(seeds() % 6), seeds());
    Packing a = greedy_maximal(sys);
    auto cg = build_conflict_graph(sys, a);
    if (cg.n_c() > 12) continue;
    auto coloring = injective_coloring(sys);
    for (int v = 0; v < cg.n_c(); ++v) {
      if (cg.degree(v) < 3) continue;
      for (int u : cg.c_adj[v]) {
        ++verified_edges;
        auto fast = enumerate_tail_changes(sys, cg, v, u, 2, coloring);
        std::set<std::vector<int>> expected;
        for (int x = 0; x < cg.n_c(); ++x) {
          if (is_valid_tail_change(sys, cg, v, u, {x}, coloring))
            expected.insert({x});
          for (int y = x + 1; y < cg.n_c(); ++y)
            if (is_valid_tail_change(sys, cg, v, u, {x, y}, coloring))
              expected.insert({x, y});
        }
        std::set<std::vector<int>> got;
        for (const auto& tc : fast) got.insert(tc.added_c);
        CHECK(got == expected);
      }
    }
  }
  CHECK(verified_edges > 20);
}

TEST_CASE("colorful_groups: degree-3 vertex reuses the single edge catalog") {
  auto sys = fixtures::lb3();
  auto cg = build_conflict_graph(sys, fixtures::lb3_start());
  auto coloring = injective_coloring(sys);
  std::vector<std::vector<TailChange>> per_edge(3);
  for (int i = 0; i < 3; ++i)
    per_edge[i] =
        enumerate_tail_changes(sys, cg, 0, cg.c_adj[0][i], 1, coloring);
  // Keep (s, m): the only open edge is t's, so groups = its tail changes.
  auto groups = colorful_groups(cg, 0, {0, 1}, per_edge, coloring);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].removed_a == std::vector<int>{2});
  CHECK(groups[0].added_c == std::vector<int>{3});
}

TEST_CASE("colorful_groups: overlapping added sets produce no group") {
  // v meets a0..a3. The a2 anchor admits only V = {x, y} and the a3 anchor
  // only V = {z, y}; both swaps need y, so no consistent pair survives.
  auto sys = make_sys(4, 27,
                      {{0, 1, 2, 3},      // a0
                       {4, 5, 6, 7},      // a1
                       {8, 9, 10, 11},    // a2
                       {12, 13, 14, 15},  // a3
                       {16, 17, 18, 19},  // a4 (q)
                       {0, 4, 8, 12},     // v
                       {9, 16, 20, 21},   // x: meets a2, a4
                       {17, 22, 23, 24},  // y: meets a4
                       {13, 18, 25, 26}});  // z: meets a3, a4
  Packing a{{0, 1, 2, 3, 4}};
  auto cg = build_conflict_graph(sys, a);
  REQUIRE(cg.degree(0) == 4);
  auto coloring = injective_coloring(sys);
  std::vector<std::vector<TailChange>> per_edge(4);
  for (int i = 0; i < 4; ++i)
    per_edge[i] =
        enumerate_tail_changes(sys, cg, 0, cg.c_adj[0][i], 2, coloring);
  REQUIRE(per_edge[2].size() == 1);
  CHECK(per_edge[2][0].added_c == std::vector<int>{1, 2});  // {x, y}
  REQUIRE(per_edge[3].size() == 1);
  CHECK(per_edge[3][0].added_c == std::vector<int>{2, 3});  // {y, z}
  auto groups = colorful_groups(cg, 0, {0, 1}, per_edge, coloring);
  CHECK(groups.empty());
}

TEST_CASE("colorful_groups: product of independent catalogs") {
  // Anchors at a2 and a3 have 2 and 3 private partners; 6 combinations.
  // Partners of one anchor may share off-packing elements: they never
  // appear in the same group.
  auto sys = make_sys(4, 22,
                      {{0, 1, 2, 3},      // a0
                       {4, 5, 6, 7},      // a1
                       {8, 9, 10, 11},    // a2
                       {12, 13, 14, 15},  // a3
                       {0, 4, 8, 12},     // v
                       {9, 16, 17, 18},   // partners of a2
                       {10, 16, 17, 18},
                       {13, 19, 20, 21},  // partners of a3
                       {14, 19, 20, 21},
                       {15, 19, 20, 21}});
  Packing a{{0, 1, 2, 3}};
  auto cg = build_conflict_graph(sys, a);
  REQUIRE(cg.degree(0) == 4);
  auto coloring = injective_coloring(sys);
  std::vector<std::vector<TailChange>> per_edge(4);
  for (int i = 0; i < 4; ++i)
    per_edge[i] =
        enumerate_tail_changes(sys, cg, 0, cg.c_adj[0][i], 1, coloring);
  CHECK(per_edge[2].size() == 2);
  CHECK(per_edge[3].size() == 3);
  auto groups = colorful_groups(cg, 0, {0, 1}, per_edge, coloring);
  CHECK(groups.size() == 6);
  for (const auto& grp : groups) {
    CHECK(grp.removed_a.size() == 2);
    CHECK(grp.added_c.size() == 2);
  }
}

TEST_CASE("applying a group keeps the packing valid and drops degree to 2") {
  auto sys = fixtures::lb3();
  Packing a = fixtures::lb3_start();
  auto cg = build_conflict_graph(sys, a);
  auto coloring = injective_coloring(sys);
  std::vector<std::vector<TailChange>> per_edge(3);
  for (int i = 0; i < 3; ++i)
    per_edge[i] =
        enumerate_tail_changes(sys, cg, 0, cg.c_adj[0][i], 1, coloring);
  auto groups = colorful_groups(cg, 0, {0, 1}, per_edge, coloring);
  REQUIRE(groups.size() == 1);
  const auto& grp = groups[0];

  Packing swapped;
  for (int ap = 0; ap < cg.n_a(); ++ap)
    if (!std::binary_search(grp.removed_a.begin(), grp.removed_a.end(), ap))
      swapped.members.push_back(cg.a_sets[ap]);
  for (int cp : grp.added_c) swapped.members.push_back(cg.c_sets[cp]);
  std::sort(swapped.members.begin(), swapped.members.end());
  CHECK(swapped.size() == a.size());
  CHECK(verify_packing(sys, swapped));

  auto cg2 = build_conflict_graph(sys, swapped);
  // v1 (set 3) now has degree 2 with neighbors exactly s and m.
  int v1_pos = -1;
  for (int cp = 0; cp < cg2.n_c(); ++cp)
    if (cg2.c_sets[cp] == 3) v1_pos = cp;
  REQUIRE(v1_pos >= 0);
  CHECK(cg2.degree(v1_pos) == 2);
  std::vector<int> nbr_sets;
  for (int ap : cg2.c_adj[v1_pos]) nbr_sets.push_back(cg2.a_sets[ap]);
  CHECK(nbr_sets == std::vector<int>{0, 1});
}
