#include "kpack/graphs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace kpack {

ConflictGraph build_conflict_graph(const SetSystem& sys, const Packing& a) {
  ConflictGraph cg;
  cg.a_sets = a.members;
  std::vector<char> in_a(sys.n_sets(), 0);
  for (int idx : a.members) in_a[idx] = 1;
  for (int i = 0; i < sys.n_sets(); ++i)
    if (!in_a[i]) cg.c_sets.push_back(i);

  // Packing sets are disjoint, so each element has at most one a-owner.
  std::vector<int> owner(sys.universe_size, -1);
  for (int ap = 0; ap < cg.n_a(); ++ap)
    for (int e : sys.sets[cg.a_sets[ap]]) owner[e] = ap;

  cg.c_adj.resize(cg.n_c());
  cg.a_adj.resize(cg.n_a());
  for (int cp = 0; cp < cg.n_c(); ++cp) {
    std::set<int> nbrs;
    for (int e : sys.sets[cg.c_sets[cp]])
      if (owner[e] >= 0) nbrs.insert(owner[e]);
    cg.c_adj[cp].assign(nbrs.begin(), nbrs.end());
    for (int ap : cg.c_adj[cp]) cg.a_adj[ap].push_back(cp);
    if (nbrs.empty()) cg.degree0_c.push_back(cp);
  }
  return cg;
}

namespace {

ColorSet set_colors_of(const SetSystem& sys, const Coloring& coloring,
                       int set_index) {
  return coloring.set_colors(sys.sets[set_index]);
}

}  // namespace

AuxMultigraph build_aux_multigraph(const SetSystem& sys, const ConflictGraph& cg,
                                   const GroupCatalog& groups,
                                   const std::optional<Coloring>& coloring,
                                   const AuxBuildOptions& opts) {
  AuxMultigraph g;
  g.n_vertices = cg.n_a();

  auto colors_of = [&](int c_pos) -> ColorSet {
    if (!coloring) return 0;
    return set_colors_of(sys, *coloring, cg.c_sets[c_pos]);
  };

  for (int cp = 0; cp < cg.n_c(); ++cp) {
    const int d = cg.degree(cp);
    if (d == 1) {
      g.edges.push_back({cg.c_adj[cp][0], cg.c_adj[cp][0], cp, colors_of(cp), -1});
    } else if (d == 2) {
      g.edges.push_back({cg.c_adj[cp][0], cg.c_adj[cp][1], cp, colors_of(cp), -1});
    }
  }

  // (u, v, source, colors, removed, added) already emitted, for dedup.
  std::set<std::tuple<int, int, int, ColorSet, std::vector<int>, std::vector<int>>>
      emitted;
  for (const auto& vg : groups) {
    const int cp = vg.c_pos;
    const ColorSet source_colors = colors_of(cp);
    for (std::size_t p = 0; p < vg.kept_pairs.size(); ++p) {
      const auto [i, j] = vg.kept_pairs[p];
      const int u = cg.c_adj[cp][i];
      const int v = cg.c_adj[cp][j];
      int kept_here = 0;
      for (const TailGroup& grp : vg.by_kept_pair[p]) {
        if (kept_here >= opts.max_parallel_per_source) {
          g.diag.capped_parallel +=
              static_cast<int>(vg.by_kept_pair[p].size()) - kept_here;
          break;
        }
        if (coloring && (source_colors & grp.colors)) {
          ++g.diag.skipped_color_overlap;
          continue;
        }
        const ColorSet edge_colors = source_colors | grp.colors;
        if (opts.max_edge_colors > 0 &&
            std::popcount(edge_colors) > opts.max_edge_colors) {
          ++g.diag.skipped_color_budget;
          continue;
        }
        auto sig = std::make_tuple(u, v, cp, edge_colors, grp.removed_a,
                                   grp.added_c);
        if (!emitted.insert(std::move(sig)).second) {
          ++g.diag.merged_duplicates;
          continue;
        }
        g.groups.push_back({grp.removed_a, grp.added_c, grp.colors});
        g.edges.push_back({u, v, cp, edge_colors,
                           static_cast<int>(g.groups.size()) - 1});
        ++kept_here;
      }
    }
  }

  g.incident.resize(g.n_vertices);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    g.incident[g.edges[e].u].push_back(e);
    if (g.edges[e].v != g.edges[e].u) g.incident[g.edges[e].v].push_back(e);
  }
  return g;
}

std::string dump_aux_multigraph(const ConflictGraph& cg,
                                const AuxMultigraph& g) {
  std::ostringstream out;
  for (int v = 0; v < g.n_vertices; ++v)
    out << "vertex " << v << " set " << cg.a_sets[v] << '\n';
  for (const auto& e : g.edges) {
    out << (e.u == e.v ? "loop " : "edge ") << e.u;
    if (e.u != e.v) out << ' ' << e.v;
    out << " source " << cg.c_sets[e.source_c];
    int tail_size = 0;
    if (e.group >= 0)
      tail_size = static_cast<int>(g.groups[e.group].added_c.size());
    out << " tail " << tail_size << " colors";
    for (int c = 0; c < kMaxColors; ++c)
      if (e.colors & (ColorSet{1} << c)) out << ' ' << c;
    out << '\n';
  }
  return out.str();
}

}  // namespace kpack
