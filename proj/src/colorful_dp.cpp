#include "kpack/colorful_dp.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "kpack/tailchange.hpp"

namespace kpack {

namespace {

// 10 bits per vertex id, 5 bits for the length, 2 flag bits, colors on top.
constexpr int kVertexBits = 10;
constexpr int kMaxVertices = (1 << kVertexBits) - 2;
constexpr int kZGeneric = (1 << kVertexBits) - 1;  // run without a target
constexpr int kMaxPathLen = 31;

}  // namespace

const std::vector<DPTable::Entry> DPTable::kNoEntries;

std::uint64_t DPTable::key(int u, int z, int v, int j, ColorSet colors, bool qu,
                           bool qz) {
  std::uint64_t k = static_cast<std::uint64_t>(u);
  k = (k << kVertexBits) | static_cast<std::uint64_t>(z);
  k = (k << kVertexBits) | static_cast<std::uint64_t>(v);
  k = (k << 5) | static_cast<std::uint64_t>(j);
  k = (k << 1) | (qu ? 1 : 0);
  k = (k << 1) | (qz ? 1 : 0);
  k = (k << kMaxColors) | static_cast<std::uint64_t>(colors);
  return k;
}

bool DPTable::has(int u, int v, int j, ColorSet colors, bool qu, bool qv) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_ || j < 0 || j > p_) return false;
  if (!z_relevant_[v] && qv) return false;  // v is never removed by any group
  const int z = z_relevant_[v] ? v : kZGeneric;
  return states_.count(key(u, z, v, j, colors, qu, qv)) != 0;
}

std::vector<int> DPTable::reconstruct(int u, int v, int j, ColorSet colors,
                                      bool qu, bool qv) const {
  const int z = (v >= 0 && v < n_ && z_relevant_[v]) ? v : kZGeneric;
  std::uint64_t cur = key(u, z, v, j, colors, qu, qv);
  std::vector<int> edges;
  for (int step = j; step > 0; --step) {
    auto it = states_.find(cur);
    if (it == states_.end() || it->second.edge < 0)
      throw internal_error("dp table witness chain broken");
    edges.push_back(it->second.edge);
    cur = it->second.prev;
  }
  if (!states_.count(cur)) throw internal_error("dp table witness chain broken");
  std::reverse(edges.begin(), edges.end());
  return edges;
}

const std::vector<DPTable::Entry>& DPTable::finals(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return kNoEntries;
  return finals_[static_cast<std::size_t>(u) * n_ + v];
}

DPTable dp_colorful_paths(const AuxMultigraph& g, int p_path,
                          const Coloring& coloring) {
  if (coloring.kt > kMaxColors)
    throw std::invalid_argument("dp_colorful_paths: kt exceeds color width");
  if (p_path < 0 || p_path > kMaxPathLen)
    throw std::invalid_argument("dp_colorful_paths: p_path out of range");
  if (g.n_vertices > kMaxVertices)
    throw std::invalid_argument("dp_colorful_paths: too many vertices");

  DPTable table;
  table.n_ = g.n_vertices;
  table.p_ = p_path;
  table.z_relevant_.assign(g.n_vertices, 0);
  for (const auto& grp : g.groups)
    for (int a : grp.removed_a)
      if (a >= 0 && a < g.n_vertices) table.z_relevant_[a] = 1;
  table.finals_.resize(static_cast<std::size_t>(g.n_vertices) * g.n_vertices);

  // Per-edge removed-vertex membership for the q flags.
  auto edge_removes = [&](int e, int vertex) {
    const int gi = g.edges[e].group;
    if (gi < 0) return false;
    const auto& rem = g.groups[gi].removed_a;
    return std::binary_search(rem.begin(), rem.end(), vertex);
  };

  struct Frontier {
    int v, j;
    ColorSet colors;
    bool qu, qz;
  };

  // One run per start u, tracking only q_u exactly; plus one targeted run
  // per (u, z) with z removable by some group, tracking q_z exactly too.
  // Finals for v come from the targeted run when v is removable (the generic
  // run cannot know q_v there) and from the generic run otherwise.
  auto run = [&](int u, int z) {
    std::vector<Frontier> frontier;
    const std::uint64_t start = DPTable::key(u, z, u, 0, 0, false, false);
    table.states_.emplace(start, DPTable::Witness{start, -1});
    frontier.push_back({u, 0, 0, false, false});
    const bool targeted = z != kZGeneric;
    auto note_final = [&](const Frontier& f) {
      if (targeted ? (f.v == z) : !table.z_relevant_[f.v])
        table.finals_[static_cast<std::size_t>(u) * table.n_ + f.v].push_back(
            {f.j, f.colors, f.qu, f.qz});
    };
    note_final(frontier[0]);

    for (int j = 1; j <= p_path && !frontier.empty(); ++j) {
      std::vector<Frontier> next;
      for (const Frontier& f : frontier) {
        const std::uint64_t from =
            DPTable::key(u, z, f.v, f.j, f.colors, f.qu, f.qz);
        for (int e : g.incident[f.v]) {
          const auto& ed = g.edges[e];
          if (ed.colors & f.colors) continue;
          const int w = ed.u == f.v ? ed.v : ed.u;
          const bool qu = f.qu || edge_removes(e, u);
          const bool qz = targeted && (f.qz || edge_removes(e, z));
          Frontier nf{w, j, static_cast<ColorSet>(f.colors | ed.colors), qu, qz};
          const std::uint64_t to =
              DPTable::key(u, z, nf.v, nf.j, nf.colors, nf.qu, nf.qz);
          if (table.states_.emplace(to, DPTable::Witness{from, e}).second) {
            next.push_back(nf);
            note_final(nf);
          }
        }
      }
      frontier = std::move(next);
    }
  };

  std::vector<int> targets;
  for (int v = 0; v < g.n_vertices; ++v)
    if (table.z_relevant_[v]) targets.push_back(v);
  for (int u = 0; u < g.n_vertices; ++u) {
    run(u, kZGeneric);
    for (int z : targets) run(u, z);
  }
  for (auto& entries : table.finals_)
    std::sort(entries.begin(), entries.end(),
              [](const DPTable::Entry& a, const DPTable::Entry& b) {
                return std::tie(a.j, a.colors, a.qu, a.qv) <
                       std::tie(b.j, b.colors, b.qu, b.qv);
              });
  return table;
}

CitcStats& CitcStats::operator+=(const CitcStats& o) {
  tail_changes += o.tail_changes;
  groups += o.groups;
  edges += o.edges;
  dp_states += o.dp_states;
  shapes_tried += o.shapes_tried;
  if (found_shape == 0) found_shape = o.found_shape;
  return *this;
}

namespace {

// A witness walk: start vertex plus the table-reconstructed edge sequence.
struct Segment {
  int start;
  std::vector<int> edges;
};

// Builds the improvement a set of walks induces: walk vertices and group
// removals leave the packing, edge sources and group additions enter it.
std::optional<Improvement> materialize(const SetSystem& sys, const Packing& a,
                                       const ConflictGraph& cg,
                                       const AuxMultigraph& g,
                                       const std::vector<Segment>& segments,
                                       int max_add) {
  std::set<int> remove_pos, add_pos;
  std::set<int> used_groups;
  for (const Segment& seg : segments) {
    int at = seg.start;
    remove_pos.insert(at);
    for (int e : seg.edges) {
      const auto& ed = g.edges[e];
      if (ed.u != at && ed.v != at) return std::nullopt;  // broken walk
      at = ed.u == at ? ed.v : ed.u;
      remove_pos.insert(at);
      add_pos.insert(ed.source_c);
      if (ed.group >= 0) used_groups.insert(ed.group);
    }
  }
  Improvement imp;
  for (int ap : remove_pos) imp.remove.push_back(cg.a_sets[ap]);
  std::set<int> add_sets;
  for (int cp : add_pos) add_sets.insert(cg.c_sets[cp]);
  for (int gi : used_groups) {
    const auto& grp = g.groups[gi];
    for (int ap : grp.removed_a) {
      const int s = cg.a_sets[ap];
      if (!std::binary_search(imp.remove.begin(), imp.remove.end(), s)) {
        imp.remove.insert(
            std::upper_bound(imp.remove.begin(), imp.remove.end(), s), s);
      }
    }
    for (int cp : grp.added_c) add_sets.insert(cg.c_sets[cp]);
  }
  imp.add.assign(add_sets.begin(), add_sets.end());

  if (imp.add.size() < imp.remove.size() + 1) return std::nullopt;
  // Overlapping group removals can make the candidate gain more than one
  // set; keep a +1 improvement by dropping the largest extra additions.
  while (imp.add.size() > imp.remove.size() + 1) imp.add.pop_back();
  if (max_add > 0 && static_cast<int>(imp.add.size()) > max_add)
    return std::nullopt;
  if (!verify_improvement(sys, a, imp)) return std::nullopt;
  return imp;
}

}  // namespace

std::optional<CanonicalImprovement> find_canonical_improvement(
    const SetSystem& sys, const Packing& a, const ConflictGraph& cg,
    const AuxMultigraph& g, const DPTable& table, int p_path, int max_add,
    CitcStats* stats) {
  const int n = table.n_vertices();
  CitcStats local;
  std::optional<CanonicalImprovement> result;

  auto try_candidate = [&](Shape shape, std::vector<Segment> segs) {
    ++local.shapes_tried;
    auto imp = materialize(sys, a, cg, g, segs, max_add);
    if (!imp) return false;
    CanonicalImprovement ci;
    ci.shape = shape;
    for (auto& s : segs) ci.segments.push_back(std::move(s.edges));
    ci.improvement = std::move(*imp);
    result = std::move(ci);
    local.found_shape = static_cast<int>(shape);
    if (stats) *stats += local;
    return true;
  };

  auto cycle_entries = [&](int s) {
    std::vector<DPTable::Entry> out;
    for (const auto& e : table.finals(s, s))
      if (e.j >= 1) out.push_back(e);
    return out;
  };
  auto path_entries = [&](int s, int t) {
    std::vector<DPTable::Entry> out;
    for (const auto& e : table.finals(s, t))
      if (e.j >= 1) out.push_back(e);
    return out;
  };
  auto seg = [&](int start, int end, const DPTable::Entry& e) {
    return Segment{start, table.reconstruct(start, end, e.j, e.colors, e.qu,
                                            e.qv)};
  };

  // Shape 1: two cycles meeting at s.
  for (int s = 0; s < n; ++s) {
    auto cyc = cycle_entries(s);
    for (std::size_t i = 0; i < cyc.size(); ++i)
      for (std::size_t j = i + 1; j < cyc.size(); ++j) {
        if (cyc[i].colors & cyc[j].colors) continue;
        if (cyc[i].j + cyc[j].j > p_path) continue;
        if (try_candidate(Shape::kTwoCyclesAtPoint,
                          {seg(s, s, cyc[i]), seg(s, s, cyc[j])}))
          return result;
      }
  }

  // Shape 2: cycles at s and t joined by an s-t path.
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      auto cs = cycle_entries(s);
      auto ct = cycle_entries(t);
      auto pst = path_entries(s, t);
      if (cs.empty() || ct.empty() || pst.empty()) continue;
      for (const auto& e1 : cs)
        for (const auto& e2 : ct) {
          if (e1.colors & e2.colors) continue;
          for (const auto& e3 : pst) {
            if ((e3.colors & e1.colors) || (e3.colors & e2.colors)) continue;
            if (e1.j + e2.j + e3.j > p_path) continue;
            if (try_candidate(Shape::kTwoCyclesWithPath,
                              {seg(s, s, e1), seg(t, t, e2), seg(s, t, e3)}))
              return result;
          }
        }
    }

  // Shape 3: three s-t paths (two cycles sharing an arc).
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      auto pst = path_entries(s, t);
      for (std::size_t i = 0; i < pst.size(); ++i)
        for (std::size_t j = i + 1; j < pst.size(); ++j) {
          if (pst[i].colors & pst[j].colors) continue;
          for (std::size_t l = j + 1; l < pst.size(); ++l) {
            if ((pst[l].colors & pst[i].colors) ||
                (pst[l].colors & pst[j].colors))
              continue;
            if (pst[i].j + pst[j].j + pst[l].j > p_path) continue;
            if (try_candidate(
                    Shape::kThreePaths,
                    {seg(s, t, pst[i]), seg(s, t, pst[j]), seg(s, t, pst[l])}))
              return result;
          }
        }
    }

  if (g.has_groups()) {
    // Shape 4: a path whose both endpoints are removed by traversed groups.
    for (int s = 0; s < n; ++s)
      for (int t = s + 1; t < n; ++t)
        for (const auto& e : path_entries(s, t)) {
          if (!e.qu || !e.qv || e.j > p_path) continue;
          if (try_candidate(Shape::kFlaggedPath, {seg(s, t, e)})) return result;
        }

    // Shape 5: cycle at s plus an s-t path whose far endpoint is removed.
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (t == s) continue;
        auto cs = cycle_entries(s);
        if (cs.empty()) continue;
        for (const auto& pe : path_entries(s, t)) {
          if (!pe.qv) continue;
          for (const auto& ce : cs) {
            if (ce.colors & pe.colors) continue;
            if (ce.j + pe.j > p_path) continue;
            if (try_candidate(Shape::kFlaggedPathWithCycle,
                              {seg(s, s, ce), seg(s, t, pe)}))
              return result;
          }
        }
      }

    // Shape 6: a cycle whose base vertex is removed by a traversed group.
    for (int s = 0; s < n; ++s)
      for (const auto& e : cycle_entries(s)) {
        if (!e.qu || e.j > p_path) continue;
        if (try_candidate(Shape::kFlaggedCycle, {seg(s, s, e)})) return result;
      }
  }

  if (stats) *stats += local;
  return std::nullopt;
}

std::optional<Improvement> citc_round(const SetSystem& sys, const Packing& a,
                                      const CitcParams& params,
                                      const Coloring& coloring,
                                      CitcStats* stats) {
  const ConflictGraph cg = build_conflict_graph(sys, a);
  CitcStats local;

  GroupCatalog catalog;
  if (params.use_tail_changes) {
    for (int cp = 0; cp < cg.n_c(); ++cp) {
      const int d = cg.degree(cp);
      if (d < 3) continue;
      std::vector<std::vector<TailChange>> per_edge(d);
      bool any = false;
      for (int i = 0; i < d; ++i) {
        per_edge[i] = enumerate_tail_changes(sys, cg, cp, cg.c_adj[cp][i],
                                             params.tail_cap, coloring);
        local.tail_changes += static_cast<long long>(per_edge[i].size());
        if (!per_edge[i].empty()) any = true;
      }
      if (!any) continue;
      VertexGroupCatalog vg;
      vg.c_pos = cp;
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          bool covered = true;
          for (int l = 0; l < d && covered; ++l)
            if (l != i && l != j && per_edge[l].empty()) covered = false;
          if (!covered) continue;
          auto groups = colorful_groups(cg, cp, {i, j}, per_edge, coloring);
          if (groups.empty()) continue;
          local.groups += static_cast<long long>(groups.size());
          vg.kept_pairs.emplace_back(i, j);
          vg.by_kept_pair.push_back(std::move(groups));
        }
      if (!vg.kept_pairs.empty()) catalog.push_back(std::move(vg));
    }
  }

  const AuxMultigraph g =
      build_aux_multigraph(sys, cg, catalog, coloring, params.aux);
  local.edges += static_cast<long long>(g.edges.size());
  if (g.edges.empty()) {
    if (stats) *stats += local;
    return std::nullopt;
  }

  const DPTable table = dp_colorful_paths(g, params.p_path, coloring);
  local.dp_states += static_cast<long long>(table.states_set());

  auto found = find_canonical_improvement(sys, a, cg, g, table, params.p_path,
                                          params.max_add, &local);
  if (stats) *stats += local;
  if (!found) return std::nullopt;
  return found->improvement;
}

}  // namespace kpack
