/**
 * @brief Hourglass plabic graphs as slot-based combinatorial maps embedded in
 *        a disk: validation, trip strands, oscillization, rotation/reflection,
 *        canonical serialization, and JSON I/O.
 *
 * Conventions:
 *  - Boundary vertices have ids 0..nb-1 and are arranged clockwise.
 *  - Each vertex stores its incident strand-slots in counterclockwise order;
 *    an edge of multiplicity m occupies m cyclically-consecutive slots at each
 *    endpoint, carrying strand indices m-1,...,0 in that order (so strands
 *    read 0..m-1 clockwise at both endpoints, which encodes the hourglass
 *    half-twist: traversing the edge preserves the strand index).
 *  - Internal vertices have exactly 4 slots; boundary vertices carry a single
 *    edge whose multiplicity equals their degree.
 */
#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hourglass/common.hpp"
#include "hourglass/words.hpp"

namespace hourglass {

struct Slot {
  int edge = -1;
  int strand = 0;
  bool operator==(const Slot&) const = default;
};

struct GVertex {
  int color = 1;  ///< +1 black, -1 white
  std::vector<Slot> rot;  ///< counterclockwise strand-slots
};

struct GEdge {
  int u = -1, v = -1;
  int mult = 1;
  int other(int w) const { return w == u ? v : u; }
};

struct Graph {
  int nb = 0;  ///< boundary vertex count; ids 0..nb-1, clockwise
  std::vector<GVertex> verts;
  std::vector<GEdge> edges;

  bool is_boundary(int v) const { return v < nb; }
  int degree(int v) const { return static_cast<int>(verts[v].rot.size()); }
  int num_vertices() const { return static_cast<int>(verts.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  /// Index in rot(v) of the slot holding (edge e, strand s).
  int slot_of(int v, int e, int s) const {
    const auto& r = verts[v].rot;
    for (int i = 0; i < static_cast<int>(r.size()); ++i)
      if (r[i].edge == e && r[i].strand == s) return i;
    throw ValidationError("slot not found at vertex");
  }
};

/// Signed type c_i = col(b_i) * deg(b_i).
inline std::vector<int> graph_type(const Graph& g) {
  std::vector<int> c(g.nb);
  for (int i = 0; i < g.nb; ++i) c[i] = g.verts[i].color * g.degree(i);
  return c;
}

inline bool is_oscillating_type(const Graph& g) {
  for (int i = 0; i < g.nb; ++i)
    if (g.degree(i) != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

/// Edge-level rotation: collapse consecutive slots of one edge to one entry.
inline std::vector<int> edge_rotation(const Graph& g, int v) {
  const auto& r = g.verts[v].rot;
  std::vector<int> out;
  const int d = static_cast<int>(r.size());
  for (int i = 0; i < d; ++i)
    if (out.empty() || r[i].edge != r[(i - 1 + d) % d].edge ||
        g.edges[r[i].edge].u == g.edges[r[i].edge].v)
      out.push_back(r[i].edge);
  // cyclic wrap: first and last entries may belong to the same block
  if (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

/// One face of a planar map as the counterclockwise dart sequence (edge id,
/// direction flag: 0 means traversed tail(u) -> head(v)).
struct FaceTrace {
  std::vector<std::vector<std::pair<int, int>>> faces;
  std::string error;  ///< non-empty if the rotation system is inconsistent
};

/// Traces all face orbits of a rotation system.  `erot[v]` lists incident
/// edge ids counterclockwise; `ends(e)` returns the (u, v) endpoints.  The
/// orbit rule (clockwise-next after the reversed dart) walks each face
/// counterclockwise, keeping its interior on the left.
inline FaceTrace trace_faces(
    const std::vector<std::vector<int>>& erot, int nedges,
    const std::function<std::pair<int, int>(int)>& ends) {
  FaceTrace out;
  std::set<std::pair<int, int>> seen;
  for (int e0 = 0; e0 < nedges; ++e0)
    for (int dir0 = 0; dir0 < 2; ++dir0) {
      if (seen.count({e0, dir0})) continue;
      std::vector<std::pair<int, int>> face;
      int e = e0, dir = dir0;
      int guard = 0;
      do {
        seen.insert({e, dir});
        face.push_back({e, dir});
        auto [a, b] = ends(e);
        int head = dir == 0 ? b : a;
        const auto& er = erot[head];
        int idx = -1;
        for (int i = 0; i < static_cast<int>(er.size()); ++i)
          if (er[i] == e) idx = i;
        if (idx < 0) {
          out.error = "rotation missing edge during face trace";
          return out;
        }
        int enext = er[(idx - 1 + er.size()) % er.size()];
        auto [a2, b2] = ends(enext);
        if (a2 == head)
          e = enext, dir = 0;
        else if (b2 == head)
          e = enext, dir = 1;
        else {
          out.error = "face trace stepped to non-incident edge";
          return out;
        }
        if (++guard > 4 * nedges + 8) {
          out.error = "face trace did not close";
          return out;
        }
      } while (!(e == e0 && dir == dir0));
      out.faces.push_back(std::move(face));
    }
  return out;
}

}  // namespace detail

/// Returns a description of the first violated invariant, if any.
inline std::optional<std::string> validate_diagnostic(const Graph& g) {
  const int nv = g.num_vertices();
  if (g.nb < 0 || g.nb > nv) return "boundary count out of range";
  for (int v = 0; v < nv; ++v)
    if (g.verts[v].color != 1 && g.verts[v].color != -1)
      return "vertex color must be +1 or -1";
  for (int e = 0; e < g.num_edges(); ++e) {
    const GEdge& ed = g.edges[e];
    if (ed.u < 0 || ed.u >= nv || ed.v < 0 || ed.v >= nv)
      return "edge endpoint out of range";
    if (ed.u == ed.v) return "loops are not allowed";
    if (ed.mult < 1 || ed.mult > kRank) return "edge multiplicity out of range";
    if (g.verts[ed.u].color == g.verts[ed.v].color)
      return "graph must be properly bicolored";
  }
  // slot structure
  for (int v = 0; v < nv; ++v) {
    const auto& r = g.verts[v].rot;
    const int d = static_cast<int>(r.size());
    if (g.is_boundary(v)) {
      if (d == 0) return "boundary vertex with no incident edge";
      for (const Slot& s : r)
        if (s.edge != r[0].edge) return "boundary vertex with simple degree > 1";
    } else if (d != 4) {
      return "internal vertex of slot degree != 4";
    }
    std::map<int, std::vector<int>> positions;  // edge -> slot indices
    for (int i = 0; i < d; ++i) {
      if (r[i].edge < 0 || r[i].edge >= g.num_edges())
        return "slot references unknown edge";
      positions[r[i].edge].push_back(i);
    }
    for (const auto& [e, pos] : positions) {
      const GEdge& ed = g.edges[e];
      if (ed.u != v && ed.v != v) return "slot references non-incident edge";
      if (static_cast<int>(pos.size()) != ed.mult)
        return "edge slot count does not match multiplicity";
      // block must be cyclically consecutive with strands m-1..0 ccw
      int start = -1;
      for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
        int prev = (pos[i] - 1 + d) % d;
        if (r[prev].edge != e) {
          if (start != -1) return "edge slots not cyclically consecutive";
          start = pos[i];
        }
      }
      if (start == -1) {
        // the edge fills the whole rotation: any cyclic start is the same
        // embedding, so anchor at the slot carrying the top strand
        if (static_cast<int>(pos.size()) != d)
          return "edge slots not cyclically consecutive";
        for (int i = 0; i < d; ++i)
          if (r[i].strand == ed.mult - 1) start = i;
        if (start == -1) return "strand indices must read m-1..0 counterclockwise";
      }
      for (int k = 0; k < ed.mult; ++k)
        if (r[(start + k) % d].strand != ed.mult - 1 - k)
          return "strand indices must read m-1..0 counterclockwise";
    }
  }
  // every edge seen at both endpoints
  for (int e = 0; e < g.num_edges(); ++e) {
    for (int end : {g.edges[e].u, g.edges[e].v}) {
      int cnt = 0;
      for (const Slot& s : g.verts[end].rot)
        if (s.edge == e) ++cnt;
      if (cnt != g.edges[e].mult) return "edge missing from endpoint rotation";
    }
  }
  // planarity: Euler characteristic of the closed-up map must match its
  // component count (genus 0)
  {
    const int n = g.nb;
    // components of the graph with the boundary circle closed up
    std::vector<int> comp(nv, -1);
    int ncomp = 0;
    for (int v0 = 0; v0 < nv; ++v0) {
      if (comp[v0] != -1) continue;
      std::vector<int> stack{v0};
      comp[v0] = ncomp;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        std::vector<int> nbrs;
        for (const Slot& s : g.verts[v].rot)
          nbrs.push_back(g.edges[s.edge].other(v));
        if (g.is_boundary(v) && n > 1) {
          nbrs.push_back((v + 1) % n);
          nbrs.push_back((v - 1 + n) % n);
        }
        for (int w : nbrs)
          if (comp[w] == -1) {
            comp[w] = ncomp;
            stack.push_back(w);
          }
      }
      ++ncomp;
    }
    // face count via edge-level darts, with virtual boundary arcs
    // dart encoding: (edge_index, direction) for real edges; virtual arcs get
    // edge indices num_edges()+i connecting boundary i -> i+1
    const int ne = g.num_edges();
    const int nvirt = n > 1 ? n : 0;
    // build per-vertex edge-level rotations including virtual arcs
    std::vector<std::vector<int>> erot(nv);
    for (int v = 0; v < nv; ++v) {
      std::vector<int> er = detail::edge_rotation(g, v);
      if (g.is_boundary(v) && nvirt) {
        // ccw order at boundary vertex: arc to previous, own edges, arc to next
        std::vector<int> full;
        full.push_back(ne + (v - 1 + n) % n);  // arc (v-1, v)
        for (int e : er) full.push_back(e);
        full.push_back(ne + v);  // arc (v, v+1)
        er = full;
      }
      erot[v] = er;
    }
    auto endpoints = [&](int e) -> std::pair<int, int> {
      if (e < ne) return {g.edges[e].u, g.edges[e].v};
      return {e - ne, (e - ne + 1) % n};
    };
    auto traced = detail::trace_faces(erot, ne + nvirt, endpoints);
    if (!traced.error.empty()) return traced.error;
    const int faces = static_cast<int>(traced.faces.size());
    const int E = ne + nvirt;
    if (nv - E + faces != 2 * ncomp)
      return "embedding is not planar (Euler check failed)";
  }
  return std::nullopt;
}

inline void validate(const Graph& g) {
  if (auto d = validate_diagnostic(g)) throw ValidationError(*d);
}

inline bool has_isolated_components(const Graph& g) {
  // component search without boundary closure; a component with no boundary
  // vertex is isolated
  const int nv = g.num_vertices();
  std::vector<int> comp(nv, -1);
  int ncomp = 0;
  for (int v0 = 0; v0 < nv; ++v0) {
    if (comp[v0] != -1) continue;
    std::vector<int> stack{v0};
    comp[v0] = ncomp++;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Slot& s : g.verts[v].rot) {
        int w = g.edges[s.edge].other(v);
        if (comp[w] == -1) {
          comp[w] = comp[v0];
          stack.push_back(w);
        }
      }
    }
  }
  std::vector<char> touches(ncomp, 0);
  for (int b = 0; b < g.nb; ++b) touches[comp[b]] = 1;
  for (int v = g.nb; v < nv; ++v)
    if (!touches[comp[v]]) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Trip strands
// ---------------------------------------------------------------------------

struct StrandStep {
  int vertex;
  int entry_slot;
  int exit_slot;
};

struct StrandPath {
  int start = 0, end = 0;  ///< boundary indices (0-based)
  std::vector<StrandStep> steps;
};

/// Walks the trip_a-strand from boundary vertex i (0-based) of an
/// oscillating-type graph: at each internal vertex, exit slot =
/// entry + a*color (counterclockwise slots; black +, white -).
inline StrandPath trip_strand(const Graph& g, int a, int i) {
  if (a < 1 || a > kRank - 1) throw ValidationError("trip index out of range");
  if (!is_oscillating_type(g))
    throw ValidationError("trip strands require oscillating type");
  StrandPath path;
  path.start = i;
  Slot cur = g.verts[i].rot.at(0);
  int from = i;
  std::size_t guard = 0;
  const std::size_t cap = max_search_nodes();
  while (true) {
    const GEdge& e = g.edges[cur.edge];
    int w = e.other(from);
    int entry = g.slot_of(w, cur.edge, cur.strand);
    if (g.is_boundary(w)) {
      path.end = w;
      return path;
    }
    int exit = ((entry + a * g.verts[w].color) % 4 + 4) % 4;
    path.steps.push_back({w, entry, exit});
    cur = g.verts[w].rot[exit];
    from = w;
    if (++guard > cap) throw ResourceError("trip walk exceeded node cap");
  }
}

struct TripPerms {
  std::array<std::vector<int>, kRank - 1> perm;  ///< perm[a-1][i] 0-based
  bool operator==(const TripPerms&) const = default;
};

inline Graph oscillize_graph(
    const Graph& g,
    std::vector<std::vector<int>>* edge_map = nullptr);  // defined below

inline TripPerms trip_perms(const Graph& g) {
  const Graph* go = &g;
  Graph tmp;
  if (!is_oscillating_type(g)) {
    tmp = oscillize_graph(g);
    go = &tmp;
  }
  TripPerms t;
  for (int a = 1; a <= kRank - 1; ++a) {
    t.perm[a - 1].resize(go->nb);
    for (int i = 0; i < go->nb; ++i)
      t.perm[a - 1][i] = trip_strand(*go, a, i).end;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Monotonicity (equivalent to full reducedness)
// ---------------------------------------------------------------------------

/// A graph is monotonic when its trip_2-strands neither revisit vertices nor
/// cross twice, and for every trip_1-strand and trip_2-strand the shared
/// vertices are consecutive along both.  This is equivalent to being fully
/// reduced, and serves as the effective full-reducedness test.
inline bool is_monotonic(const Graph& g) {
  const Graph* go = &g;
  Graph tmp;
  if (!is_oscillating_type(g)) {
    tmp = oscillize_graph(g);
    go = &tmp;
  }
  if (has_isolated_components(*go)) return false;
  // crossings live on the contracted quotient: vertices joined by hourglass
  // edges act as a single crossing point, so strands are recorded as
  // sequences of hourglass-connected components
  std::vector<int> rep(go->num_vertices());
  std::iota(rep.begin(), rep.end(), 0);
  std::function<int(int)> find = [&](int v) {
    return rep[v] == v ? v : rep[v] = find(rep[v]);
  };
  for (const GEdge& e : go->edges)
    if (e.mult > 1) rep[find(e.u)] = find(e.v);
  auto verts_of = [&](const StrandPath& p) {
    std::vector<int> vs;
    for (const StrandStep& s : p.steps) {
      int c = find(s.vertex);
      if (vs.empty() || vs.back() != c) vs.push_back(c);
    }
    return vs;
  };
  // trip_2-strands, one per endpoint pair
  std::vector<std::vector<int>> two;
  for (int i = 0; i < go->nb; ++i) {
    StrandPath p = trip_strand(*go, 2, i);
    if (p.end >= i) two.push_back(verts_of(p));
  }
  for (const auto& s : two) {
    std::set<int> uniq(s.begin(), s.end());
    if (uniq.size() != s.size()) return false;  // self-intersection
  }
  for (std::size_t x = 0; x < two.size(); ++x)
    for (std::size_t y = x + 1; y < two.size(); ++y) {
      std::set<int> sx(two[x].begin(), two[x].end());
      int shared = 0;
      for (int v : two[y]) shared += sx.count(v);
      if (shared > 1) return false;  // double crossing
    }
  // trip_1 vs trip_2 consecutiveness
  for (int i = 0; i < go->nb; ++i) {
    std::vector<int> one = verts_of(trip_strand(*go, 1, i));
    for (const auto& s2 : two) {
      std::set<int> u2(s2.begin(), s2.end());
      std::set<int> u1(one.begin(), one.end());
      auto consecutive = [&](const std::vector<int>& seq, const std::set<int>& other) {
        int first = -1, last = -1;
        for (int k = 0; k < static_cast<int>(seq.size()); ++k)
          if (other.count(seq[k])) {
            if (first < 0) first = k;
            last = k;
          }
        if (first < 0) return true;
        for (int k = first; k <= last; ++k)
          if (!other.count(seq[k])) return false;
        return true;
      };
      if (!consecutive(one, u2) || !consecutive(s2, u1)) return false;
    }
  }
  return true;
}

inline bool is_fully_reduced(const Graph& g) { return is_monotonic(g); }

// ---------------------------------------------------------------------------
// Oscillization
// ---------------------------------------------------------------------------

/// Replaces every boundary d-hourglass (d > 1) by a planar claw of d simple
/// edges to d clockwise-consecutive boundary vertices.  Boundary-boundary
/// edges are first un-contracted through a fresh pair of internal vertices.
inline Graph oscillize_graph(const Graph& g,
                             std::vector<std::vector<int>>* edge_map) {
  Graph h = g;
  // step 1: un-contract boundary-boundary edges:
  // b -m- b'  becomes  b -m- x -(4-m)- x' -m- b'
  for (int e = 0; e < h.num_edges(); ++e) {
    // note: h.edges grows inside the loop, so no reference into it may be
    // held across the push_backs
    if (!(h.is_boundary(h.edges[e].u) && h.is_boundary(h.edges[e].v))) continue;
    const int m = h.edges[e].mult;
    const int oldu = h.edges[e].u;
    const int oldv = h.edges[e].v;
    if (m == kRank)
      throw ValidationError("cannot oscillize a full boundary hourglass");
    int x = h.num_vertices();
    int xp = x + 1;
    h.verts.push_back({-h.verts[oldu].color, {}});
    h.verts.push_back({-h.verts[oldv].color, {}});
    int emid = h.num_edges();
    h.edges.push_back({x, xp, kRank - m});
    int e2 = h.num_edges();
    h.edges.push_back({xp, oldv, m});
    // rewire: e now connects u -- x
    h.edges[e].v = x;
    // rotations: at x ccw: [e block, emid block]; at xp ccw: [emid block, e2]
    for (int k = m - 1; k >= 0; --k) h.verts[x].rot.push_back({e, k});
    for (int k = kRank - m - 1; k >= 0; --k) h.verts[x].rot.push_back({emid, k});
    for (int k = kRank - m - 1; k >= 0; --k) h.verts[xp].rot.push_back({emid, k});
    for (int k = m - 1; k >= 0; --k) h.verts[xp].rot.push_back({e2, k});
    for (Slot& s : h.verts[oldv].rot)
      if (s.edge == e) s.edge = e2;
  }
  // step 2: split boundary hourglasses into claws
  Graph out;
  std::vector<int> vmap(h.num_vertices(), -1);  // old id -> new id (internal)
  // new boundary ids: expand in clockwise order
  std::vector<std::vector<int>> expansion(h.nb);
  int nb2 = 0;
  for (int b = 0; b < h.nb; ++b) {
    int d = h.degree(b);
    for (int k = 0; k < d; ++k) expansion[b].push_back(nb2++);
  }
  out.nb = nb2;
  out.verts.resize(nb2);
  for (int b = 0; b < h.nb; ++b)
    for (int id : expansion[b]) out.verts[id].color = h.verts[b].color;
  for (int v = h.nb; v < h.num_vertices(); ++v) {
    vmap[v] = out.num_vertices();
    out.verts.push_back({h.verts[v].color, {}});
  }
  // edges: boundary edges split; internal edges copied
  std::vector<int> emap(h.num_edges(), -1);
  for (int e = 0; e < h.num_edges(); ++e) {
    const GEdge& ed = h.edges[e];
    bool bu = h.is_boundary(ed.u), bv = h.is_boundary(ed.v);
    if (!bu && !bv) {
      emap[e] = out.num_edges();
      out.edges.push_back({vmap[ed.u], vmap[ed.v], ed.mult});
    }
  }
  // per old-boundary-edge: new simple edge ids per strand
  std::vector<std::vector<int>> strand_edge(h.num_edges());
  for (int e = 0; e < h.num_edges(); ++e) {
    const GEdge& ed = h.edges[e];
    int b = h.is_boundary(ed.u) ? ed.u : (h.is_boundary(ed.v) ? ed.v : -1);
    if (b < 0) continue;
    int v = ed.other(b);
    strand_edge[e].resize(ed.mult);
    // clockwise new boundary vertex k corresponds to ccw claw position
    // d-1-k at v; pick the pairing strand s = k (clockwise order matches)
    for (int s = 0; s < ed.mult; ++s) {
      strand_edge[e][s] = out.num_edges();
      out.edges.push_back({expansion[b][s], vmap[v], 1});
    }
  }
  // rotations
  for (int b = 0; b < h.nb; ++b) {
    const Slot s0 = h.verts[b].rot.at(0);
    for (int k = 0; k < h.degree(b); ++k)
      out.verts[expansion[b][k]].rot = {{strand_edge[s0.edge][k], 0}};
  }
  for (int v = h.nb; v < h.num_vertices(); ++v) {
    for (const Slot& s : h.verts[v].rot) {
      const GEdge& ed = h.edges[s.edge];
      if (h.is_boundary(ed.u) || h.is_boundary(ed.v)) {
        // ccw position j within the block carries strand m-1-j; a planar
        // claw sends ccw position j to clockwise boundary vertex index
        // m-1-j, so strand index s.strand names the boundary vertex
        out.verts[vmap[v]].rot.push_back({strand_edge[s.edge][s.strand], 0});
      } else {
        out.verts[vmap[v]].rot.push_back({emap[s.edge], s.strand});
      }
    }
  }
  if (edge_map) {
    // original edge -> its images: internal edges map one-to-one; boundary
    // hourglasses map to their claw edges (a boundary-boundary edge maps to
    // the claw on its u side; both sides carry the same separation label)
    edge_map->assign(g.num_edges(), {});
    for (int e = 0; e < g.num_edges(); ++e) {
      if (emap[e] >= 0)
        (*edge_map)[e] = {emap[e]};
      else
        (*edge_map)[e] = strand_edge[e];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rotation and reflection
// ---------------------------------------------------------------------------

namespace detail {
inline Graph relabel_boundary(const Graph& g, const std::vector<int>& newpos) {
  // newpos[old b] = new boundary index
  Graph h;
  h.nb = g.nb;
  h.verts.resize(g.num_vertices());
  std::vector<int> vmap(g.num_vertices());
  for (int b = 0; b < g.nb; ++b) vmap[b] = newpos[b];
  for (int v = g.nb; v < g.num_vertices(); ++v) vmap[v] = v;
  for (int v = 0; v < g.num_vertices(); ++v) h.verts[vmap[v]] = g.verts[v];
  h.edges = g.edges;
  for (GEdge& e : h.edges) {
    e.u = vmap[e.u];
    e.v = vmap[e.v];
  }
  return h;
}
}  // namespace detail

/// Rotates one step counterclockwise: old b_{i+1} becomes new b_i.
inline Graph rotate_graph(const Graph& g) {
  std::vector<int> newpos(g.nb);
  for (int b = 0; b < g.nb; ++b) newpos[b] = (b - 1 + g.nb) % g.nb;
  return detail::relabel_boundary(g, newpos);
}

/// Reflects across the diameter between b_n and b_1 (0-based: between
/// boundary n-1 and 0): reverses boundary order and all rotations.
inline Graph reflect_graph(const Graph& g) {
  std::vector<int> newpos(g.nb);
  for (int b = 0; b < g.nb; ++b) newpos[b] = g.nb - 1 - b;
  Graph h = detail::relabel_boundary(g, newpos);
  for (auto& v : h.verts) {
    std::reverse(v.rot.begin(), v.rot.end());
    for (Slot& s : v.rot) s.strand = h.edges[s.edge].mult - 1 - s.strand;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

/// Deterministic traversal key: boundary vertices are labeled, so the
/// embedding is rigid and no orbit minimization is needed.
inline std::string canonical_key(const Graph& g) {
  const int nv = g.num_vertices();
  std::vector<int> order(nv, -1);  // vertex -> discovery id
  std::vector<int> anchor(nv, 0);  // slot index rotations are read from
  int next = 0;
  std::vector<int> queue;
  for (int b = 0; b < g.nb; ++b) {
    order[b] = next++;
    queue.push_back(b);
  }
  std::size_t qi = 0;
  while (qi < queue.size()) {
    int v = queue[qi++];
    const auto& r = g.verts[v].rot;
    const int d = static_cast<int>(r.size());
    for (int k = 0; k < d; ++k) {
      const Slot& s = r[(anchor[v] + k) % d];
      int w = g.edges[s.edge].other(v);
      if (order[w] == -1) {
        order[w] = next++;
        anchor[w] = g.slot_of(w, s.edge, s.strand);
        queue.push_back(w);
      }
    }
  }
  // isolated components (no boundary anchor) are keyed after everything else
  for (int v = 0; v < nv; ++v)
    if (order[v] == -1) {
      order[v] = next++;
      queue.push_back(v);
      std::size_t qj = queue.size() - 1;
      while (qj < queue.size()) {
        int x = queue[qj++];
        const auto& r = g.verts[x].rot;
        for (int k = 0; k < static_cast<int>(r.size()); ++k) {
          const Slot& s = r[(anchor[x] + k) % r.size()];
          int w = g.edges[s.edge].other(x);
          if (order[w] == -1) {
            order[w] = next++;
            anchor[w] = g.slot_of(w, s.edge, s.strand);
            queue.push_back(w);
          }
        }
      }
    }
  std::string key = "n" + std::to_string(g.nb) + ";";
  std::vector<int> byorder(nv);
  for (int v = 0; v < nv; ++v) byorder[order[v]] = v;
  for (int id = 0; id < nv; ++id) {
    int v = byorder[id];
    const auto& r = g.verts[v].rot;
    const int d = static_cast<int>(r.size());
    key += (g.verts[v].color == 1 ? 'B' : 'W');
    for (int k = 0; k < d; ++k) {
      const Slot& s = r[(anchor[v] + k) % d];
      const GEdge& e = g.edges[s.edge];
      key += " " + std::to_string(order[e.other(v)]) + ":" +
             std::to_string(e.mult) + ":" + std::to_string(s.strand);
    }
    key += ";";
  }
  return key;
}

// ---------------------------------------------------------------------------
// JSON I/O
// ---------------------------------------------------------------------------

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["boundary"] = nlohmann::json::array();
  for (int b = 0; b < g.nb; ++b)
    j["boundary"].push_back({{"color", g.verts[b].color}});
  j["vertices"] = nlohmann::json::array();
  for (int v = g.nb; v < g.num_vertices(); ++v)
    j["vertices"].push_back({{"color", g.verts[v].color}});
  j["edges"] = nlohmann::json::array();
  for (const GEdge& e : g.edges)
    j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"mult", e.mult}});
  j["rotation"] = nlohmann::json::array();
  for (const auto& v : g.verts) {
    nlohmann::json r = nlohmann::json::array();
    for (const Slot& s : v.rot) r.push_back({s.edge, s.strand});
    j["rotation"].push_back(r);
  }
  return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
  Graph g;
  try {
    g.nb = static_cast<int>(j.at("boundary").size());
    for (const auto& b : j.at("boundary"))
      g.verts.push_back({b.at("color").get<int>(), {}});
    for (const auto& v : j.at("vertices"))
      g.verts.push_back({v.at("color").get<int>(), {}});
    for (const auto& e : j.at("edges"))
      g.edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(),
                         e.at("mult").get<int>()});
    const auto& rot = j.at("rotation");
    if (rot.size() != static_cast<std::size_t>(g.num_vertices()))
      throw ValidationError("rotation list size mismatch");
    for (int v = 0; v < g.num_vertices(); ++v)
      for (const auto& s : rot[v])
        g.verts[v].rot.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed graph JSON: ") + ex.what());
  }
  validate(g);
  return g;
}

// ---------------------------------------------------------------------------
// Small builders (used widely in tests and the CLI)
// ---------------------------------------------------------------------------

/// Star graph: one internal vertex joined by simple edges to n boundary
/// vertices (clockwise); internal color opposite to the boundary color.
inline Graph star_graph(int n = kRank, int boundary_color = 1) {
  Graph g;
  g.nb = n;
  for (int b = 0; b < n; ++b) g.verts.push_back({boundary_color, {}});
  g.verts.push_back({-boundary_color, {}});
  for (int b = 0; b < n; ++b) {
    g.edges.push_back({b, n, 1});
    g.verts[b].rot = {{b, 0}};
  }
  // seen from the center, clockwise boundary reads counterclockwise reversed
  for (int b = n - 1; b >= 0; --b) g.verts[n].rot.push_back({b, 0});
  return g;
}

/// Basic benzene graph: a hexagon of internal vertices with alternating
/// 2-hourglasses, one pendant boundary edge per hexagon vertex.  The two
/// chiralities (which alternating triple of hexagon edges is doubled) are
/// exchanged by the benzene move.
inline Graph benzene_graph(bool chirality = false) {
  Graph g;
  g.nb = 6;
  for (int b = 0; b < 6; ++b) g.verts.push_back({b % 2 == 0 ? 1 : -1, {}});
  for (int j = 0; j < 6; ++j) g.verts.push_back({j % 2 == 0 ? -1 : 1, {}});
  for (int j = 0; j < 6; ++j) {
    g.edges.push_back({j, 6 + j, 1});  // pendant edge j
    g.verts[j].rot = {{j, 0}};
  }
  for (int j = 0; j < 6; ++j) {
    int mult = ((j % 2 == 0) != chirality) ? 2 : 1;
    g.edges.push_back({6 + j, 6 + (j + 1) % 6, mult});  // hexagon edge 6 + j
  }
  for (int j = 0; j < 6; ++j) {
    auto& r = g.verts[6 + j].rot;
    r.push_back({j, 0});  // pendant, then previous edge, then next (ccw)
    int eprev = 6 + (j + 5) % 6, enext = 6 + j;
    for (int s = g.edges[eprev].mult - 1; s >= 0; --s) r.push_back({eprev, s});
    for (int s = g.edges[enext].mult - 1; s >= 0; --s) r.push_back({enext, s});
  }
  return g;
}

}  // namespace hourglass
