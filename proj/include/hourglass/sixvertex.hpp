/**
 * @brief Symmetrized six-vertex configurations: the correspondence with
 *        contracted hourglass plabic graphs, well-orientedness, Yang-Baxter
 *        and ASM moves, and matching diagrams.
 *
 * A configuration is a 4-valent disk graph with oriented simple edges where
 * every internal vertex is a source (4 out), a sink (4 in), or transmitting
 * (two counterclockwise-adjacent edges in, the other two out).  Contracting
 * every 2-hourglass of an hourglass plabic graph and orienting simple edges
 * black -> white realizes the bijection phi; sinks pull back to white
 * vertices, sources to black, transmitting vertices to white--black pairs
 * joined by a 2-hourglass.
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

#include "hourglass/graph.hpp"

namespace hourglass {

struct SixVertexConfig {
  int nb = 0;  ///< boundary vertex ids 0..nb-1, clockwise
  std::vector<std::vector<int>> rot;          ///< per-vertex ccw edge ids
  std::vector<std::array<int, 2>> edge_ends;  ///< directed tail -> head

  bool is_boundary(int v) const { return v < nb; }
  int num_vertices() const { return static_cast<int>(rot.size()); }
  int num_edges() const { return static_cast<int>(edge_ends.size()); }
  int other(int e, int v) const {
    return edge_ends[e][0] == v ? edge_ends[e][1] : edge_ends[e][0];
  }
  /// +1 if edge e is directed away from v.
  int out_at(int e, int v) const { return edge_ends[e][0] == v ? 1 : -1; }
  int slot_of(int v, int e) const {
    for (int i = 0; i < static_cast<int>(rot[v].size()); ++i)
      if (rot[v][i] == e) return i;
    throw ValidationError("edge not incident to vertex");
  }
};

enum class VertexKind { Source, Sink, Transmit, Invalid };

/// Classifies an internal vertex by its four edge orientations.
inline VertexKind vertex_kind(const SixVertexConfig& d, int v) {
  const auto& r = d.rot[v];
  if (r.size() != 4) return VertexKind::Invalid;
  std::array<bool, 4> in{};
  int nin = 0;
  for (int i = 0; i < 4; ++i) {
    in[i] = d.out_at(r[i], v) < 0;
    nin += in[i];
  }
  if (nin == 4) return VertexKind::Sink;
  if (nin == 0) return VertexKind::Source;
  if (nin != 2) return VertexKind::Invalid;
  for (int i = 0; i < 4; ++i)
    if (in[i] && in[(i + 1) % 4]) return VertexKind::Transmit;
  return VertexKind::Invalid;
}

/// Boundary conditions: o_i = +1 if the edge at b_i points inward.
inline std::vector<int> boundary_conditions(const SixVertexConfig& d) {
  std::vector<int> o(d.nb);
  for (int b = 0; b < d.nb; ++b) o[b] = d.out_at(d.rot[b].at(0), b);
  return o;
}

/// Validates structure (degrees, rotations, planarity) and vertex patterns.
/// When `directed` is false, orientation patterns are not checked (matching
/// diagrams forget directions).
inline std::optional<std::string> validate_six_vertex_diagnostic(
    const SixVertexConfig& d, bool directed = true) {
  const int nv = d.num_vertices();
  if (d.nb < 0 || d.nb > nv) return "boundary count out of range";
  for (int e = 0; e < d.num_edges(); ++e) {
    for (int v : d.edge_ends[e])
      if (v < 0 || v >= nv) return "edge endpoint out of range";
    if (d.edge_ends[e][0] == d.edge_ends[e][1]) return "loops are not allowed";
  }
  std::vector<int> seen(d.num_edges(), 0);
  for (int v = 0; v < nv; ++v) {
    const auto& r = d.rot[v];
    if (d.is_boundary(v) && r.size() != 1)
      return "boundary vertex must have degree 1";
    if (!d.is_boundary(v) && r.size() != 4)
      return "internal vertex must have degree 4";
    for (int e : r) {
      if (e < 0 || e >= d.num_edges()) return "rotation references unknown edge";
      if (d.edge_ends[e][0] != v && d.edge_ends[e][1] != v)
        return "rotation references non-incident edge";
      ++seen[e];
    }
  }
  for (int c : seen)
    if (c != 2) return "edge endpoint count mismatch";
  if (directed)
    for (int v = d.nb; v < nv; ++v)
      if (vertex_kind(d, v) == VertexKind::Invalid)
        return "internal vertex orientation pattern not allowed";
  // planarity via the closed-up map
  {
    const int n = d.nb, ne = d.num_edges();
    const int nvirt = n > 1 ? n : 0;
    std::vector<std::vector<int>> erot(nv);
    for (int v = 0; v < nv; ++v) {
      erot[v] = d.rot[v];
      if (d.is_boundary(v) && nvirt) {
        std::vector<int> full;
        full.push_back(ne + (v - 1 + n) % n);
        for (int e : erot[v]) full.push_back(e);
        full.push_back(ne + v);
        erot[v] = full;
      }
    }
    auto ends = [&](int e) -> std::pair<int, int> {
      if (e < ne) return {d.edge_ends[e][0], d.edge_ends[e][1]};
      return {e - ne, (e - ne + 1) % n};
    };
    auto traced = detail::trace_faces(erot, ne + nvirt, ends);
    if (!traced.error.empty()) return traced.error;
    // components of the closed-up graph
    std::vector<int> comp(nv, -1);
    int ncomp = 0;
    for (int v0 = 0; v0 < nv; ++v0) {
      if (comp[v0] != -1) continue;
      std::vector<int> stack{v0};
      comp[v0] = ncomp++;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        std::vector<int> nbrs;
        for (int e : d.rot[v]) nbrs.push_back(d.other(e, v));
        if (d.is_boundary(v) && n > 1) {
          nbrs.push_back((v + 1) % n);
          nbrs.push_back((v - 1 + n) % n);
        }
        for (int w : nbrs)
          if (comp[w] == -1) {
            comp[w] = comp[v0];
            stack.push_back(w);
          }
      }
    }
    if (nv - (ne + nvirt) + static_cast<int>(traced.faces.size()) != 2 * ncomp)
      return "embedding is not planar (Euler check failed)";
  }
  return std::nullopt;
}

inline void validate_six_vertex(const SixVertexConfig& d, bool directed = true) {
  if (auto r = validate_six_vertex_diagnostic(d, directed))
    throw ValidationError(*r);
}

inline bool six_vertex_has_isolated_components(const SixVertexConfig& d) {
  const int nv = d.num_vertices();
  std::vector<int> comp(nv, -1);
  int ncomp = 0;
  for (int v0 = 0; v0 < nv; ++v0) {
    if (comp[v0] != -1) continue;
    std::vector<int> stack{v0};
    comp[v0] = ncomp++;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : d.rot[v]) {
        int w = d.other(e, v);
        if (comp[w] == -1) {
          comp[w] = comp[v0];
          stack.push_back(w);
        }
      }
    }
  }
  std::vector<char> touches(ncomp, 0);
  for (int b = 0; b < d.nb; ++b) touches[comp[b]] = 1;
  for (int v = d.nb; v < nv; ++v)
    if (!touches[comp[v]]) return true;
  return false;
}

// ---------------------------------------------------------------------------
// The correspondence phi
// ---------------------------------------------------------------------------

/// Contracts every 2-hourglass to a single (transmitting) vertex and orients
/// all simple edges black -> white.  Requires an oscillating-type graph whose
/// hourglasses are internal 2-hourglasses, with at most one per vertex.
inline SixVertexConfig phi(const Graph& g) {
  validate(g);
  if (!is_oscillating_type(g))
    throw ValidationError("phi requires an oscillating-type graph");
  std::vector<int> hg_of(g.num_vertices(), -1);  // incident hourglass edge
  for (int e = 0; e < g.num_edges(); ++e) {
    const GEdge& ed = g.edges[e];
    if (ed.mult == 1) continue;
    if (ed.mult != 2 || g.is_boundary(ed.u) || g.is_boundary(ed.v))
      throw ValidationError("phi requires a contracted graph");
    for (int v : {ed.u, ed.v}) {
      if (hg_of[v] != -1)
        throw ValidationError("phi requires a contracted graph");
      hg_of[v] = e;
    }
  }
  SixVertexConfig d;
  d.nb = g.nb;
  std::vector<int> vmap(g.num_vertices(), -1);
  for (int b = 0; b < g.nb; ++b) vmap[b] = b;
  int next = g.nb;
  for (int v = g.nb; v < g.num_vertices(); ++v) {
    if (vmap[v] != -1) continue;
    vmap[v] = next;
    if (hg_of[v] != -1) vmap[g.edges[hg_of[v]].other(v)] = next;
    ++next;
  }
  d.rot.resize(next);
  std::vector<int> emap(g.num_edges(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    const GEdge& ed = g.edges[e];
    if (ed.mult != 1) continue;
    emap[e] = d.num_edges();
    int black = g.verts[ed.u].color == 1 ? ed.u : ed.v;
    int white = ed.other(black);
    d.edge_ends.push_back({vmap[black], vmap[white]});
  }
  // rotations: plain vertices copy; merged vertices read the white side's
  // two slots after its hourglass block, then the black side's
  auto after_hg = [&](int v) {
    const auto& r = g.verts[v].rot;
    int p = -1;
    for (int i = 0; i < 4; ++i)
      if (r[i].edge == hg_of[v] && r[(i + 3) % 4].edge != hg_of[v]) p = i;
    std::vector<int> out;
    out.push_back(emap[r[(p + 2) % 4].edge]);
    out.push_back(emap[r[(p + 3) % 4].edge]);
    return out;
  };
  for (int b = 0; b < g.nb; ++b)
    d.rot[b] = {emap[g.verts[b].rot.at(0).edge]};
  for (int v = g.nb; v < g.num_vertices(); ++v) {
    if (hg_of[v] == -1) {
      for (const Slot& s : g.verts[v].rot) d.rot[vmap[v]].push_back(emap[s.edge]);
    } else if (g.verts[v].color == -1) {  // build from the white side
      int black = g.edges[hg_of[v]].other(v);
      std::vector<int> r = after_hg(v);
      for (int e : after_hg(black)) r.push_back(e);
      d.rot[vmap[v]] = r;
    }
  }
  validate_six_vertex(d);
  return d;
}

/// Inverse of phi: colors sinks white and sources black, and expands each
/// transmitting vertex into a white--black pair joined by a 2-hourglass, the
/// white side taking the incoming pair of edges.
inline Graph phi_inverse(const SixVertexConfig& d) {
  validate_six_vertex(d);
  Graph g;
  g.nb = d.nb;
  // boundary colors from edge direction: inward edge = black boundary vertex
  for (int b = 0; b < d.nb; ++b)
    g.verts.push_back({d.out_at(d.rot[b].at(0), b), {}});
  std::vector<int> white_id(d.num_vertices(), -1), black_id(d.num_vertices(), -1);
  for (int v = d.nb; v < d.num_vertices(); ++v) {
    switch (vertex_kind(d, v)) {
      case VertexKind::Sink:
        white_id[v] = g.num_vertices();
        g.verts.push_back({-1, {}});
        break;
      case VertexKind::Source:
        black_id[v] = g.num_vertices();
        g.verts.push_back({1, {}});
        break;
      case VertexKind::Transmit:
        white_id[v] = g.num_vertices();
        g.verts.push_back({-1, {}});
        black_id[v] = g.num_vertices();
        g.verts.push_back({1, {}});
        break;
      default:
        throw ValidationError("invalid vertex pattern");
    }
  }
  // simple edges keep their ids; endpoint = white side if the edge points
  // into v, black side if it points out
  auto end_vertex = [&](int e, int v) {
    if (d.is_boundary(v)) return v;
    return d.out_at(e, v) < 0 ? white_id[v] : black_id[v];
  };
  for (int e = 0; e < d.num_edges(); ++e)
    g.edges.push_back({end_vertex(e, d.edge_ends[e][0]),
                       end_vertex(e, d.edge_ends[e][1]), 1});
  for (int b = 0; b < d.nb; ++b) g.verts[b].rot = {{d.rot[b].at(0), 0}};
  for (int v = d.nb; v < d.num_vertices(); ++v) {
    const auto& r = d.rot[v];
    VertexKind k = vertex_kind(d, v);
    if (k == VertexKind::Sink || k == VertexKind::Source) {
      int id = k == VertexKind::Sink ? white_id[v] : black_id[v];
      for (int e : r) g.verts[id].rot.push_back({e, 0});
      continue;
    }
    // transmitting: find p with slots p, p+1 incoming
    int p = -1;
    for (int i = 0; i < 4; ++i)
      if (d.out_at(r[i], v) < 0 && d.out_at(r[(i + 1) % 4], v) < 0) p = i;
    int hg = g.num_edges();
    g.edges.push_back({white_id[v], black_id[v], 2});
    g.verts[white_id[v]].rot = {
        {r[p], 0}, {r[(p + 1) % 4], 0}, {hg, 1}, {hg, 0}};
    g.verts[black_id[v]].rot = {
        {r[(p + 2) % 4], 0}, {r[(p + 3) % 4], 0}, {hg, 1}, {hg, 0}};
  }
  validate(g);
  return g;
}

// ---------------------------------------------------------------------------
// trip_2-strands and well-orientedness
// ---------------------------------------------------------------------------

/// A trip_2-strand of a configuration: straight across at every vertex.
/// Returns the boundary endpoint, interior vertex sequence, and the edge
/// sequence (edges[k] joins vertex k-1 to k, with edges.front() leaving the
/// start and edges.back() reaching the end).
struct SixVertexStrand {
  int start = 0, end = 0;
  std::vector<int> vertices;
  std::vector<int> edges;
};

inline SixVertexStrand six_vertex_trip2(const SixVertexConfig& d, int i) {
  SixVertexStrand s;
  s.start = i;
  int e = d.rot[i].at(0), from = i;
  std::size_t guard = 0;
  while (true) {
    s.edges.push_back(e);
    int w = d.other(e, from);
    if (d.is_boundary(w)) {
      s.end = w;
      return s;
    }
    s.vertices.push_back(w);
    e = d.rot[w][(d.slot_of(w, e) + 2) % 4];
    from = w;
    if (++guard > max_search_nodes())
      throw ResourceError("strand walk exceeded node cap");
  }
}

/// The trip_2 boundary matching (an involution on 0..nb-1).
inline std::vector<int> six_vertex_matching(const SixVertexConfig& d) {
  std::vector<int> m(d.nb);
  for (int i = 0; i < d.nb; ++i) m[i] = six_vertex_trip2(d, i).end;
  return m;
}

/// (P1): trip_2-strands neither self-intersect nor cross twice.
/// (P2): the segments between the three crossings of any three pairwise
/// crossing trip_2-strands form a directed 3-cycle (big triangles oriented).
inline bool is_well_oriented(const SixVertexConfig& d) {
  if (six_vertex_has_isolated_components(d)) return false;
  std::vector<SixVertexStrand> strands;
  for (int i = 0; i < d.nb; ++i) {
    SixVertexStrand s = six_vertex_trip2(d, i);
    if (s.end >= i) strands.push_back(std::move(s));
  }
  // (P1)
  for (const auto& s : strands) {
    std::set<int> uniq(s.vertices.begin(), s.vertices.end());
    if (uniq.size() != s.vertices.size()) return false;
  }
  const int ns = static_cast<int>(strands.size());
  std::vector<std::map<int, int>> pos(ns);  // vertex -> index along strand
  for (int x = 0; x < ns; ++x)
    for (int k = 0; k < static_cast<int>(strands[x].vertices.size()); ++k)
      pos[x][strands[x].vertices[k]] = k;
  std::map<std::pair<int, int>, int> cross;  // strand pair -> crossing vertex
  for (int x = 0; x < ns; ++x)
    for (int y = x + 1; y < ns; ++y) {
      int shared = 0, vtx = -1;
      for (const auto& [v, k] : pos[y])
        if (pos[x].count(v)) {
          ++shared;
          vtx = v;
        }
      if (shared > 1) return false;
      if (shared == 1) cross[{x, y}] = vtx;
    }
  // (P2): a segment of strand x between positions p < q is oriented iff every
  // edge between them points the same way along the walk
  auto segment = [&](int x, int va, int vb) -> int {
    // returns +1 (directed va -> vb along the strand), -1 (vb -> va), 0 (mixed)
    int p = pos[x].at(va), q = pos[x].at(vb);
    int lo = std::min(p, q), hi = std::max(p, q);
    int dir = 0;
    for (int k = lo + 1; k <= hi; ++k) {
      // edge k joins vertex k-1 to vertex k; +1 if directed along the walk
      int e = strands[x].edges[k];
      int tail = strands[x].vertices[k - 1];
      int dthis = d.out_at(e, tail);
      if (dir == 0)
        dir = dthis;
      else if (dir != dthis)
        return 0;
    }
    return (p < q) == (dir == 1) ? 1 : -1;  // +1 means va -> vb
  };
  for (int x = 0; x < ns; ++x)
    for (int y = x + 1; y < ns; ++y) {
      auto ixy = cross.find({x, y});
      if (ixy == cross.end()) continue;
      for (int z = y + 1; z < ns; ++z) {
        auto ixz = cross.find({x, z}), iyz = cross.find({y, z});
        if (ixz == cross.end() || iyz == cross.end()) continue;
        int vxy = ixy->second, vxz = ixz->second, vyz = iyz->second;
        int sx = segment(x, vxy, vxz);  // along strand x
        int sy = segment(y, vxy, vyz);
        int sz = segment(z, vxz, vyz);
        if (sx == 0 || sy == 0 || sz == 0) return false;
        // corner in/out degrees must be 1 each for a directed 3-cycle
        std::map<int, int> outdeg;
        outdeg[sx == 1 ? vxy : vxz] += 1;
        outdeg[sy == 1 ? vxy : vyz] += 1;
        outdeg[sz == 1 ? vxz : vyz] += 1;
        for (const auto& [v, deg] : outdeg)
          if (deg != 1) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// Faces and moves
// ---------------------------------------------------------------------------

/// Internal faces (counterclockwise dart lists) of a configuration: faces of
/// the closed-up map avoiding boundary vertices and virtual arcs.
inline std::vector<std::vector<std::pair<int, int>>> internal_faces(
    const SixVertexConfig& d) {
  const int n = d.nb, ne = d.num_edges();
  const int nvirt = n > 1 ? n : 0;
  std::vector<std::vector<int>> erot(d.num_vertices());
  for (int v = 0; v < d.num_vertices(); ++v) {
    erot[v] = d.rot[v];
    if (d.is_boundary(v) && nvirt) {
      std::vector<int> full;
      full.push_back(ne + (v - 1 + n) % n);
      for (int e : erot[v]) full.push_back(e);
      full.push_back(ne + v);
      erot[v] = full;
    }
  }
  auto ends = [&](int e) -> std::pair<int, int> {
    if (e < ne) return {d.edge_ends[e][0], d.edge_ends[e][1]};
    return {e - ne, (e - ne + 1) % n};
  };
  auto traced = detail::trace_faces(erot, ne + nvirt, ends);
  if (!traced.error.empty()) throw ValidationError(traced.error);
  std::vector<std::vector<std::pair<int, int>>> out;
  for (auto& f : traced.faces) {
    bool internal = true;
    for (auto& [e, dir] : f) {
      if (e >= ne) internal = false;
      for (int v : d.edge_ends[e])
        if (d.is_boundary(v)) internal = false;
    }
    if (internal) out.push_back(std::move(f));
  }
  return out;
}

struct SixVertexMove {
  enum Kind { YangBaxter, ASM } kind;
  std::vector<int> face_edges;  ///< edges of the move face, in ccw face order
};

/// A square face supports an ASM move when its edge directions alternate
/// along the face boundary; a triangle face supports a Yang-Baxter move when
/// it is cyclically oriented.
inline std::vector<SixVertexMove> six_vertex_moves(const SixVertexConfig& d) {
  std::vector<SixVertexMove> out;
  for (const auto& f : internal_faces(d)) {
    if (f.size() == 3) {
      // cyclically oriented: every face dart aligned the same way
      int a = 0;
      for (auto& [e, dir] : f) a += dir == 0 ? 1 : -1;
      if (std::abs(a) == 3) {
        SixVertexMove m{SixVertexMove::YangBaxter, {}};
        for (auto& [e, dir] : f) m.face_edges.push_back(e);
        out.push_back(std::move(m));
      }
    } else if (f.size() == 4) {
      bool alt = true;
      for (int k = 0; k < 4; ++k)
        if ((f[k].second == 0) == (f[(k + 1) % 4].second == 0)) alt = false;
      if (alt) {
        SixVertexMove m{SixVertexMove::ASM, {}};
        for (auto& [e, dir] : f) m.face_edges.push_back(e);
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

/// ASM move: reverse the four edges of an alternating square face.
inline SixVertexConfig apply_asm_move(const SixVertexConfig& d,
                                      const std::vector<int>& face_edges) {
  if (face_edges.size() != 4) throw ValidationError("ASM move needs a square face");
  SixVertexConfig out = d;
  for (int e : face_edges) std::swap(out.edge_ends[e][0], out.edge_ends[e][1]);
  validate_six_vertex(out);
  return out;
}

/// Yang-Baxter move on a cyclically oriented triangle face (when `directed`);
/// with `directed = false` the same flip applies to matching diagrams,
/// ignoring orientations.  The triangle edges keep their vertex pairs but
/// reverse direction; each outer leg slides to the neighboring corner.
inline SixVertexConfig apply_yang_baxter(const SixVertexConfig& d,
                                         const std::vector<int>& face_edges,
                                         bool directed = true) {
  if (face_edges.size() != 3)
    throw ValidationError("Yang-Baxter move needs a triangle face");
  // recover the ccw corner sequence v0, v1, v2 (corner i joins face edges
  // to v_{i-1} and v_{i+1}); t[i] = triangle edge {v_i, v_{i+1}}
  std::array<int, 3> t{}, v{};
  {
    const int e0 = face_edges[0], e1 = face_edges[1], e2 = face_edges[2];
    // shared endpoints give the corners: v1 = e0 n e1, v2 = e1 n e2, v0 = e2 n e0
    auto shared = [&](int a, int b) {
      for (int x : d.edge_ends[a])
        for (int y : d.edge_ends[b])
          if (x == y) return x;
      throw ValidationError("face edges do not share a corner");
    };
    v[1] = shared(e0, e1);
    v[2] = shared(e1, e2);
    v[0] = shared(e2, e0);
    t[0] = e0;  // {v0, v1}
    t[1] = e1;  // {v1, v2}
    t[2] = e2;  // {v2, v0}
  }
  for (int i = 0; i < 3; ++i)
    if (d.is_boundary(v[i]))
      throw ValidationError("Yang-Baxter corners must be internal");
  // outer legs at corner i: with a_i (edge to v_{i-1}) at slot p, the face
  // trace (interior on the left) puts b_i at p-1, o1 at p+1, o2 at p+2
  std::array<int, 3> o1{}, o2{};
  for (int i = 0; i < 3; ++i) {
    int a = t[(i + 2) % 3];  // edge {v_{i-1}, v_i}
    int p = d.slot_of(v[i], a);
    o1[i] = d.rot[v[i]][(p + 1) % 4];
    o2[i] = d.rot[v[i]][(p + 2) % 4];
    if (d.rot[v[i]][(p + 3) % 4] != t[i])
      throw ValidationError("face edges inconsistent with rotations");
  }
  SixVertexConfig out = d;
  // legs slide: o1_i moves from v_i to v_{i+1}; o2_i from v_i to v_{i-1}
  auto move_end = [&](int e, int from, int to) {
    if (out.edge_ends[e][0] == from)
      out.edge_ends[e][0] = to;
    else
      out.edge_ends[e][1] = to;
  };
  for (int i = 0; i < 3; ++i) {
    move_end(o1[i], v[i], v[(i + 1) % 3]);
    move_end(o2[i], v[i], v[(i + 2) % 3]);
  }
  // triangle edges keep endpoints but reverse direction
  if (directed)
    for (int i = 0; i < 3; ++i)
      std::swap(out.edge_ends[t[i]][0], out.edge_ends[t[i]][1]);
  // new rotations: rot(v_i) = [t(i,i+1), t(i,i-1), o2_{i+1}, o1_{i-1}]
  for (int i = 0; i < 3; ++i)
    out.rot[v[i]] = {t[i], t[(i + 2) % 3], o2[(i + 1) % 3], o1[(i + 2) % 3]};
  validate_six_vertex(out, directed);
  return out;
}

// ---------------------------------------------------------------------------
// Matching diagrams
// ---------------------------------------------------------------------------

struct MatchingDiagram {
  SixVertexConfig graph;      ///< orientations are meaningless
  std::vector<int> matching;  ///< boundary involution (0-based)
};

/// The canonical matching diagram with the abc-property: for any pairwise
/// crossing strands a < b < c (named by smaller endpoint), b and c cross
/// outside a.  Built by the vertical-horizontal-vertical drawing recipe on
/// the unrolled boundary.  Rejects matchings that would need a 4-crossing.
inline MatchingDiagram canonical_matching_diagram(const std::vector<int>& m) {
  const int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i)
    if (m[i] < 0 || m[i] >= n || m[m[i]] != i || m[i] == i)
      throw ValidationError("not a perfect matching");
  std::vector<int> starts;
  for (int i = 0; i < n; ++i)
    if (i < m[i]) starts.push_back(i);
  auto crossing = [&](int i, int j) {  // strands named by smaller endpoint
    if (i > j) std::swap(i, j);
    return i < j && j < m[i] && m[i] < m[j];
  };
  // reject 4-crossings
  const int ns = static_cast<int>(starts.size());
  for (int a = 0; a < ns; ++a)
    for (int b = a + 1; b < ns; ++b)
      for (int c = b + 1; c < ns; ++c)
        for (int e = c + 1; e < ns; ++e) {
          std::array<int, 4> q{starts[a], starts[b], starts[c], starts[e]};
          bool all = true;
          for (int x = 0; x < 4; ++x)
            for (int y = x + 1; y < 4; ++y)
              if (!crossing(q[x], q[y])) all = false;
          if (all)
            throw ValidationError("matching requires a 4-crossing");
        }
  // heights: crossing pairs i<j need h_i < h_j; nested pairs need h_i > h_j
  std::map<int, int> height;
  {
    std::vector<std::vector<int>> adj(ns);  // topological order constraints
    std::vector<int> indeg(ns, 0);
    std::map<int, int> idx;
    for (int k = 0; k < ns; ++k) idx[starts[k]] = k;
    for (int x = 0; x < ns; ++x)
      for (int y = x + 1; y < ns; ++y) {
        int i = starts[x], j = starts[y];
        if (crossing(i, j)) {
          adj[x].push_back(y);  // h_i < h_j
          ++indeg[y];
        } else if (i < j && m[j] < m[i]) {
          adj[y].push_back(x);  // nested: h_j < h_i
          ++indeg[x];
        }
      }
    std::vector<int> order;
    std::vector<int> q;
    for (int k = 0; k < ns; ++k)
      if (!indeg[k]) q.push_back(k);
    while (!q.empty()) {
      std::sort(q.begin(), q.end());
      int k = q.front();
      q.erase(q.begin());
      order.push_back(k);
      for (int w : adj[k])
        if (--indeg[w] == 0) q.push_back(w);
    }
    if (static_cast<int>(order.size()) != ns)
      throw ValidationError("matching heights are not realizable");
    for (int h = 0; h < ns; ++h) height[starts[order[h]]] = h + 1;
  }
  // crossings: strands i < j crossing meet where the vertical of the
  // higher-start strand j (x = j) meets the horizontal of i (y = h_i)
  MatchingDiagram md;
  md.matching = m;
  SixVertexConfig& d = md.graph;
  d.nb = n;
  d.rot.resize(n);
  std::map<std::pair<int, int>, int> vid;  // crossing (i, j), i<j -> vertex
  for (int i : starts)
    for (int j : starts)
      if (i < j && crossing(i, j)) {
        vid[{i, j}] = d.num_vertices();
        d.rot.push_back({});
      }
  // assemble each strand's path: up the initial vertical (crossings with
  // lower strands by height), then along the horizontal (crossings with
  // higher strands by x), then down to the far endpoint
  std::map<int, std::vector<std::pair<int, int>>> path;  // start -> (vertex, axis)
  for (int i : starts) {
    std::vector<std::pair<int, int>> p;
    std::vector<int> below;  // strands j < i crossing i, by height
    for (int j : starts)
      if (j < i && crossing(j, i)) below.push_back(j);
    std::sort(below.begin(), below.end(),
              [&](int a, int b) { return height[a] < height[b]; });
    for (int j : below) p.push_back({vid.at({j, i}), 0});  // vertical section
    std::vector<int> above;  // strands j > i crossing i, by x coordinate
    for (int j : starts)
      if (j > i && crossing(i, j)) above.push_back(j);
    std::sort(above.begin(), above.end());
    for (int j : above) p.push_back({vid.at({i, j}), 1});  // horizontal section
    path[i] = p;
  }
  // edges along each strand; rotations by drawing geometry.  The drawing has
  // the interior above the unrolled boundary, which mirrors the disk, so the
  // stored (counterclockwise) rotation lists the drawing directions in
  // clockwise order: right, down, left, up.
  // slot roles per crossing: 0:right 1:down 2:left 3:up
  std::vector<std::array<int, 4>> slot_edge(d.num_vertices(),
                                            {-1, -1, -1, -1});
  auto add_edge = [&](int u, int v) {
    d.edge_ends.push_back({u, v});
    return d.num_edges() - 1;
  };
  for (int i : starts) {
    const auto& p = path[i];
    int prev = i;       // previous node (boundary or vertex id)
    int prev_out = -1;  // slot role at prev for the next edge
    // leaving b_i upward; at a vertical crossing the strand occupies
    // down(1)/up(3); at a horizontal crossing left(2)/right(0)
    for (std::size_t k = 0; k <= p.size(); ++k) {
      int cur = k < p.size() ? p[k].first : m[i];
      int e;
      if (prev == i && k == 0)
        e = add_edge(i, cur);
      else if (k == p.size())
        e = add_edge(prev, m[i]);
      else
        e = add_edge(prev, cur);
      if (prev_out >= 0) slot_edge[prev][prev_out] = e;
      if (k < p.size()) {
        if (p[k].second == 0) {  // strand vertical here: enters from below
          slot_edge[cur][1] = e;
          prev_out = 3;
        } else {  // horizontal: enters from the left... or right?
          // the horizontal section runs left to right (crossings by
          // increasing x), so the strand enters each horizontal crossing
          // from the left
          slot_edge[cur][2] = e;
          prev_out = 0;
        }
        prev = cur;
      }
    }
  }
  // boundary rotations: each boundary vertex has exactly one incident edge
  for (int b = 0; b < n; ++b) d.rot[b].clear();
  for (int e = 0; e < d.num_edges(); ++e)
    for (int v : d.edge_ends[e])
      if (v < n) d.rot[v].push_back(e);
  // vertex rotations: ccw convention = drawing-clockwise = right, down, left, up
  for (int u = n; u < d.num_vertices(); ++u) {
    for (int s : slot_edge[u])
      if (s < 0) throw ValidationError("crossing with missing edge");
    d.rot[u] = {slot_edge[u][0], slot_edge[u][1], slot_edge[u][2],
                slot_edge[u][3]};
  }
  validate_six_vertex(d, /*directed=*/false);
  return md;
}

/// abc-property check: for every pairwise-crossing triple a < b < c, the
/// crossing of b and c lies outside strand a (used to pin the canonical
/// diagram construction in tests).
inline bool has_abc_property(const MatchingDiagram& md) {
  const SixVertexConfig& d = md.graph;
  const int n = d.nb;
  std::map<int, SixVertexStrand> strand;
  for (int i = 0; i < n; ++i)
    if (i < md.matching[i]) strand[i] = six_vertex_trip2(d, i);
  std::map<int, std::set<int>> verts;
  for (auto& [i, s] : strand) verts[i] = {s.vertices.begin(), s.vertices.end()};
  auto cross_vertex = [&](int i, int j) -> int {
    for (int v : strand.at(i).vertices)
      if (verts.at(j).count(v)) return v;
    return -1;
  };
  std::vector<int> starts;
  for (auto& [i, s] : strand) starts.push_back(i);
  for (std::size_t x = 0; x < starts.size(); ++x)
    for (std::size_t y = x + 1; y < starts.size(); ++y)
      for (std::size_t z = y + 1; z < starts.size(); ++z) {
        int a = starts[x], b = starts[y], c = starts[z];
        int vab = cross_vertex(a, b), vac = cross_vertex(a, c),
            vbc = cross_vertex(b, c);
        if (vab < 0 || vac < 0 || vbc < 0) continue;
        // inside of strand a = the side of the disk containing boundary
        // vertices a+1..m(a)-1.  b and c each cross a exactly once, so vbc
        // is inside iff b's walk from its endpoint inside reaches vbc
        // before vab.
        int bstart = (a < b && b < md.matching[a]) ? b : md.matching[b];
        // bstart is b's endpoint inside strand a
        const SixVertexStrand& sb = strand.at(b);
        std::vector<int> seq = sb.vertices;
        if (sb.start != bstart) std::reverse(seq.begin(), seq.end());
        bool inside = false;
        for (int v : seq) {
          if (v == vbc) {
            inside = true;
            break;
          }
          if (v == vab) break;
        }
        if (inside) return false;
      }
  return true;
}

/// Canonical key for configurations and matching diagrams: deterministic
/// traversal from the labeled boundary; orientations included when directed.
inline std::string six_vertex_key(const SixVertexConfig& d,
                                  bool directed = true) {
  const int nv = d.num_vertices();
  std::vector<int> order(nv, -1), anchor(nv, 0);
  int next = 0;
  std::vector<int> queue;
  for (int b = 0; b < d.nb; ++b) {
    order[b] = next++;
    queue.push_back(b);
  }
  std::size_t qi = 0;
  while (qi < queue.size()) {
    int v = queue[qi++];
    const auto& r = d.rot[v];
    for (std::size_t k = 0; k < r.size(); ++k) {
      int e = r[(anchor[v] + k) % r.size()];
      int w = d.other(e, v);
      if (order[w] == -1) {
        order[w] = next++;
        anchor[w] = d.slot_of(w, e);
        queue.push_back(w);
      }
    }
  }
  std::string key = "n" + std::to_string(d.nb) + ";";
  std::vector<int> byorder;
  for (int v = 0; v < nv; ++v)
    if (order[v] != -1) byorder.push_back(v);
  std::sort(byorder.begin(), byorder.end(),
            [&](int a, int b) { return order[a] < order[b]; });
  for (int v : byorder) {
    const auto& r = d.rot[v];
    for (std::size_t k = 0; k < r.size(); ++k) {
      int e = r[(anchor[v] + k) % r.size()];
      key += std::to_string(order[d.other(e, v)]);
      if (directed) key += d.out_at(e, v) > 0 ? ">" : "<";
      key += " ";
    }
    key += ";";
  }
  return key;
}

/// ASM matrix export on grid domains: sinks become 1, sources -1,
/// transmitting vertices 0.  Vertices are reported in row-major order given
/// a per-row count; requires an N x N arrangement discovered by walking
/// trip_2-strands from the left boundary edge of each row.
inline std::vector<std::vector<int>> asm_matrix(const SixVertexConfig& d,
                                                int rows,
                                                const std::vector<int>& left_boundary) {
  std::vector<std::vector<int>> mat;
  for (int r = 0; r < rows; ++r) {
    SixVertexStrand s = six_vertex_trip2(d, left_boundary.at(r));
    std::vector<int> row;
    for (int v : s.vertices) {
      switch (vertex_kind(d, v)) {
        case VertexKind::Sink: row.push_back(1); break;
        case VertexKind::Source: row.push_back(-1); break;
        case VertexKind::Transmit: row.push_back(0); break;
        default: throw ValidationError("invalid vertex in grid");
      }
    }
    mat.push_back(row);
  }
  return mat;
}

}  // namespace hourglass
