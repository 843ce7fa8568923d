/**
 * @brief Moves on hourglass plabic graphs: benzene, square, and contraction
 *        moves, move-equivalence classes, and top elements.
 *
 * Benzene moves toggle which alternating triple of edges of a hexagonal face
 * carries 2-hourglasses.  Square moves are realized through the six-vertex
 * correspondence as ASM plaquette flips.  Contraction moves collapse the
 * pattern x -a- v -(4-a)- v' -a- y to x -a- y (internal v, v'); repeated
 * application yields the contracted normal form explored by move_class.
 * Every application is guarded by a trip-preservation assertion.
 */
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hourglass/graph.hpp"
#include "hourglass/sixvertex.hpp"

namespace hourglass {

// ---------------------------------------------------------------------------
// Internal faces of an hourglass graph (edge-level darts)
// ---------------------------------------------------------------------------

inline std::vector<std::vector<std::pair<int, int>>> internal_faces_graph(
    const Graph& g) {
  const int n = g.nb, ne = g.num_edges();
  const int nvirt = n > 1 ? n : 0;
  std::vector<std::vector<int>> erot(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    erot[v] = detail::edge_rotation(g, v);
    if (g.is_boundary(v) && nvirt) {
      std::vector<int> full;
      full.push_back(ne + (v - 1 + n) % n);
      for (int e : erot[v]) full.push_back(e);
      full.push_back(ne + v);
      erot[v] = full;
    }
  }
  auto ends = [&](int e) -> std::pair<int, int> {
    if (e < ne) return {g.edges[e].u, g.edges[e].v};
    return {e - ne, (e - ne + 1) % n};
  };
  auto traced = detail::trace_faces(erot, ne + nvirt, ends);
  if (!traced.error.empty()) throw ValidationError(traced.error);
  std::vector<std::vector<std::pair<int, int>>> out;
  for (auto& f : traced.faces) {
    bool internal = true;
    for (auto& [e, dir] : f) {
      if (e >= ne) internal = false;
      else if (g.is_boundary(g.edges[e].u) || g.is_boundary(g.edges[e].v))
        internal = false;
    }
    if (internal) out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Move instances
// ---------------------------------------------------------------------------

struct MoveInstance {
  enum Kind { Benzene, Square, Contraction } kind;
  /// Benzene: the 6 face edge ids in ccw face order.
  /// Square: the 4 ASM face edge ids of phi(osc-image), in ccw face order.
  /// Contraction: {v, v'} the two internal vertices removed.
  std::vector<int> payload;
  bool operator==(const MoveInstance&) const = default;
};

namespace detail {

/// Distinct incident edges of an internal vertex, counterclockwise.
inline bool benzene_face_site(const Graph& g,
                              const std::vector<std::pair<int, int>>& f) {
  if (f.size() != 6) return false;
  std::set<int> verts, edges;
  for (auto& [e, dir] : f) {
    edges.insert(e);
    verts.insert(g.edges[e].u);
    verts.insert(g.edges[e].v);
  }
  if (verts.size() != 6 || edges.size() != 6) return false;
  for (int v : verts)
    if (g.is_boundary(v)) return false;
  for (int k = 0; k < 6; ++k) {
    int m0 = g.edges[f[k].first].mult, m1 = g.edges[f[(k + 1) % 6].first].mult;
    if (!((m0 == 2 && m1 == 1) || (m0 == 1 && m1 == 2))) return false;
  }
  return true;
}

}  // namespace detail

/// Guard: every move must preserve the trip permutations.
inline void assert_trips_preserved(const Graph& before, const Graph& after,
                                   const char* what) {
  if (trip_perms(before) != trip_perms(after))
    throw ValidationError(std::string("move broke trip permutations: ") + what);
}

// ---------------------------------------------------------------------------
// Benzene move
// ---------------------------------------------------------------------------

inline Graph apply_benzene(const Graph& g, const std::vector<int>& face_edges) {
  if (face_edges.size() != 6) throw ValidationError("benzene needs a hexagon");
  Graph h = g;
  std::set<int> fe(face_edges.begin(), face_edges.end());
  std::set<int> vs;
  for (int e : face_edges) {
    if (h.edges[e].mult != 1 && h.edges[e].mult != 2)
      throw ValidationError("benzene face edges must have multiplicity 1 or 2");
    h.edges[e].mult = 3 - h.edges[e].mult;
    vs.insert(h.edges[e].u);
    vs.insert(h.edges[e].v);
  }
  // rebuild slot lists at the hexagon vertices, preserving the cyclic
  // edge-level order
  for (int v : vs) {
    std::vector<int> er = detail::edge_rotation(g, v);
    std::vector<Slot> rot;
    for (int e : er)
      for (int s = h.edges[e].mult - 1; s >= 0; --s) rot.push_back({e, s});
    h.verts[v].rot = rot;
  }
  validate(h);
  assert_trips_preserved(g, h, "benzene");
  return h;
}

// ---------------------------------------------------------------------------
// Contraction moves
// ---------------------------------------------------------------------------

/// Sites: pairs (v, v') of internal vertices matching
/// x -a- v -(4-a)- v' -a- y with x != y, plus floating v =4= v' pairs (a=0).
inline std::vector<MoveInstance> contraction_sites(const Graph& g) {
  std::vector<MoveInstance> out;
  for (int v = g.nb; v < g.num_vertices(); ++v) {
    std::vector<int> ed = detail::edge_rotation(g, v);
    std::sort(ed.begin(), ed.end());
    ed.erase(std::unique(ed.begin(), ed.end()), ed.end());
    if (ed.size() == 1) {  // v =4= v' floating pair
      int vp = g.edges[ed[0]].other(v);
      if (vp > v && !g.is_boundary(vp) && g.edges[ed[0]].mult == kRank)
        out.push_back({MoveInstance::Contraction, {v, vp}});
      continue;
    }
    if (ed.size() != 2) continue;
    for (int pick = 0; pick < 2; ++pick) {
      int mid = ed[pick], f = ed[1 - pick];
      int vp = g.edges[mid].other(v);
      if (g.is_boundary(vp) || vp == g.edges[f].other(v)) continue;
      std::vector<int> ed2 = detail::edge_rotation(g, vp);
      std::sort(ed2.begin(), ed2.end());
      ed2.erase(std::unique(ed2.begin(), ed2.end()), ed2.end());
      if (ed2.size() != 2) continue;
      int h = ed2[0] == mid ? ed2[1] : ed2[0];
      if (ed2[0] != mid && ed2[1] != mid) continue;
      if (g.edges[h].mult != g.edges[f].mult) continue;
      int x = g.edges[f].other(v), y = g.edges[h].other(vp);
      if (x == y || x == vp || y == v) continue;
      if (vp > v) out.push_back({MoveInstance::Contraction, {v, vp}});
    }
  }
  return out;
}

inline Graph apply_contraction(const Graph& g, int v, int vp,
                               std::vector<int>* edge_map = nullptr) {
  auto distinct = [&](int w) {
    std::vector<int> ed = detail::edge_rotation(g, w);
    std::sort(ed.begin(), ed.end());
    ed.erase(std::unique(ed.begin(), ed.end()), ed.end());
    return ed;
  };
  std::vector<int> ev = distinct(v), evp = distinct(vp);
  std::set<int> dead_edges, dead_verts{v, vp};
  int f = -1, h = -1, y = -1;
  if (ev.size() == 1) {  // floating pair
    dead_edges.insert(ev[0]);
  } else {
    int mid = g.edges[ev[0]].other(v) == vp ? ev[0] : ev[1];
    f = mid == ev[0] ? ev[1] : ev[0];
    h = evp[0] == mid ? evp[1] : evp[0];
    y = g.edges[h].other(vp);
    dead_edges.insert(mid);
    dead_edges.insert(h);
  }
  Graph out;
  out.nb = g.nb;
  std::vector<int> vmap(g.num_vertices(), -1), emap(g.num_edges(), -1);
  for (int w = 0; w < g.num_vertices(); ++w)
    if (!dead_verts.count(w)) {
      vmap[w] = out.num_vertices();
      out.verts.push_back({g.verts[w].color, {}});
    }
  for (int e = 0; e < g.num_edges(); ++e)
    if (!dead_edges.count(e)) {
      emap[e] = out.num_edges();
      GEdge ed = g.edges[e];
      if (e == f) {  // retarget x -a- v to x -a- y
        (ed.u == v ? ed.u : ed.v) = y;
      }
      out.edges.push_back({vmap[ed.u], vmap[ed.v], ed.mult});
    }
  for (int w = 0; w < g.num_vertices(); ++w) {
    if (dead_verts.count(w)) continue;
    for (Slot s : g.verts[w].rot) {
      if (w == y && s.edge == h) s.edge = f;  // h block becomes the f block
      out.verts[vmap[w]].rot.push_back({emap[s.edge], s.strand});
    }
  }
  if (edge_map) {
    // old edge -> surviving edge: the vanished h block is carried by f, the
    // vanished middle hourglass by nothing
    *edge_map = emap;
    if (h >= 0) (*edge_map)[h] = emap[f];
  }
  validate(out);
  assert_trips_preserved(g, out, "contraction");
  return out;
}

/// Inserts an opposite pair in the middle of edge e:
/// u -a- w  becomes  u -a- v -(4-a)- v' -a- w (inverse of contraction).
inline Graph uncontract_edge(const Graph& g, int e) {
  const GEdge ed = g.edges[e];
  const int a = ed.mult;
  if (a < 1 || a > kRank - 1)
    throw ValidationError("un-contraction needs multiplicity 1..3");
  Graph h = g;
  int v = h.num_vertices(), vp = v + 1;
  h.verts.push_back({-h.verts[ed.u].color, {}});
  h.verts.push_back({-h.verts[ed.v].color, {}});
  int emid = h.num_edges();
  h.edges.push_back({v, vp, kRank - a});
  int e2 = h.num_edges();
  h.edges.push_back({vp, ed.v, a});
  h.edges[e] = {ed.u, v, a};  // e now runs u -- v
  for (int k = a - 1; k >= 0; --k) h.verts[v].rot.push_back({e, k});
  for (int k = kRank - a - 1; k >= 0; --k) h.verts[v].rot.push_back({emid, k});
  for (int k = kRank - a - 1; k >= 0; --k) h.verts[vp].rot.push_back({emid, k});
  for (int k = a - 1; k >= 0; --k) h.verts[vp].rot.push_back({e2, k});
  for (Slot& s : h.verts[ed.v].rot)
    if (s.edge == e) s.edge = e2;
  validate(h);
  assert_trips_preserved(g, h, "un-contraction");
  return h;
}

/// Contracted normal form: applies contraction moves until none remain.
/// When `edge_map` is given, it receives old edge -> surviving edge
/// (-1 for edges erased together with their vertex pair).
inline Graph contract(const Graph& g, std::vector<int>* edge_map = nullptr) {
  Graph cur = g;
  std::vector<int> acc(g.num_edges());
  std::iota(acc.begin(), acc.end(), 0);
  std::size_t guard = 0;
  while (true) {
    auto sites = contraction_sites(cur);
    if (sites.empty()) break;
    std::vector<int> step;
    cur = apply_contraction(cur, sites[0].payload[0], sites[0].payload[1],
                            edge_map ? &step : nullptr);
    if (edge_map)
      for (int& e : acc) e = e >= 0 ? step[e] : -1;
    if (++guard > max_search_nodes())
      throw ResourceError("contraction did not terminate");
  }
  if (edge_map) *edge_map = acc;
  return cur;
}

inline bool is_contracted(const Graph& g) {
  return contraction_sites(g).empty();
}

// ---------------------------------------------------------------------------
// Square moves (through the six-vertex correspondence)
// ---------------------------------------------------------------------------

namespace detail {

/// Merges the claws of an oscillating-type graph back into boundary
/// hourglasses according to the requested type (inverse of oscillize_graph
/// for graphs without boundary-boundary edges).
inline Graph de_oscillize(const Graph& g, const std::vector<int>& type,
                          std::vector<int>* fine_edge_map = nullptr) {
  Graph out;
  out.nb = static_cast<int>(type.size());
  std::vector<int> group(g.nb, -1);   // osc boundary -> coarse boundary
  std::vector<int> prefix(out.nb, 0); // first osc index of each coarse vertex
  {
    int pos = 0;
    for (int b = 0; b < out.nb; ++b) {
      prefix[b] = pos;
      for (int k = 0; k < std::abs(type[b]); ++k) group[pos++] = b;
    }
    if (pos != g.nb) throw ValidationError("type does not match boundary");
  }
  for (int b = 0; b < out.nb; ++b)
    out.verts.push_back({type[b] > 0 ? 1 : -1, {}});
  std::vector<int> vmap(g.num_vertices(), -1);
  for (int v = g.nb; v < g.num_vertices(); ++v) {
    vmap[v] = out.num_vertices();
    out.verts.push_back({g.verts[v].color, {}});
  }
  // one merged edge per coarse boundary vertex; internal edges copied
  std::vector<int> emap(g.num_edges(), -1);
  std::vector<int> merged_edge(out.nb, -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    const GEdge& ed = g.edges[e];
    int b = g.is_boundary(ed.u) ? ed.u : (g.is_boundary(ed.v) ? ed.v : -1);
    if (b < 0) {
      emap[e] = out.num_edges();
      out.edges.push_back({vmap[ed.u], vmap[ed.v], ed.mult});
      continue;
    }
    if (ed.mult != 1)
      throw ValidationError("de-oscillization expects simple claw edges");
    const int cb = group[b];
    const int ob = ed.other(b);
    if (g.is_boundary(ob)) {
      // boundary-boundary strand: the whole coarse groups on both sides must
      // merge into a single hourglass between the two coarse vertices
      const int cb2 = group[ob];
      if (cb == cb2)
        throw ValidationError("boundary strand within one coarse vertex");
      if (merged_edge[cb] == -1 && merged_edge[cb2] == -1) {
        merged_edge[cb] = merged_edge[cb2] = out.num_edges();
        out.edges.push_back({cb, cb2, std::abs(type[cb])});
      } else if (merged_edge[cb] == -1 || merged_edge[cb] != merged_edge[cb2]) {
        throw ValidationError("claw edges no longer share an endpoint");
      }
      emap[e] = merged_edge[cb];
      continue;
    }
    if (merged_edge[cb] == -1) {
      merged_edge[cb] = out.num_edges();
      out.edges.push_back({cb, vmap[ob], std::abs(type[cb])});
    } else if (out.edges[merged_edge[cb]].u != cb ||
               out.edges[merged_edge[cb]].v != vmap[ob]) {
      throw ValidationError("claw edges no longer share an internal vertex");
    }
    emap[e] = merged_edge[cb];
  }
  for (int cb = 0; cb < out.nb; ++cb) {
    const int d = std::abs(type[cb]);
    for (int k = d - 1; k >= 0; --k)
      out.verts[cb].rot.push_back({merged_edge[cb], k});
  }
  if (fine_edge_map) *fine_edge_map = emap;
  for (int v = g.nb; v < g.num_vertices(); ++v) {
    for (const Slot& s : g.verts[v].rot) {
      const GEdge& ed = g.edges[s.edge];
      int b = g.is_boundary(ed.u) ? ed.u : (g.is_boundary(ed.v) ? ed.v : -1);
      if (b < 0) {
        out.verts[vmap[v]].rot.push_back({emap[s.edge], s.strand});
      } else {
        // claw edge to fine boundary vertex b carries strand b - prefix
        out.verts[vmap[v]].rot.push_back({emap[s.edge], b - prefix[group[b]]});
      }
    }
  }
  validate(out);
  return out;
}

}  // namespace detail

/// Whether the square-move machinery applies: contracted, no
/// boundary-boundary edges, and phi applicable after oscillization.
inline std::optional<SixVertexConfig> try_phi_osc(const Graph& g) {
  for (const GEdge& e : g.edges)
    if (g.is_boundary(e.u) && g.is_boundary(e.v)) return std::nullopt;
  try {
    return phi(is_oscillating_type(g) ? g : oscillize_graph(g));
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

inline Graph apply_square(const Graph& g, const std::vector<int>& asm_edges) {
  auto d = try_phi_osc(g);
  if (!d) throw ValidationError("square move unavailable for this graph");
  SixVertexConfig after = apply_asm_move(*d, asm_edges);
  Graph h = phi_inverse(after);
  if (!is_oscillating_type(g)) h = detail::de_oscillize(h, graph_type(g));
  validate(h);
  assert_trips_preserved(g, h, "square");
  return h;
}

// ---------------------------------------------------------------------------
// find_moves / apply_move
// ---------------------------------------------------------------------------

inline std::vector<MoveInstance> find_moves(const Graph& g,
                                            bool include_contractions = true) {
  std::vector<MoveInstance> out;
  for (const auto& f : internal_faces_graph(g))
    if (detail::benzene_face_site(g, f)) {
      MoveInstance m{MoveInstance::Benzene, {}};
      for (auto& [e, dir] : f) m.payload.push_back(e);
      out.push_back(std::move(m));
    }
  if (auto d = try_phi_osc(g)) {
    for (const SixVertexMove& m : six_vertex_moves(*d))
      if (m.kind == SixVertexMove::ASM)
        out.push_back({MoveInstance::Square, m.face_edges});
  }
  if (include_contractions)
    for (MoveInstance& m : contraction_sites(g)) out.push_back(std::move(m));
  return out;
}

inline Graph apply_move(const Graph& g, const MoveInstance& m) {
  switch (m.kind) {
    case MoveInstance::Benzene: return apply_benzene(g, m.payload);
    case MoveInstance::Square: return apply_square(g, m.payload);
    case MoveInstance::Contraction:
      return apply_contraction(g, m.payload[0], m.payload[1]);
  }
  throw ValidationError("unknown move");
}

// ---------------------------------------------------------------------------
// Move-equivalence classes
// ---------------------------------------------------------------------------

/// BFS over contracted graphs under benzene and square moves; members are
/// returned sorted by canonical key.  Throws ResourceError past the
/// HOURGLASS_MAX_NODES cap.
inline std::vector<Graph> move_class(const Graph& g) {
  Graph start = contract(g);
  std::map<std::string, Graph> seen;
  seen[canonical_key(start)] = start;
  std::vector<Graph> frontier{start};
  const std::size_t cap = max_search_nodes();
  while (!frontier.empty()) {
    Graph cur = std::move(frontier.back());
    frontier.pop_back();
    for (const MoveInstance& m : find_moves(cur, /*include_contractions=*/false)) {
      Graph nxt = apply_move(cur, m);
      std::string key = canonical_key(nxt);
      if (!seen.count(key)) {
        if (seen.size() >= cap)
          throw ResourceError("move class exceeded node cap");
        seen.emplace(key, nxt);
        frontier.push_back(std::move(nxt));
      }
    }
  }
  std::vector<Graph> out;
  for (auto& [k, gr] : seen) out.push_back(std::move(gr));
  return out;
}

// ---------------------------------------------------------------------------
// Top elements
// ---------------------------------------------------------------------------

/// A benzene face is clockwise when, reading each hourglass in clockwise
/// order around the face, the white vertex precedes the black one.
inline bool is_clockwise_benzene_face(const Graph& g,
                                      const std::vector<std::pair<int, int>>& f) {
  int verdict = 0;
  for (auto& [e, dir] : f) {
    if (g.edges[e].mult != 2) continue;
    // ccw tail -> head; clockwise traversal visits the head first
    int head = dir == 0 ? g.edges[e].v : g.edges[e].u;
    int this_verdict = g.verts[head].color == -1 ? 1 : -1;
    if (verdict == 0) verdict = this_verdict;
    if (verdict != this_verdict)
      throw ValidationError("inconsistent benzene face orientation");
  }
  return verdict == 1;
}

/// Applies benzene moves at clockwise faces until none remain; the result is
/// independent of the order of application.
inline Graph top_element(const Graph& g) {
  Graph cur = contract(g);
  std::size_t guard = 0;
  const std::size_t cap = max_search_nodes();
  while (true) {
    bool applied = false;
    for (const auto& f : internal_faces_graph(cur)) {
      if (!detail::benzene_face_site(cur, f)) continue;
      if (!is_clockwise_benzene_face(cur, f)) continue;
      std::vector<int> edges;
      for (auto& [e, dir] : f) edges.push_back(e);
      cur = apply_benzene(cur, edges);
      applied = true;
      break;
    }
    if (!applied) return cur;
    if (++guard > cap) throw ResourceError("top element ascent exceeded cap");
  }
}

}  // namespace hourglass
