/**
 * @brief Proper labelings, the separation labeling, and the map from
 *        hourglass plabic graphs back to fluctuating tableaux.
 *
 * A proper labeling assigns each edge a subset of {1,2,3,4} of size equal to
 * its multiplicity such that the labels around every internal vertex
 * partition {1,2,3,4}.  The separation labeling labels a simple edge e by
 * {a+1} where a counts the trip strands through e (black to white) that
 * separate the face right of e from the base face; hourglasses receive the
 * complement of their neighbors' labels.  Its boundary word is the
 * separation word, recovering the tableau the graph grew from.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "hourglass/graph.hpp"
#include "hourglass/tableaux.hpp"

namespace hourglass {

/// Edge labels as bitmasks over {1,2,3,4} (bit k-1 = letter k).
struct ProperLabeling {
  std::vector<int> mask;  ///< indexed by edge id
  bool operator==(const ProperLabeling&) const = default;
};

inline constexpr int kFullMask = (1 << kRank) - 1;

// ---------------------------------------------------------------------------
// Proper labeling enumeration
// ---------------------------------------------------------------------------

/// Visits every proper labeling in deterministic (mask-lexicographic) order.
inline void visit_proper_labelings(
    const Graph& g, const std::function<bool(const ProperLabeling&)>& fn) {
  const int ne = g.num_edges();
  ProperLabeling lab;
  lab.mask.assign(ne, 0);
  std::vector<int> used(g.num_vertices(), 0);  // bits taken at internal verts
  std::function<bool(int)> go = [&](int e) -> bool {
    if (e == ne) return fn(lab);
    const GEdge& ed = g.edges[e];
    for (int m = 0; m <= kFullMask; ++m) {
      if (std::popcount(static_cast<unsigned>(m)) != ed.mult) continue;
      bool ok = true;
      for (int w : {ed.u, ed.v})
        if (!g.is_boundary(w) && (used[w] & m)) ok = false;
      if (!ok) continue;
      lab.mask[e] = m;
      for (int w : {ed.u, ed.v})
        if (!g.is_boundary(w)) used[w] |= m;
      bool cont = go(e + 1);
      for (int w : {ed.u, ed.v})
        if (!g.is_boundary(w)) used[w] &= ~m;
      if (!cont) return false;
    }
    lab.mask[e] = 0;
    return true;
  };
  go(0);
}

inline std::vector<ProperLabeling> enumerate_proper_labelings(const Graph& g) {
  std::vector<ProperLabeling> out;
  visit_proper_labelings(g, [&](const ProperLabeling& l) {
    out.push_back(l);
    return true;
  });
  return out;
}

/// Boundary word of a labeling: letter i is the label of b_i's edge, signed
/// by the boundary color.
inline Word labeling_boundary_word(const Graph& g, const ProperLabeling& lab) {
  Word w;
  for (int b = 0; b < g.nb; ++b) {
    int e = g.verts[b].rot.at(0).edge;
    w.push_back(Letter{static_cast<std::uint8_t>(lab.mask[e]),
                       g.verts[b].color == -1});
  }
  return w;
}

// ---------------------------------------------------------------------------
// Face/strand context for separation labels and tags
// ---------------------------------------------------------------------------

namespace detail {

/// Planar context of the oscillization of a graph: faces, the base face,
/// per-dart trip-strand ids, and for every face the parity of crossings with
/// each strand along a dual path from the base face.  A strand separates two
/// faces exactly when the crossing parity between them is odd.
struct SepContext {
  Graph osc;
  std::vector<std::vector<int>> edge_map;  // orig edge -> osc edges
  int vshift = 0;                          // orig internal v -> osc v + shift
  std::vector<std::vector<std::pair<int, int>>> faces;
  std::vector<int> face_of;                          // dart 2e+dir -> face
  std::vector<std::array<int, kRank - 1>> dart_strand;  // dart -> strand ids
  std::vector<std::vector<std::uint64_t>> parity;    // [face][strand bits]
  int words = 0;

  int osc_vertex(const Graph& g, int v) const {
    return g.is_boundary(v) ? -1 : osc.nb + (v - g.nb);
  }
  int dart(int e, int dir) const { return 2 * e + dir; }
  int dart_away(int e, int v) const {
    return dart(e, osc.edges[e].u == v ? 0 : 1);
  }
  bool separates(int face, int strand) const {
    return (parity[face][strand >> 6] >> (strand & 63)) & 1;
  }
};

inline SepContext make_sep_context(const Graph& g) {
  SepContext c;
  if (is_oscillating_type(g)) {
    c.osc = g;
    c.edge_map.resize(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) c.edge_map[e] = {e};
  } else {
    c.osc = oscillize_graph(g, &c.edge_map);
  }
  const Graph& o = c.osc;
  const int n = o.nb, ne = o.num_edges();

  // face tracing with virtual boundary arcs
  std::vector<std::vector<int>> erot(o.num_vertices());
  for (int v = 0; v < o.num_vertices(); ++v) {
    erot[v] = edge_rotation(o, v);
    if (o.is_boundary(v)) {
      std::vector<int> full;
      full.push_back(ne + (v - 1 + n) % n);
      for (int e : erot[v]) full.push_back(e);
      full.push_back(ne + v);
      erot[v] = full;
    }
  }
  auto ends = [&](int e) -> std::pair<int, int> {
    if (e < ne) return {o.edges[e].u, o.edges[e].v};
    return {e - ne, (e - ne + 1) % n};
  };
  auto traced = trace_faces(erot, ne + n, ends);
  if (!traced.error.empty()) throw ValidationError(traced.error);
  c.faces = std::move(traced.faces);
  c.face_of.assign(2 * (ne + n), -1);
  for (int f = 0; f < static_cast<int>(c.faces.size()); ++f)
    for (auto& [e, dir] : c.faces[f]) c.face_of[2 * e + dir] = f;
  // the face inside the disk at the arc between b_n and b_1
  const int base = c.face_of[2 * (ne + n - 1) + 1];

  // trip strands: ids, per-dart direction map, per-edge crossing parities
  const int nstrands = (kRank - 1) * n;
  c.words = (nstrands + 63) / 64;
  c.dart_strand.assign(2 * ne, {-1, -1, -1});
  std::vector<std::vector<std::uint64_t>> edge_bits(
      ne, std::vector<std::uint64_t>(c.words, 0));
  for (int a = 1; a <= kRank - 1; ++a)
    for (int i = 0; i < n; ++i) {
      const int sid = (a - 1) * n + i;
      auto mark = [&](int e, int from) {
        c.dart_strand[c.dart_away(e, from)][a - 1] = sid;
        edge_bits[e][sid >> 6] ^= 1ull << (sid & 63);
      };
      StrandPath p = trip_strand(o, a, i);
      mark(o.verts[i].rot.at(0).edge, i);
      for (const StrandStep& s : p.steps)
        mark(o.verts[s.vertex].rot.at(s.exit_slot).edge, s.vertex);
    }

  // crossing parities by BFS over the dual graph from the base face
  c.parity.assign(c.faces.size(), std::vector<std::uint64_t>(c.words, 0));
  std::vector<char> seen(c.faces.size(), 0);
  std::vector<int> queue{base};
  seen[base] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int f = queue[q];
    for (auto& [e, dir] : c.faces[f]) {
      if (e >= ne) continue;
      int f2 = c.face_of[2 * e + (dir ^ 1)];
      if (seen[f2]) continue;
      seen[f2] = 1;
      for (int w = 0; w < c.words; ++w)
        c.parity[f2][w] = c.parity[f][w] ^ edge_bits[e][w];
      queue.push_back(f2);
    }
  }
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Separation labeling
// ---------------------------------------------------------------------------

inline ProperLabeling separation_labeling(const Graph& g) {
  validate(g);
  if (!is_fully_reduced(g))
    throw ValidationError("separation labeling requires a fully reduced graph");
  detail::SepContext c = detail::make_sep_context(g);
  const Graph& o = c.osc;

  std::vector<int> mask(o.num_edges(), 0);
  for (int e = 0; e < o.num_edges(); ++e) {
    if (o.edges[e].mult != 1) continue;
    int black = o.verts[o.edges[e].u].color == 1 ? o.edges[e].u : o.edges[e].v;
    int d_bw = c.dart_away(e, black);
    int right_face = c.face_of[d_bw ^ 1];
    int a = 0;
    for (int k = 0; k < kRank - 1; ++k)
      a += c.separates(right_face, c.dart_strand[d_bw][k]);
    mask[e] = 1 << a;
  }
  // hourglasses: complement of the known labels at an endpoint; resolve
  // iteratively and check both endpoints agree
  bool progress = true;
  while (progress) {
    progress = false;
    for (int e = 0; e < o.num_edges(); ++e) {
      if (o.edges[e].mult == 1 || mask[e]) continue;
      for (int v : {o.edges[e].u, o.edges[e].v}) {
        if (o.is_boundary(v)) continue;
        int others = 0;
        bool known = true;
        for (int e2 : detail::edge_rotation(o, v))
          if (e2 != e) {
            if (!mask[e2]) known = false;
            others |= mask[e2];
          }
        if (!known) continue;
        int m = kFullMask & ~others;
        if (mask[e] && mask[e] != m)
          throw ValidationError("hourglass separation labels disagree");
        mask[e] = m;
        progress = true;
      }
    }
  }
  // pull back to the original graph: unions over claw edges
  ProperLabeling lab;
  lab.mask.assign(g.num_edges(), 0);
  for (int e = 0; e < g.num_edges(); ++e)
    for (int oe : c.edge_map[e]) {
      if (!mask[oe])
        throw ValidationError("unresolved separation label");
      lab.mask[e] |= mask[oe];
    }
  // properness guard
  for (int e = 0; e < g.num_edges(); ++e)
    if (std::popcount(static_cast<unsigned>(lab.mask[e])) != g.edges[e].mult)
      throw ValidationError("separation label has wrong size");
  for (int v = g.nb; v < g.num_vertices(); ++v) {
    int all = 0, sum = 0;
    for (int e : detail::edge_rotation(g, v)) {
      all |= lab.mask[e];
      sum += g.edges[e].mult;
    }
    if (all != kFullMask || sum != kRank)
      throw ValidationError("separation labeling is not proper");
  }
  return lab;
}

/// Boundary separation labels straight from the trip permutations:
/// 1 + #{a : i not an antiexcedance of trip_a} at black boundary vertices,
/// 1 + #{a : i an antiexcedance of trip_a} at white ones, where i is an
/// antiexcedance of a permutation when it appears at a later position.
inline Word boundary_sep_from_trips(const Graph& g) {
  validate(g);
  const Graph o = is_oscillating_type(g) ? g : oscillize_graph(g);
  TripPerms t = trip_perms(o);
  const int n = o.nb;
  std::array<std::vector<char>, kRank - 1> aexc;
  for (int a = 0; a < kRank - 1; ++a) {
    aexc[a].assign(n, 0);
    std::vector<int> inv(n);
    for (int j = 0; j < n; ++j) inv[t.perm[a][j]] = j;
    for (int i = 0; i < n; ++i) aexc[a][i] = inv[i] > i;
  }
  std::vector<int> fine(n);
  for (int i = 0; i < n; ++i) {
    int cnt = 0;
    for (int a = 0; a < kRank - 1; ++a)
      cnt += o.verts[i].color == 1 ? !aexc[a][i] : aexc[a][i];
    fine[i] = cnt;  // label cnt+1, stored as bit index
  }
  // merge claw labels per original boundary vertex
  Word w;
  int pos = 0;
  for (int b = 0; b < g.nb; ++b) {
    int d = std::abs(graph_type(g)[b]);
    int m = 0;
    for (int k = 0; k < d; ++k) m |= 1 << fine[pos++];
    w.push_back(Letter{static_cast<std::uint8_t>(m), g.verts[b].color == -1});
  }
  return w;
}

/// Separation word of a graph: the boundary word of its separation labeling.
inline Word separation_word(const Graph& g) {
  return labeling_boundary_word(g, separation_labeling(g));
}

/// The map from contracted fully reduced graphs to fluctuating tableaux.
inline FluctuatingTableau tableau_of(const Graph& g) {
  return tableau_from_word(separation_word(g));
}

// ---------------------------------------------------------------------------
// Tags and coinversion numbers
// ---------------------------------------------------------------------------

/// Coinversion number of a block sequence: pairs (a, b) with a in an earlier
/// block, b in a later one, and a <= b.
inline int coinversion(const std::vector<int>& masks) {
  int count = 0;
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j)
      for (int a = 1; a <= kRank; ++a)
        for (int b = a; b <= kRank; ++b)
          if ((masks[i] >> (a - 1) & 1) && (masks[j] >> (b - 1) & 1)) ++count;
  return count;
}

/// Canonical tag placement, one gap index per internal vertex (a gap g at a
/// vertex with distinct-edge rotation er means the tag sits between er[g] and
/// er[g+1]): at a vertex with a 2-hourglass and two simple edges the tag sits
/// between the simple edges; at a vertex with four simple edges it sits in
/// the sector (cut out by the two trip_2-strands through the vertex)
/// containing the base face; at vertices with boundary 3-hourglasses or two
/// boundary 2-hourglasses it sits on the side of the base face.
inline std::vector<int> canonical_tag_gaps(const Graph& g) {
  detail::SepContext c = detail::make_sep_context(g);
  const Graph& o = c.osc;
  std::vector<int> gaps;
  for (int v = g.nb; v < g.num_vertices(); ++v) {
    std::vector<int> er = detail::edge_rotation(g, v);
    const int k = static_cast<int>(er.size());
    const int ov = c.osc_vertex(g, v);
    // corner face after the slot-level block of er[gap]
    auto corner_face = [&](int gap) {
      const auto& rot = g.verts[v].rot;
      int p = -1;
      for (int s = 0; s < static_cast<int>(rot.size()); ++s)
        if (rot[s].edge == er[gap] &&
            rot[(s + 1) % rot.size()].edge == er[(gap + 1) % k])
          p = s;
      if (p < 0) throw ValidationError("corner slot not found");
      int oe = o.verts[ov].rot.at(p).edge;
      return c.face_of[c.dart_away(oe, ov)];
    };
    auto strand_through = [&](int edge_pos) {
      // trip_2-strand leaving v through this edge (any of its slots)
      const auto& rot = g.verts[v].rot;
      for (int s = 0; s < static_cast<int>(rot.size()); ++s)
        if (rot[s].edge == er[edge_pos]) {
          int oe = o.verts[ov].rot.at(s).edge;
          return c.dart_strand[c.dart_away(oe, ov)][1];
        }
      throw ValidationError("strand slot not found");
    };
    int tag_gap = 0;
    if (k == 1) {
      tag_gap = 0;  // single boundary 4-hourglass: position irrelevant
    } else if (k == 3) {
      // tag between the two simple edges, i.e. after the edge following the
      // hourglass
      int h = 0;
      while (g.edges[er[h]].mult == 1) ++h;
      tag_gap = (h + 1) % k;
    } else if (k == 4) {
      int sA = strand_through(0), sB = strand_through(1);
      int found = -1;
      for (int gap = 0; gap < 4; ++gap) {
        int f = corner_face(gap);
        if (!c.separates(f, sA) && !c.separates(f, sB)) {
          if (found >= 0) throw ValidationError("ambiguous tag sector");
          found = gap;
        }
      }
      if (found < 0) throw ValidationError("no tag sector found");
      tag_gap = found;
    } else if (k == 2) {
      // boundary 3-hourglass + simple edge, or two boundary 2-hourglasses
      int sref;
      if (g.edges[er[0]].mult == g.edges[er[1]].mult) {
        sref = strand_through(0);
      } else {
        int simple = g.edges[er[0]].mult == 1 ? 0 : 1;
        sref = strand_through(simple);
      }
      int found = -1;
      for (int gap = 0; gap < 2; ++gap)
        if (!c.separates(corner_face(gap), sref)) {
          if (found >= 0) throw ValidationError("ambiguous tag side");
          found = gap;
        }
      if (found < 0) throw ValidationError("no tag side found");
      tag_gap = found;
    } else {
      throw ValidationError("unsupported tag configuration");
    }
    gaps.push_back(tag_gap);
  }
  return gaps;
}

/// Label blocks around internal vertex v read clockwise starting from the
/// tag gap: er[gap], er[gap-1], ...
inline std::vector<int> blocks_clockwise_from_tag(const Graph& g,
                                                  const ProperLabeling& lab,
                                                  int v, int gap) {
  std::vector<int> er = detail::edge_rotation(g, v);
  const int k = static_cast<int>(er.size());
  std::vector<int> blocks;
  for (int s = 0; s < k; ++s)
    blocks.push_back(lab.mask[er[((gap - s) % k + k) % k]]);
  return blocks;
}

/// Coinversion number and sign of a proper labeling under the given tag
/// placement (canonical placement when omitted).
inline std::pair<int, int> coinversion_and_sign(
    const Graph& g, const ProperLabeling& lab,
    const std::vector<int>* tag_gaps = nullptr) {
  std::vector<int> gaps = tag_gaps ? *tag_gaps : canonical_tag_gaps(g);
  int total = 0;
  for (int v = g.nb; v < g.num_vertices(); ++v)
    total += coinversion(blocks_clockwise_from_tag(g, lab, v, gaps[v - g.nb]));
  return {total, total % 2 == 0 ? 1 : -1};
}

}  // namespace hourglass
