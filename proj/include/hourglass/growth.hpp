/**
 * @brief Growth algorithm: builds the fully reduced hourglass plabic graph of
 *        a balanced lattice word, together with its edge labeling.
 *
 * The word is oscillized and read as a row of dangling strands; local
 * rewrites then assemble a six-vertex configuration top-down.  Each rewrite
 * replaces two adjacent dangling letters ab by the tlex-maximal bottom pair
 * cd completing a proper crossing, and two cap rules (1 -1 and -4 4) merge
 * adjacent strands into a single edge.  A rewrite is admissible only when the
 * new word stays a balanced lattice word; a backtracking search over
 * admissible rewrites terminates at the empty word, and a terminal sequence
 * is accepted only when the finished graph is fully reduced and its boundary
 * trips realize the promotion permutations of the input.  The configuration
 * then pulls
 * back through the six-vertex correspondence, boundary claws merge into
 * hourglasses for multi-entry letters, and the crossing labels become a
 * proper edge labeling whose boundary word is the input.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hourglass/labeling.hpp"
#include "hourglass/moves.hpp"
#include "hourglass/sixvertex.hpp"

namespace hourglass {

/// One local rewrite: top pair (a, b) becomes bottom pair (c, d), or is
/// erased entirely when `cap` is set.
struct GrowthRule {
  Letter a, b;  ///< adjacent top letters consumed
  Letter c, d;  ///< bottom letters produced (ignored for caps)
  bool cap = false;

  std::string name() const {
    std::string s = format_letter(a) + " " + format_letter(b) + " -> ";
    return s + (cap ? "()" : format_letter(c) + " " + format_letter(d));
  }
};

namespace detail {

/// True when top letters (a, b) over bottom letters (c, d) form a proper
/// crossing: the orientation pattern is a source, sink, or transmitting
/// vertex and the labels obey the properness constraints (four distinct
/// labels at sources/sinks; matching in/out label pairs at transmitting
/// vertices).  Top letters point in when positive; bottom letters point in
/// when negative.
inline bool proper_crossing(int a, int b, int c, int d) {
  const int ma = std::abs(a), mb = std::abs(b), mc = std::abs(c),
            md = std::abs(d);
  auto same_set = [](int x1, int x2, int y1, int y2) {
    return (x1 == y1 && x2 == y2) || (x1 == y2 && x2 == y1);
  };
  if (a > 0 && b > 0 && c < 0 && d < 0)  // sink: all four point in
    return ((1 << ma) | (1 << mb) | (1 << mc) | (1 << md)) == 0b11110;
  if (a < 0 && b < 0 && c > 0 && d > 0)  // source: all four point out
    return ((1 << ma) | (1 << mb) | (1 << mc) | (1 << md)) == 0b11110;
  if (a > 0 && b > 0 && c > 0 && d > 0)  // transmitting, top pair in
    return ma != mb && same_set(ma, mb, mc, md);
  if (a < 0 && b < 0 && c < 0 && d < 0)  // transmitting, bottom pair in
    return mc != md && same_set(ma, mb, mc, md);
  if (a > 0 && b < 0 && c < 0 && d > 0)  // transmitting, left pair in
    return ma != mc && same_set(ma, mc, mb, md);
  if (a < 0 && b > 0 && c > 0 && d < 0)  // transmitting, right pair in
    return mb != md && same_set(mb, md, ma, mc);
  return false;  // incoming edges not ccw-adjacent, or degenerate
}

inline Word pair_word(int x, int y) {
  return {Letter::singleton_of(x), Letter::singleton_of(y)};
}

}  // namespace detail

/// The fixed rewrite table: caps first, then every crossing rule whose
/// bottom pair is tlex-maximal among proper completions of its top pair,
/// strictly increases the leading tilde value and the tlex order, and is
/// tlex-monotone against every other proper crossing -- minus the four
/// degenerate pairs that the caps and trivial slides make redundant.
inline const std::vector<GrowthRule>& rule_table() {
  static const std::vector<GrowthRule> table = [] {
    std::vector<GrowthRule> rules;
    const std::array<int, 8> values = {1, 2, 3, 4, -1, -2, -3, -4};
    // all proper crossings, for the monotonicity filter below
    std::vector<std::array<int, 4>> crossings;
    for (int a : values)
      for (int b : values)
        for (int c : values)
          for (int d : values)
            if (detail::proper_crossing(a, b, c, d))
              crossings.push_back({a, b, c, d});
    // conditions (ii) and (iii) quantify over labelings of the same oriented
    // gadget, so completions and the monotonicity check are grouped by the
    // sign pattern of all four letters
    auto signs_of = [](const std::array<int, 4>& x) {
      int s = 0;
      for (int k = 0; k < 4; ++k) s |= (x[k] > 0) << k;
      return s;
    };
    for (int a : values)
      for (int b : values)
        for (int pattern = 0; pattern < 4; ++pattern) {
          const std::array<int, 4> probe = {a, b, pattern & 1 ? 1 : -1,
                                            pattern & 2 ? 1 : -1};
          const int want = signs_of(probe);
          // tlex-maximal proper completions with these signs (ties kept)
          std::vector<std::pair<int, int>> best;
          for (const auto& x : crossings) {
            if (x[0] != a || x[1] != b || signs_of(x) != want) continue;
            std::pair<int, int> cd{x[2], x[3]};
            if (!best.empty()) {
              auto cmp = tlex_compare(detail::pair_word(cd.first, cd.second),
                                      detail::pair_word(best.front().first,
                                                        best.front().second));
              if (cmp == std::strong_ordering::less) continue;
              if (cmp == std::strong_ordering::greater) best.clear();
            }
            best.push_back(cd);
          }
          const Word top = detail::pair_word(a, b);
          for (auto [c, d] : best) {
            if (tilde(a) >= tilde(c)) continue;  // strict leading increase
            const Word bot = detail::pair_word(c, d);
            if (tlex_compare(bot, top) != std::strong_ordering::greater)
              continue;
            // tlex-monotone within the gadget: no proper labeling of the
            // same oriented crossing reaches a weakly larger bottom from a
            // strictly smaller top
            bool monotone = true;
            for (const auto& x : crossings) {
              if (signs_of(x) != want ||
                  tlex_compare(detail::pair_word(x[2], x[3]), bot) ==
                      std::strong_ordering::less ||
                  tlex_compare(detail::pair_word(x[0], x[1]), top) !=
                      std::strong_ordering::less)
                continue;
              monotone = false;
              break;
            }
            if (!monotone) continue;
            rules.push_back({Letter::singleton_of(a), Letter::singleton_of(b),
                             Letter::singleton_of(c), Letter::singleton_of(d),
                             false});
          }
        }
    // degenerate pairs handled by the caps instead
    const std::vector<std::array<int, 4>> excluded = {
        {1, -1, -2, 2}, {-4, 4, 3, -3}, {1, 4, -2, -3}, {-4, -1, 3, 2}};
    std::erase_if(rules, [&](const GrowthRule& r) {
      for (const auto& x : excluded)
        if (r.a.value() == x[0] && r.b.value() == x[1] &&
            r.c.value() == x[2] && r.d.value() == x[3])
          return true;
      return false;
    });
    std::sort(rules.begin(), rules.end(),
              [](const GrowthRule& r, const GrowthRule& s) {
                auto key = [](const GrowthRule& g) {
                  return std::array<int, 4>{tilde(g.a.value()), g.a.value(),
                                            tilde(g.b.value()), g.b.value()};
                };
                return key(r) < key(s);
              });
    std::vector<GrowthRule> table;
    table.push_back({Letter::singleton_of(1), Letter::singleton_of(-1),
                     {}, {}, true});
    table.push_back({Letter::singleton_of(-4), Letter::singleton_of(4),
                     {}, {}, true});
    table.insert(table.end(), rules.begin(), rules.end());
    return table;
  }();
  return table;
}

namespace detail {

/// Boundary trip routing of one crossing gadget, realized as a four-port
/// hourglass fragment.  Ports in circular order: 0 = top-left, 1 = top-right,
/// 2 = bottom-right, 3 = bottom-left; routing[a-1][p] is the exit port of a
/// trip_a walk entering at port p.
inline std::array<std::array<int, 4>, kRank - 1> gadget_routing(
    const GrowthRule& r) {
  SixVertexConfig c;
  c.nb = 4;
  c.rot.resize(5);
  auto port_edge = [&](int b, const Letter& l, bool top) {
    // top letters flow down into the vertex when positive; bottom letters
    // flow down away from it
    const bool into = top ? !l.negative : l.negative;
    c.edge_ends.push_back(into ? std::array<int, 2>{b, 4}
                               : std::array<int, 2>{4, b});
    c.rot[b] = {static_cast<int>(c.edge_ends.size()) - 1};
  };
  port_edge(0, r.a, true);
  port_edge(1, r.b, true);
  port_edge(2, r.d, false);
  port_edge(3, r.c, false);
  c.rot[4] = {1, 0, 3, 2};  // ccw: top-right, top-left, bottom-left, bottom-right
  TripPerms t = trip_perms(phi_inverse(c));
  std::array<std::array<int, 4>, kRank - 1> out;
  for (int a = 0; a < kRank - 1; ++a)
    for (int p = 0; p < 4; ++p) out[a][p] = t.perm[a][p];
  return out;
}

/// Trip routings for every non-cap rule in `rule_table()`, by index.
inline const std::array<std::array<int, 4>, kRank - 1>& rule_routing(int ri) {
  static const std::vector<std::array<std::array<int, 4>, kRank - 1>> cache =
      [] {
        std::vector<std::array<std::array<int, 4>, kRank - 1>> out;
        for (const GrowthRule& r : rule_table())
          out.push_back(r.cap ? std::array<std::array<int, 4>, kRank - 1>{}
                              : gadget_routing(r));
        return out;
      }();
  return cache[ri];
}

/// Exact per-step admissibility: splicing the gadget between the word `w`
/// and a graph realizing the promotion permutations of `wp` must yield the
/// promotion permutations of `w`.  Trips compose locally, so this only needs
/// the two permutation families and the gadget routing.
inline bool step_preserves_trips(const PromotionData& pw,
                                 const PromotionData& pwp, const GrowthRule& r,
                                 int ri, int j) {
  const int q = r.cap ? 0 : 2;
  auto shift = [&](int x) { return x < j ? x : x - 2 + q; };
  auto unshift = [&](int x) { return x < j ? x : x + 2 - q; };
  for (int a = 0; a < kRank - 1; ++a)
    for (int i = 0; i < pw.n; ++i) {
      int result;
      if (r.cap && (i == j || i == j + 1)) {
        result = i == j ? j + 1 : j;
      } else {
        const auto& route = rule_routing(ri);
        int inner;  // position on the inner boundary, about to enter
        if (i == j || i == j + 1) {
          const int e = route[a][i == j ? 0 : 1];
          if (e <= 1) {
            if (pw.perms[a][i] - 1 != (e == 0 ? j : j + 1)) return false;
            continue;
          }
          inner = e == 3 ? j : j + 1;
        } else {
          inner = shift(i);
        }
        int guard = 0;
        while (true) {
          if (++guard > 8) return false;
          const int out = pwp.perms[a][inner] - 1;
          if (!r.cap && (out == j || out == j + 1)) {
            const int e = route[a][out == j ? 3 : 2];
            if (e <= 1) {
              result = e == 0 ? j : j + 1;
              break;
            }
            inner = e == 3 ? j : j + 1;
            continue;
          }
          result = unshift(out);
          break;
        }
      }
      if (result != pw.perms[a][i] - 1) return false;
    }
  return true;
}

/// Applies rule `r` at position `j` when the pattern matches and the result
/// stays a balanced lattice word.  The trip-preservation check is done
/// separately (it needs both words' promotion permutations).
inline std::optional<Word> try_rewrite(const Word& w, const GrowthRule& r,
                                       int j) {
  if (j + 1 >= static_cast<int>(w.size())) return std::nullopt;
  if (!(w[j] == r.a && w[j + 1] == r.b)) return std::nullopt;
  Word wp(w.begin(), w.begin() + j);
  if (!r.cap) {
    wp.push_back(r.c);
    wp.push_back(r.d);
  }
  wp.insert(wp.end(), w.begin() + j + 2, w.end());
  if (!is_balanced_lattice(wp)) return std::nullopt;
  return wp;
}

/// Assembles the six-vertex configuration of a rewrite sequence on the
/// oscillating word `o`.  Strands flow downward through positive letters and
/// upward through negative ones; each crossing becomes an internal vertex
/// with ccw rotation [right-top, left-top, left-bottom, right-bottom], and
/// each cap splices its two dangling edges into one.
struct LinearDiagram {
  SixVertexConfig config;
  std::vector<int> edge_label;  ///< strand magnitude 1..4 per edge
};

inline LinearDiagram assemble_diagram(
    const Word& o, const std::vector<std::pair<int, int>>& steps) {
  const int n = static_cast<int>(o.size());
  SixVertexConfig d;
  d.nb = n;
  d.rot.resize(n);
  std::vector<int> label, bedge(n);
  std::vector<char> dead;
  struct Dangling {
    int edge;
    Letter letter;
  };
  std::vector<Dangling> dang;
  auto add_edge = [&](int tail, int head, int magnitude) {
    d.edge_ends.push_back({tail, head});
    label.push_back(magnitude);
    dead.push_back(0);
    return d.num_edges() - 1;
  };
  for (int i = 0; i < n; ++i) {
    const int v = o[i].value();
    bedge[i] = v > 0 ? add_edge(i, -1, v) : add_edge(-1, i, -v);
    dang.push_back({bedge[i], o[i]});
  }
  const auto& table = rule_table();
  for (auto [j, ri] : steps) {
    const GrowthRule& r = table[ri];
    const int L = dang[j].edge, R = dang[j + 1].edge;
    if (!(dang[j].letter == r.a && dang[j + 1].letter == r.b))
      throw ValidationError("rewrite sequence inconsistent with word");
    auto fill = [&](int e, int v) {
      if (d.edge_ends[e][0] == -1)
        d.edge_ends[e][0] = v;
      else
        d.edge_ends[e][1] = v;
    };
    if (r.cap) {
      // splice: the left edge absorbs the right edge's attachment
      const int uR = d.edge_ends[R][0] == -1 ? d.edge_ends[R][1]
                                             : d.edge_ends[R][0];
      if (uR < n) {
        bedge[uR] = L;
      } else {
        for (int& e : d.rot[uR])
          if (e == R) e = L;
      }
      fill(L, uR);
      dead[R] = 1;
      dang.erase(dang.begin() + j, dang.begin() + j + 2);
    } else {
      const int v = d.num_vertices();
      d.rot.push_back({});
      fill(L, v);
      fill(R, v);
      const int cv = r.c.value(), dv = r.d.value();
      const int D1 = cv > 0 ? add_edge(v, -1, cv) : add_edge(-1, v, -cv);
      const int D2 = dv > 0 ? add_edge(v, -1, dv) : add_edge(-1, v, -dv);
      d.rot[v] = {R, L, D1, D2};
      dang[j] = {D1, r.c};
      dang[j + 1] = {D2, r.d};
    }
  }
  if (!dang.empty())
    throw ValidationError("rewrite sequence does not empty the word");
  // compact away spliced edges
  std::vector<int> remap(d.num_edges(), -1);
  LinearDiagram out;
  out.config.nb = n;
  for (int e = 0; e < d.num_edges(); ++e) {
    if (dead[e]) continue;
    remap[e] = out.config.num_edges();
    out.config.edge_ends.push_back(d.edge_ends[e]);
    out.edge_label.push_back(label[e]);
  }
  out.config.rot.resize(d.num_vertices());
  for (int b = 0; b < n; ++b) out.config.rot[b] = {remap[bedge[b]]};
  for (int v = n; v < d.num_vertices(); ++v)
    for (int e : d.rot[v]) out.config.rot[v].push_back(remap[e]);
  validate_six_vertex(out.config);
  return out;
}

}  // namespace detail

struct GrowthStep {
  Word word;         ///< dangling word before the step
  std::string rule;  ///< rule applied (by name)
  int position = 0;  ///< 0-based site in the word
};

struct GrowthResult {
  Graph graph;              ///< fully reduced contracted graph
  ProperLabeling labeling;  ///< growth labeling of its edges
  std::vector<GrowthStep> trace;
};

namespace detail {

inline GrowthResult grow_impl(const Word& w, std::mt19937* rng) {
  if (!is_balanced_lattice(w))
    throw ValidationError("growth requires a balanced lattice word");
  GrowthResult result;
  if (w.empty()) return result;
  const Word o = oscillize(w);
  const auto& table = rule_table();
  const bool osc_input = is_oscillating(w);
  const std::vector<int> type = word_type(w);
  const PromotionData target = promotion_permutations(tableau_from_word(w));

  std::vector<std::pair<int, int>> steps;  // chosen (position, rule index)
  std::vector<Word> before;                // word at each step
  std::set<std::string> dead_words;
  std::map<std::string, PromotionData> prom_cache;
  auto proms = [&](const Word& word, const std::string& key)
      -> const PromotionData& {
    auto it = prom_cache.find(key);
    if (it == prom_cache.end())
      it = prom_cache
               .emplace(key, word.empty() ? PromotionData{}
                                          : promotion_permutations(
                                                tableau_from_word(word)))
               .first;
    return it->second;
  };
  std::size_t nodes = 0;

  // build the graph from the chosen rewrites and verify it transcribes the
  // word: fully reduced, and the boundary trips realize the promotion
  // permutations
  auto finalize = [&]() -> bool {
    try {
      LinearDiagram ld = assemble_diagram(o, steps);
      Graph fine = phi_inverse(ld.config);
      ProperLabeling flab;
      flab.mask.assign(fine.num_edges(), 0);
      for (int e = 0; e < ld.config.num_edges(); ++e)
        flab.mask[e] = 1 << (ld.edge_label[e] - 1);
      for (int e = ld.config.num_edges(); e < fine.num_edges(); ++e) {
        const GEdge& ed = fine.edges[e];
        const int wv = fine.verts[ed.u].color == -1 ? ed.u : ed.v;
        int seen = 0;
        for (const Slot& s : fine.verts[wv].rot)
          if (s.edge != e) seen |= flab.mask[s.edge];
        flab.mask[e] = kFullMask & ~seen;
      }
      TripPerms trips = trip_perms(fine);
      for (int a = 0; a < kRank - 1; ++a)
        for (int i = 0; i < fine.nb; ++i)
          if (trips.perm[a][i] != target.perms[a][i] - 1) return false;
      Graph out = fine;
      ProperLabeling lab = flab;
      if (!osc_input) {
        std::vector<int> emap;
        out = de_oscillize(fine, type, &emap);
        lab.mask.assign(out.num_edges(), 0);
        for (int e = 0; e < fine.num_edges(); ++e)
          lab.mask[emap[e]] |= flab.mask[e];
        for (int e = 0; e < out.num_edges(); ++e)
          if (std::popcount(static_cast<unsigned>(lab.mask[e])) !=
              out.edges[e].mult)
            return false;
      }
      if (!is_fully_reduced(out)) return false;
      // normal form: contract away internal hourglass pairs, carrying labels
      // (the surviving edge's label equals the one it replaces in any proper
      // labeling, so dropping the erased edges loses nothing)
      std::vector<int> cmap;
      Graph contracted = contract(out, &cmap);
      ProperLabeling clab;
      clab.mask.assign(contracted.num_edges(), 0);
      for (int e = 0; e < out.num_edges(); ++e)
        if (cmap[e] >= 0) clab.mask[cmap[e]] = lab.mask[e];
      result.graph = std::move(contracted);
      result.labeling = std::move(clab);
      for (std::size_t k = 0; k < steps.size(); ++k)
        result.trace.push_back(
            {before[k], table[steps[k].second].name(), steps[k].first});
      return true;
    } catch (const ValidationError&) {
      return false;
    }
  };

  // returns: 0 = accepted, 1 = subtree never reached the empty word,
  // 2 = reached the empty word but every terminal failed the oracle.
  // Only outcome 1 is a property of the word alone (no rewrite sequence
  // empties it), so only it may be memoized: oracle verdicts depend on the
  // whole rewrite path, which differs between visits.
  std::function<int(const Word&)> dfs = [&](const Word& cur) -> int {
    if (cur.empty()) return finalize() ? 0 : 2;
    const std::string key = format_word(cur);
    if (dead_words.count(key)) return 1;
    if (++nodes > max_search_nodes())
      throw ResourceError("growth search exceeded node cap");
    const PromotionData& pcur = proms(cur, key);
    std::vector<std::pair<int, std::pair<int, Word>>> cands;  // (pos, (rule, next))
    for (int j = 0; j + 1 < static_cast<int>(cur.size()); ++j)
      for (int ri = 0; ri < static_cast<int>(table.size()); ++ri)
        if (auto wp = try_rewrite(cur, table[ri], j)) {
          const PromotionData& pnext = proms(*wp, format_word(*wp));
          if (!step_preserves_trips(pcur, pnext, table[ri], ri, j)) continue;
          cands.push_back({j, {ri, std::move(*wp)}});
        }
    if (rng) std::shuffle(cands.begin(), cands.end(), *rng);
    int verdict = 1;
    for (auto& [j, rw] : cands) {
      steps.push_back({j, rw.first});
      before.push_back(cur);
      const int sub = dfs(rw.second);
      if (sub == 0) return 0;
      if (sub == 2) verdict = 2;
      steps.pop_back();
      before.pop_back();
    }
    if (verdict == 1) dead_words.insert(key);
    return verdict;
  };
  if (dfs(o) != 0)
    throw ValidationError("growth found no admissible rewrite sequence");
  return result;
}

}  // namespace detail

/// Deterministic growth: rewrites are tried by (position, table order) with
/// backtracking.
inline GrowthResult grow(const Word& w) { return detail::grow_impl(w, nullptr); }

/// Randomized growth: candidate rewrites are shuffled at every step, so
/// different seeds explore different admissible sequences (all of which
/// produce graphs in the same move equivalence class).
inline GrowthResult randomized_grow(const Word& w, unsigned seed) {
  std::mt19937 rng(seed);
  return detail::grow_impl(w, &rng);
}

}  // namespace hourglass
