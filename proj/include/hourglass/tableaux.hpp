/**
 * @brief Fluctuating tableaux, promotion (two independent implementations),
 *        evacuation, and promotion permutations.
 *
 * A fluctuating tableau is a chain 0 = λ^0 → λ^1 → ... → λ^n of 4-row
 * generalized partitions where consecutive shapes differ by a skew column
 * e_S for a letter S.  Tableaux are stored as shape chains; the cell picture
 * is derived for display only.
 */
#pragma once

#include <array>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hourglass/words.hpp"

namespace hourglass {

struct FluctuatingTableau {
  std::vector<Weight> shapes;  ///< λ^0 .. λ^n, with λ^0 = 0
  Word letters;                ///< the lattice word (one letter per step)

  int length() const { return static_cast<int>(letters.size()); }

  bool rectangular() const {
    const Weight& last = shapes.back();
    for (int r = 1; r < kRank; ++r)
      if (last[r] != last[0]) return false;
    return true;
  }
};

inline FluctuatingTableau tableau_from_word(const Word& w) {
  if (!is_lattice(w)) throw ValidationError("not a lattice word");
  FluctuatingTableau t;
  t.letters = w;
  t.shapes.assign(1, Weight{});
  for (const Letter& l : w) {
    Weight mu = t.shapes.back();
    add_letter(mu, l);
    t.shapes.push_back(mu);
  }
  return t;
}

inline const Word& word_of(const FluctuatingTableau& t) { return t.letters; }

// ---------------------------------------------------------------------------
// Promotion via the first-balance-point characterization (oracle form)
// ---------------------------------------------------------------------------

namespace detail {
/// theta: unbarred r -> r-1 (wrapping 1 -> 4); barred r -> r+1 (wrapping 4 -> 1).
inline Letter theta(const Letter& l) {
  int v = l.value();
  if (v > 0) return Letter::singleton_of(v == 1 ? kRank : v - 1);
  return Letter::singleton_of(v == -kRank ? -1 : v - 1);
}
}  // namespace detail

/// Promotion of a balanced oscillating lattice word: apply theta at the four
/// balance points, then rotate left.
inline Word promote_balance(const Word& w) {
  auto js = balance_points(w);  // validates input
  Word out = w;
  for (int j : js) out[j - 1] = detail::theta(out[j - 1]);
  std::rotate(out.begin(), out.begin() + 1, out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Promotion via jeu de taquin, as chain-local toggles.
//
// The bullet starts as the first step.  Sliding past the next step t with
// prefix shape mu follows the slide cases:
//   * t equal to the bullet step: the bullet swaps within its row (no shape
//     change);
//   * t the opposite step (an add/remove pair on one cell): the pair slides
//     along the plateau of rows with equal length (downward for an unbarred
//     bullet, upward for barred) and re-lands one column over, with the
//     removal now preceding the addition;
//   * otherwise the two steps commute when the swapped intermediate shape is
//     weakly decreasing, and the bullet is blocked (passing without moving)
//     when it is not.
// ---------------------------------------------------------------------------

inline Word promote_jdt_osc(const Word& w) {
  if (!is_oscillating(w) || !is_balanced_lattice(w))
    throw ValidationError("jdt promotion requires a balanced oscillating lattice word");
  const int n = static_cast<int>(w.size());
  std::vector<int> step(n);  // signed rows
  for (int i = 0; i < n; ++i) step[i] = w[i].value();
  Weight mu{};  // shape before the bullet position
  for (int i = 0; i + 1 < n; ++i) {
    const int s = step[i], t = step[i + 1];
    if (t == s) {
      // swap within the row: chain unchanged
    } else if (t == -s) {
      // add/remove pair on a single cell.  The open cell of a row sits just
      // right of its current extent, so the pair slides through the plateau
      // of rows with the same length (downward for an unbarred bullet,
      // upward for barred), then shifts one column; the removal then
      // precedes the re-addition.
      const int a = std::abs(s);
      int R = a;
      if (s > 0) {
        while (R + 1 <= kRank && mu[R] == mu[a - 1]) ++R;
        step[i] = -R;
        step[i + 1] = R;
      } else {
        while (R - 1 >= 1 && mu[R - 2] == mu[a - 1]) --R;
        step[i] = R;
        step[i + 1] = -R;
      }
    } else {
      Weight cand = mu;
      cand[std::abs(t) - 1] += (t > 0 ? 1 : -1);
      if (weakly_decreasing(cand)) {
        step[i] = t;  // commute
        step[i + 1] = s;
      }
      // else: bullet blocked; order swaps with no shape change
    }
    mu[std::abs(step[i]) - 1] += (step[i] > 0 ? 1 : -1);
    if (!weakly_decreasing(mu))
      throw ValidationError("jdt slide produced an invalid intermediate shape");
  }
  Word out;
  for (int v : step) out.push_back(Letter::singleton_of(v));
  return out;
}

/// Promotion of a general fluctuating tableau: oscillize, promote |c_1|
/// times, and regroup by the rotated type (c_2,...,c_n,c_1).
inline FluctuatingTableau promote_jdt(const FluctuatingTableau& t) {
  if (t.length() == 0) return t;
  Word o = oscillize(t.letters);
  const int d1 = t.letters.front().degree();
  for (int k = 0; k < d1; ++k) o = promote_jdt_osc(o);
  std::vector<int> type = word_type(t.letters);
  std::rotate(type.begin(), type.begin() + 1, type.end());
  Word grouped;
  std::size_t pos = 0;
  for (int c : type) {
    std::vector<int> vals;
    for (int k = 0; k < std::abs(c); ++k) vals.push_back(o[pos++].value());
    std::sort(vals.begin(), vals.end());
    grouped.push_back(Letter::from_entries(vals));
  }
  return tableau_from_word(grouped);
}

// ---------------------------------------------------------------------------
// Evacuation
// ---------------------------------------------------------------------------

/// Evacuation acts on lattice words as the involution epsilon; on the
/// rectangular chains supported here dual evacuation coincides with it
/// (promotion has order dividing n on rectangles).
inline FluctuatingTableau evacuate(const FluctuatingTableau& t) {
  return tableau_from_word(epsilon(t.letters));
}
inline FluctuatingTableau dual_evacuate(const FluctuatingTableau& t) {
  return tableau_from_word(epsilon(t.letters));
}

// ---------------------------------------------------------------------------
// Promotion permutations
// ---------------------------------------------------------------------------

struct PromotionData {
  /// perms[i][b-1] = prom_{i+1}(b), 1-based values in [1, N]
  std::array<std::vector<int>, kRank - 1> perms;
  int n = 0;

  /// 0/1 promotion matrix for prom_{i} (i in 1..3), row b, column prom_i(b).
  std::vector<std::vector<int>> matrix(int i) const {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (int b = 1; b <= n; ++b) m[b - 1][perms[i - 1][b - 1] - 1] = 1;
    return m;
  }
};

/// prom_i(T)(b) = |a| + b - 1 (mod N) where a crosses rows i/i+1 while
/// promoting P^{b-1}(osc(T)); the crossing value is the i-th balance point.
inline PromotionData promotion_permutations(const FluctuatingTableau& t) {
  if (!t.rectangular())
    throw ValidationError("promotion permutations require a rectangular tableau");
  Word w = oscillize(t.letters);
  const int N = static_cast<int>(w.size());
  PromotionData data;
  data.n = N;
  for (auto& p : data.perms) p.assign(N, 0);
  for (int b = 1; b <= N; ++b) {
    auto js = balance_points(w);
    const bool barred = w.front().negative;
    for (int i = 1; i < kRank; ++i) {
      // js is in crossing-time order; boundary i/i+1 is the (4-i)-th
      // crossing when the bullet travels upward
      const int j = barred ? js[kRank - i] : js[i];
      data.perms[i - 1][b - 1] = ((j + b - 2) % N) + 1;
    }
    w = promote_balance(w);
  }
  return data;
}

/// Cyclic monotonicity of promotion permutations (used as a test invariant):
/// with mod-n representatives in [0, n-1],
///   0 < prom_1(i)-i <= prom_2(i)-i <= prom_3(i)-i   for positive letters,
/// and with differences reversed for negative letters.
inline bool cyclic_monotonicity_check(const FluctuatingTableau& t) {
  if (!t.rectangular() || !is_oscillating(t.letters)) return false;
  const int n = t.length();
  PromotionData data = promotion_permutations(t);
  for (int i = 1; i <= n; ++i) {
    const bool positive = !t.letters[i - 1].negative;
    int prev = 0;
    for (int k = 1; k < kRank; ++k) {
      int p = data.perms[k - 1][i - 1];
      int d = positive ? ((p - i) % n + n) % n : ((i - p) % n + n) % n;
      if (d == 0 || d < prev) return false;
      prev = d;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Display: derived cell picture
// ---------------------------------------------------------------------------

/// Renders the cell diagram: entry k sits in row r at the column its step
/// fills (positive) or empties (negative); columns <= 0 are drawn left of a
/// '|' marker.  Cells may hold several entries over time.
inline std::string render_tableau(const FluctuatingTableau& t) {
  const Word o = oscillize(t.letters);
  // map (row, column) -> entries in time order
  std::map<std::pair<int, int>, std::vector<std::string>> cells;
  // entries display the (1-based) index of the coarse letter they belong to
  std::vector<int> owner;
  for (std::size_t i = 0; i < t.letters.size(); ++i)
    for (int d = 0; d < t.letters[i].degree(); ++d)
      owner.push_back(static_cast<int>(i) + 1);
  Weight mu{};
  for (std::size_t k = 0; k < o.size(); ++k) {
    int v = o[k].value();
    int r = std::abs(v);
    int col = v > 0 ? mu[r - 1] + 1 : mu[r - 1];
    std::string e = std::to_string(owner[k]);
    if (v < 0) e += "~";
    cells[{r, col}].push_back(e);
    mu[r - 1] += (v > 0 ? 1 : -1);
  }
  std::string out;
  for (int r = 1; r <= kRank; ++r) {
    int lo = 1, hi = 0;
    for (const auto& [key, val] : cells)
      if (key.first == r) {
        lo = std::min(lo, key.second);
        hi = std::max(hi, key.second);
      }
    std::string line = "row " + std::to_string(r) + ":";
    for (int c = lo; c <= hi; ++c) {
      if (c == 1) line += " |";
      auto it = cells.find({r, c});
      line += " [";
      if (it != cells.end())
        for (std::size_t k = 0; k < it->second.size(); ++k) {
          if (k) line += ' ';
          line += it->second[k];
        }
      line += "]";
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace hourglass
