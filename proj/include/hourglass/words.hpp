/**
 * @brief Signed-subset alphabet, lattice words, orderings, involutions,
 *        descents, balance points, and crystal operators.
 *
 * Letters are nonempty same-sign subsets of {±1,...,±4}.  A word is a
 * sequence of letters; the running weight of a prefix adds +e_r for each
 * positive entry r and -e_r for each negative entry -r.  A word is a
 * lattice word when every prefix weight is weakly decreasing, and balanced
 * when the final weight is a constant vector.
 */
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hourglass/common.hpp"

namespace hourglass {

inline constexpr int kRank = 4;  ///< number of rows (sl_4 throughout)

/// One letter: a nonempty subset of {1..4} or {-1..-4}.
struct Letter {
  std::uint8_t mask = 0;  ///< bits 0..3 encode magnitudes 1..4
  bool negative = false;

  int degree() const { return std::popcount(mask); }
  bool singleton() const { return degree() == 1; }
  bool contains(int magnitude) const { return (mask >> (magnitude - 1)) & 1; }

  /// Signed value of a singleton letter.
  int value() const { return entries().front(); }

  /// Entries as signed integers in increasing Z-order
  /// (e.g. {-1,-3} yields -3,-1; {1,3} yields 1,3).
  std::vector<int> entries() const {
    std::vector<int> out;
    if (negative) {
      for (int m = kRank; m >= 1; --m)
        if (contains(m)) out.push_back(-m);
    } else {
      for (int m = 1; m <= kRank; ++m)
        if (contains(m)) out.push_back(m);
    }
    return out;
  }

  static Letter singleton_of(int v) {
    if (v == 0 || v > kRank || v < -kRank)
      throw ValidationError("letter entry out of range: " + std::to_string(v));
    Letter l;
    l.negative = v < 0;
    l.mask = static_cast<std::uint8_t>(1u << (std::abs(v) - 1));
    return l;
  }

  static Letter from_entries(const std::vector<int>& vals) {
    if (vals.empty()) throw ValidationError("empty letter");
    Letter l;
    l.negative = vals.front() < 0;
    for (int v : vals) {
      if (v == 0 || v > kRank || v < -kRank)
        throw ValidationError("letter entry out of range: " + std::to_string(v));
      if ((v < 0) != l.negative) throw ValidationError("mixed-sign letter");
      if (l.contains(std::abs(v))) throw ValidationError("repeated letter entry");
      l.mask |= static_cast<std::uint8_t>(1u << (std::abs(v) - 1));
    }
    return l;
  }

  /// Same-set opposite-sign letter.
  Letter barred() const { return Letter{mask, !negative}; }

  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;
using Weight = std::array<int, kRank>;  ///< running row counts

// ---------------------------------------------------------------------------
// Text grammar:  letters separated by whitespace; singleton "3" / "-3";
// subset "{1,3}" / "{-2,-4}".
// ---------------------------------------------------------------------------

inline Letter parse_letter(const std::string& tok) {
  if (tok.empty()) throw ValidationError("empty letter token");
  std::vector<int> vals;
  if (tok.front() == '{') {
    if (tok.back() != '}') throw ValidationError("unterminated subset: " + tok);
    std::string body = tok.substr(1, tok.size() - 2);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    int v;
    while (in >> v) vals.push_back(v);
    if (!in.eof()) throw ValidationError("bad subset token: " + tok);
  } else {
    try {
      std::size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos != tok.size()) throw ValidationError("bad letter token: " + tok);
      vals.push_back(v);
    } catch (const std::invalid_argument&) {
      throw ValidationError("bad letter token: " + tok);
    } catch (const std::out_of_range&) {
      throw ValidationError("bad letter token: " + tok);
    }
  }
  return Letter::from_entries(vals);
}

inline Word parse_word(const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) w.push_back(parse_letter(tok));
  return w;
}

inline std::string format_letter(const Letter& l) {
  const auto vals = l.entries();
  if (vals.size() == 1) return std::to_string(vals.front());
  std::string out = "{";
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(vals[i]);
  }
  out += '}';
  return out;
}

inline std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += format_letter(w[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weights and the lattice condition
// ---------------------------------------------------------------------------

inline void add_letter(Weight& mu, const Letter& l) {
  for (int v : l.entries()) mu[std::abs(v) - 1] += (v > 0 ? 1 : -1);
}

inline Weight word_weight(const Word& w) {
  Weight mu{};
  for (const Letter& l : w) add_letter(mu, l);
  return mu;
}

inline bool weakly_decreasing(const Weight& mu) {
  for (int r = 0; r + 1 < kRank; ++r)
    if (mu[r] < mu[r + 1]) return false;
  return true;
}

enum class LatticeClass { NotLattice, Lattice, BalancedLattice };

/// Classifies a word via the prefix inequalities; `BalancedLattice` iff the
/// final weight is a constant vector.
inline LatticeClass classify_word(const Word& w) {
  Weight mu{};
  for (const Letter& l : w) {
    add_letter(mu, l);
    if (!weakly_decreasing(mu)) return LatticeClass::NotLattice;
  }
  for (int r = 1; r < kRank; ++r)
    if (mu[r] != mu[0]) return LatticeClass::Lattice;
  return LatticeClass::BalancedLattice;
}

inline bool is_lattice(const Word& w) {
  return classify_word(w) != LatticeClass::NotLattice;
}
inline bool is_balanced_lattice(const Word& w) {
  return classify_word(w) == LatticeClass::BalancedLattice;
}

/// Per-letter signed degrees (the word's type).
inline std::vector<int> word_type(const Word& w) {
  std::vector<int> c;
  c.reserve(w.size());
  for (const Letter& l : w) c.push_back(l.negative ? -l.degree() : l.degree());
  return c;
}

inline bool is_oscillating(const Word& w) {
  return std::all_of(w.begin(), w.end(),
                     [](const Letter& l) { return l.singleton(); });
}

/// Erases braces: each letter expands to singletons in increasing Z-order.
inline Word oscillize(const Word& w) {
  Word out;
  for (const Letter& l : w)
    for (int v : l.entries()) out.push_back(Letter::singleton_of(v));
  return out;
}

/// Total degree (number of boxes added/removed, i.e. length of oscillization).
inline int total_degree(const Word& w) {
  int d = 0;
  for (const Letter& l : w) d += l.degree();
  return d;
}

// ---------------------------------------------------------------------------
// Orderings
// ---------------------------------------------------------------------------

/// tilde map: i -> i for i>0;  -i -> 4-i+1 (so -4 -> 1, -1 -> 4).
inline int tilde(int v) { return v > 0 ? v : kRank + v + 1; }

/// Compares oscillizations lexicographically under the tilde map
/// (shorter word compares less when a prefix ties).
inline std::strong_ordering tlex_compare(const Word& a, const Word& b) {
  const Word oa = oscillize(a), ob = oscillize(b);
  const std::size_t n = std::min(oa.size(), ob.size());
  for (std::size_t i = 0; i < n; ++i) {
    int ta = tilde(oa[i].value()), tb = tilde(ob[i].value());
    if (ta != tb) return ta <=> tb;
  }
  return oa.size() <=> ob.size();
}

/// Degree-refining order: lower total degree first; on equal degree the
/// tlex-greater word is grevlex-smaller.
inline std::strong_ordering grevlex_compare(const Word& a, const Word& b) {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da <=> db;
  const auto t = tlex_compare(a, b);
  if (t == std::strong_ordering::less) return std::strong_ordering::greater;
  if (t == std::strong_ordering::greater) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Involutions
// ---------------------------------------------------------------------------

inline Letter varpi_letter(const Letter& l) {
  std::vector<int> vals;
  for (int v : l.entries()) vals.push_back(v > 0 ? -(kRank - v + 1) : kRank + v + 1);
  std::sort(vals.begin(), vals.end());
  return Letter::from_entries(vals);
}

inline Letter epsilon_letter(const Letter& l) {
  std::vector<int> vals;
  for (int v : l.entries()) vals.push_back(v > 0 ? kRank - v + 1 : -(kRank + v + 1));
  std::sort(vals.begin(), vals.end());
  return Letter::from_entries(vals);
}

/// tau: reverse the word and bar each letter.
inline Word tau(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->barred());
  return out;
}

/// varpi: letterwise i -> -sgn(i)(4-|i|+1).
inline Word varpi(const Word& w) {
  Word out;
  for (const Letter& l : w) out.push_back(varpi_letter(l));
  return out;
}

/// epsilon: reversal composed with letterwise i -> sgn(i)(4-|i|+1).
inline Word epsilon(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back(epsilon_letter(*it));
  return out;
}

// ---------------------------------------------------------------------------
// Descents, balance points, crystal operators (oscillating words)
// ---------------------------------------------------------------------------

/// Descent set of the oscillization: {i : 0<w_i<w_{i+1} or w_i<w_{i+1}<0}
/// (1-based positions in osc(w)).
inline std::vector<int> descents(const Word& w) {
  const Word o = oscillize(w);
  std::vector<int> out;
  for (std::size_t i = 0; i + 1 < o.size(); ++i) {
    int a = o[i].value(), b = o[i + 1].value();
    if ((0 < a && a < b) || (a < b && b < 0)) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

/// Balance points (j_0=1, j_1, j_2, j_3) in the time order the sliding bullet
/// crosses row boundaries.  For a word starting with a positive letter the
/// bullet moves downward and the i-th crossing is the first index weakly
/// after j_{i-1} whose prefix weight has row i equal to row i+1.  For a
/// negative first letter the (barred) bullet moves upward, so the i-th
/// crossing compares rows 4-i and 4-i+1 instead.
inline std::array<int, kRank> balance_points(const Word& w) {
  if (!is_oscillating(w) || !is_balanced_lattice(w))
    throw ValidationError("balance points require a balanced oscillating lattice word");
  const bool barred = w.front().negative;
  std::array<int, kRank> js{};
  js[0] = 1;
  std::vector<Weight> pre(w.size() + 1, Weight{});
  for (std::size_t i = 0; i < w.size(); ++i) {
    pre[i + 1] = pre[i];
    add_letter(pre[i + 1], w[i]);
  }
  for (int i = 1; i < kRank; ++i) {
    const int row = barred ? kRank - i : i;  // compare rows (row, row+1)
    // the jeu-de-taquin characterization forces j_1 >= 2
    int j = std::max(js[i - 1], i == 1 ? 2 : 1);
    while (j <= static_cast<int>(w.size()) && pre[j][row - 1] != pre[j][row]) ++j;
    if (j > static_cast<int>(w.size()))
      throw ValidationError("no balance point found (word not balanced)");
    js[i] = j;
  }
  return js;
}

namespace detail {
/// Bracket classification for crystal index i: +1 for '[', -1 for ']', 0 else.
inline int bracket_of(int v, int i) {
  if (v == i || v == -(i + 1)) return +1;
  if (v == i + 1 || v == -i) return -1;
  return 0;
}
/// Returns positions (0-based) of unmatched '[' and unmatched ']' brackets.
inline std::pair<std::vector<int>, std::vector<int>> unmatched_brackets(
    const Word& w, int i) {
  std::vector<int> opens, closes;
  for (std::size_t p = 0; p < w.size(); ++p) {
    int b = bracket_of(w[p].value(), i);
    if (b == +1) {
      opens.push_back(static_cast<int>(p));
    } else if (b == -1) {
      if (!opens.empty())
        opens.pop_back();  // matches the nearest open to its left
      else
        closes.push_back(static_cast<int>(p));
    }
  }
  return {opens, closes};
}
/// Applies the i-th raising substitution to one letter: i+1 -> i, -i -> -(i+1).
inline Letter raise_letter(int v, int i) {
  if (v == i + 1) return Letter::singleton_of(i);
  return Letter::singleton_of(-(i + 1));  // v == -i
}
/// Applies the i-th lowering substitution: i -> i+1, -(i+1) -> -i.
inline Letter lower_letter(int v, int i) {
  if (v == i) return Letter::singleton_of(i + 1);
  return Letter::singleton_of(-i);  // v == -(i+1)
}
}  // namespace detail

/// Raising operator e_i: acts at the rightmost unmatched ']' (none if absent).
inline std::optional<Word> crystal_e(const Word& w, int i) {
  auto [opens, closes] = detail::unmatched_brackets(w, i);
  if (closes.empty()) return std::nullopt;
  Word out = w;
  int p = closes.back();
  out[p] = detail::raise_letter(w[p].value(), i);
  return out;
}

/// Lowering operator f_i: acts at the leftmost unmatched '[' (none if absent).
inline std::optional<Word> crystal_f(const Word& w, int i) {
  auto [opens, closes] = detail::unmatched_brackets(w, i);
  if (opens.empty()) return std::nullopt;
  Word out = w;
  int p = opens.front();
  out[p] = detail::lower_letter(w[p].value(), i);
  return out;
}

// ---------------------------------------------------------------------------
// Random words (test/fuzz support)
// ---------------------------------------------------------------------------

namespace detail {
/// True when a balanced completion of length `m` exists from weight `mu`
/// using singleton steps that keep prefixes weakly decreasing.
inline bool balanced_completable(const Weight& mu, int m) {
  for (int c = mu[kRank - 1] - m; c <= mu[0] + m; ++c) {
    int cost = 0;
    for (int r = 0; r < kRank; ++r) cost += std::abs(mu[r] - c);
    if (cost <= m && (m - cost) % 2 == 0) return true;
  }
  return false;
}
}  // namespace detail

/// Uniform-ish random balanced oscillating lattice word of length n
/// (n must be even); built by a randomized backtracking walk.
inline Word random_balanced_oscillating_word(int n, std::mt19937& rng) {
  if (n % 2 != 0) throw ValidationError("balanced oscillating words have even length");
  Word w;
  Weight mu{};
  std::vector<std::vector<int>> choices;  // remaining candidates per level
  auto candidates = [&](const Weight& cur, int remaining) {
    std::vector<int> cand;
    for (int v : {1, 2, 3, 4, -1, -2, -3, -4}) {
      Weight nxt = cur;
      nxt[std::abs(v) - 1] += (v > 0 ? 1 : -1);
      if (weakly_decreasing(nxt) && detail::balanced_completable(nxt, remaining - 1))
        cand.push_back(v);
    }
    std::shuffle(cand.begin(), cand.end(), rng);
    return cand;
  };
  choices.push_back(candidates(mu, n));
  while (static_cast<int>(w.size()) < n) {
    if (choices.back().empty()) {
      if (w.empty()) throw ValidationError("no balanced word of requested length");
      add_letter(mu, w.back().barred());  // undo
      w.pop_back();
      choices.pop_back();
      continue;
    }
    int v = choices.back().back();
    choices.back().pop_back();
    w.push_back(Letter::singleton_of(v));
    add_letter(mu, w.back());
    choices.push_back(candidates(mu, n - static_cast<int>(w.size())));
  }
  return w;
}

/// All balanced lattice words with the given type (per-letter signed degrees),
/// in DFS order.
inline std::vector<Word> enumerate_balanced_words(const std::vector<int>& type) {
  std::vector<Word> out;
  Word cur;
  Weight mu{};
  int remaining = 0;
  for (int c : type) remaining += std::abs(c);
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == type.size()) {
      for (int r = 1; r < kRank; ++r)
        if (mu[r] != mu[0]) return;
      out.push_back(cur);
      return;
    }
    const int c = type[pos];
    const int d = std::abs(c);
    // choose a d-subset of magnitudes 1..4
    for (int mask = 1; mask < (1 << kRank); ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) != d) continue;
      std::vector<int> vals;
      for (int m = 1; m <= kRank; ++m)
        if (mask & (1 << (m - 1))) vals.push_back(c > 0 ? m : -m);
      if (c < 0) std::reverse(vals.begin(), vals.end());
      Letter l = Letter::from_entries(vals);
      // the letter must keep every oscillization prefix weakly decreasing
      Weight save = mu;
      bool ok = true;
      for (int v : l.entries()) {
        mu[std::abs(v) - 1] += (v > 0 ? 1 : -1);
        if (!weakly_decreasing(mu)) {
          ok = false;
          break;
        }
      }
      if (ok && detail::balanced_completable(mu, remaining - d)) {
        remaining -= d;
        cur.push_back(l);
        self(self, pos + 1);
        cur.pop_back();
        remaining += d;
      }
      mu = save;
    }
  };
  rec(rec, 0);
  return out;
}

/// Random balanced lattice word of general type: a random oscillating word
/// with adjacent runs merged into multi-entry letters where legal.
inline Word random_balanced_word(int n, std::mt19937& rng, double merge_prob = 0.35) {
  Word o = random_balanced_oscillating_word(n, rng);
  Word out;
  std::bernoulli_distribution flip(merge_prob);
  std::size_t i = 0;
  while (i < o.size()) {
    std::vector<int> vals = {o[i].value()};
    std::size_t j = i + 1;
    while (j < o.size() && flip(rng)) {
      int v = o[j].value();
      // must extend the same-sign run in increasing Z-order without repeats
      if ((v < 0) != (vals.front() < 0) || v <= vals.back()) break;
      vals.push_back(v);
      ++j;
    }
    out.push_back(Letter::from_entries(vals));
    i = j;
  }
  return out;
}

}  // namespace hourglass
