/**
 * @brief Web invariants: exact Laurent arithmetic in q, the q=1 monomial
 *        expansion over proper labelings, an independent Levi-Civita tensor
 *        oracle, leading terms and unitriangularity, and the web basis.
 *
 * The invariant of a web is a signed sum of boundary monomials over its
 * proper labelings; the sign at each labeling is the parity of the total
 * coinversion number, read clockwise from the tag at every internal vertex.
 * Moving a tag across an edge of multiplicity k multiplies the invariant by
 * (-1)^{k(4-k)}.  The q=1 specialization is checked against a classical
 * tensor contraction in which every internal vertex is a Levi-Civita symbol.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hourglass/growth.hpp"
#include "hourglass/labeling.hpp"

namespace hourglass {

// ---------------------------------------------------------------------------
// Laurent polynomials in q with integer coefficients
// ---------------------------------------------------------------------------

class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(long long constant) {
    if (constant != 0) c_[0] = constant;
  }
  static LaurentPoly monomial(int exp, long long coeff = 1) {
    LaurentPoly p;
    if (coeff != 0) p.c_[exp] = coeff;
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  const std::map<int, long long>& terms() const { return c_; }

  long long coeff(int exp) const {
    auto it = c_.find(exp);
    return it == c_.end() ? 0 : it->second;
  }
  int max_exp() const {
    if (c_.empty()) throw ValidationError("degree of zero polynomial");
    return c_.rbegin()->first;
  }
  int min_exp() const {
    if (c_.empty()) throw ValidationError("degree of zero polynomial");
    return c_.begin()->first;
  }

  /// Value at q = 1 (the sum of all coefficients).
  long long at_q1() const {
    long long s = 0;
    for (auto& [e, c] : c_) s += c;
    return s;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (auto& [e, c] : o.c_) add(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (auto& [e, c] : o.c_) add(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    return a += b;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
    return a -= b;
  }
  friend LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly r;
    for (auto& [e, c] : a.c_) r.c_[e] = -c;
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (auto& [ea, ca] : a.c_)
      for (auto& [eb, cb] : b.c_) r.add(ea + eb, ca * cb);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, long long s) {
    LaurentPoly r;
    if (s != 0)
      for (auto& [e, c] : a.c_) r.c_[e] = c * s;
    return r;
  }
  bool operator==(const LaurentPoly&) const = default;

  /// Exact quotient, or nullopt when the division leaves a remainder.
  static std::optional<LaurentPoly> divide(LaurentPoly a,
                                           const LaurentPoly& b) {
    if (b.is_zero()) throw ValidationError("division by zero polynomial");
    LaurentPoly quot;
    const int blead = b.max_exp();
    const long long bc = b.c_.rbegin()->second;
    while (!a.is_zero()) {
      const int e = a.max_exp() - blead;
      const long long c = a.c_.rbegin()->second;
      if (c % bc != 0) return std::nullopt;
      LaurentPoly t = monomial(e, c / bc);
      quot += t;
      a -= t * b;
    }
    return quot;
  }

  /// Canonical q-descending rendering, e.g. "q^2 - 1 + q^-2".
  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      auto [e, c] = *it;
      if (s.empty()) {
        if (c < 0) s += "-";
      } else {
        s += c < 0 ? " - " : " + ";
      }
      const long long a = c < 0 ? -c : c;
      if (e == 0) {
        s += std::to_string(a);
      } else {
        if (a != 1) s += std::to_string(a) + "*";
        s += "q";
        if (e != 1) s += "^" + std::to_string(e);
      }
    }
    return s;
  }

 private:
  void add(int exp, long long coeff) {
    auto it = c_.emplace(exp, 0).first;
    it->second += coeff;
    if (it->second == 0) c_.erase(it);
  }
  std::map<int, long long> c_;  // exponent -> coefficient, zeros erased
};

/// [k]_q = (q^k - q^-k)/(q - q^-1) = q^{k-1} + q^{k-3} + ... + q^{1-k}.
inline LaurentPoly quantum_integer(int k) {
  LaurentPoly p;
  for (int e = k - 1; e >= 1 - k; e -= 2) p += LaurentPoly::monomial(e);
  return p;
}

/// Gaussian binomial [n choose k]_q = [n]!/([k]![n-k]!), balanced form.
inline LaurentPoly quantum_binomial(int n, int k) {
  if (k < 0 || k > n) return LaurentPoly();
  LaurentPoly num(1), den(1);
  for (int i = 0; i < k; ++i) {
    num = num * quantum_integer(n - i);
    den = den * quantum_integer(i + 1);
  }
  auto q = LaurentPoly::divide(num, den);
  if (!q) throw ValidationError("quantum binomial division failed");
  return *q;
}

// ---------------------------------------------------------------------------
// q=1 web polynomials
// ---------------------------------------------------------------------------

/// The q=1 invariant as a multilinear polynomial: each monomial picks one
/// letter (edge label) per boundary position; keys are formatted boundary
/// words.
struct WebPolynomial {
  std::map<std::string, long long> coeff;

  void add(const std::string& word, long long c) {
    if (c == 0) return;
    auto it = coeff.emplace(word, 0).first;
    it->second += c;
    if (it->second == 0) coeff.erase(it);
  }
  WebPolynomial& operator+=(const WebPolynomial& o) {
    for (auto& [w, c] : o.coeff) add(w, c);
    return *this;
  }
  friend WebPolynomial operator*(const WebPolynomial& p, long long s) {
    WebPolynomial r;
    if (s != 0)
      for (auto& [w, c] : p.coeff) r.coeff[w] = c * s;
    return r;
  }
  bool operator==(const WebPolynomial&) const = default;
  bool empty() const { return coeff.empty(); }
};

/// Sum over proper labelings of sign * x_{boundary word}, where the sign is
/// the coinversion parity under the given tags (canonical when omitted).
inline WebPolynomial evaluate_q1(const Graph& g,
                                 const std::vector<int>* tag_gaps = nullptr) {
  const std::vector<int> gaps = tag_gaps ? *tag_gaps : canonical_tag_gaps(g);
  WebPolynomial p;
  visit_proper_labelings(g, [&](const ProperLabeling& lab) {
    int coin = 0;
    for (int v = g.nb; v < g.num_vertices(); ++v)
      coin += coinversion(blocks_clockwise_from_tag(g, lab, v, gaps[v - g.nb]));
    p.add(format_word(labeling_boundary_word(g, lab)), coin % 2 ? -1 : 1);
    return true;
  });
  return p;
}

namespace detail {

/// Sign of the permutation obtained by concatenating the given label blocks
/// (each read in increasing order): the Levi-Civita symbol of the partition.
inline int epsilon_sign(const std::vector<int>& blocks) {
  std::vector<int> seq;
  for (int m : blocks)
    for (int a = 1; a <= kRank; ++a)
      if (m >> (a - 1) & 1) seq.push_back(a);
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

}  // namespace detail

/// Independent classical oracle: contracts the web as a tensor network where
/// every internal vertex is a Levi-Civita symbol applied to its labels read
/// clockwise from the tag.  Must agree with evaluate_q1 exactly.
inline WebPolynomial tensor_oracle_q1(
    const Graph& g, const std::vector<int>* tag_gaps = nullptr) {
  const std::vector<int> gaps = tag_gaps ? *tag_gaps : canonical_tag_gaps(g);
  const int ne = g.num_edges();
  WebPolynomial p;
  std::vector<int> label(ne, 0);
  std::vector<int> used(g.num_vertices(), 0);
  std::function<void(int)> go = [&](int e) {
    if (e == ne) {
      // partition completeness at every internal vertex
      for (int v = g.nb; v < g.num_vertices(); ++v)
        if (used[v] != kFullMask) return;
      int sign = 1;
      ProperLabeling lab{label};
      for (int v = g.nb; v < g.num_vertices(); ++v)
        sign *= detail::epsilon_sign(
            blocks_clockwise_from_tag(g, lab, v, gaps[v - g.nb]));
      p.add(format_word(labeling_boundary_word(g, lab)), sign);
      return;
    }
    const GEdge& ed = g.edges[e];
    for (int m = 0; m <= kFullMask; ++m) {
      if (std::popcount(static_cast<unsigned>(m)) != ed.mult) continue;
      bool ok = true;
      for (int w : {ed.u, ed.v})
        if (!g.is_boundary(w) && (used[w] & m)) ok = false;
      if (!ok) continue;
      label[e] = m;
      for (int w : {ed.u, ed.v})
        if (!g.is_boundary(w)) used[w] |= m;
      go(e + 1);
      for (int w : {ed.u, ed.v})
        if (!g.is_boundary(w)) used[w] &= ~m;
    }
  };
  go(0);
  return p;
}

// ---------------------------------------------------------------------------
// Leading terms and unitriangularity
// ---------------------------------------------------------------------------

/// Leading monomial of a contracted fully reduced web under canonical tags:
/// the separation word, with the sign of its unique attaining labeling.
inline std::pair<Word, int> leading_term(const Graph& g) {
  Word sep = separation_word(g);
  auto [coin, sign] = coinversion_and_sign(g, separation_labeling(g));
  return {sep, sign};
}

/// Exhaustively verifies that the separation word is attained by exactly one
/// proper labeling and that every other boundary word is tlex-greater.
inline bool check_unitriangular(const Graph& g) {
  const Word sep = separation_word(g);
  int attained = 0;
  bool ok = true;
  visit_proper_labelings(g, [&](const ProperLabeling& lab) {
    Word w = labeling_boundary_word(g, lab);
    auto cmp = tlex_compare(sep, w);
    if (cmp == std::strong_ordering::greater) ok = false;
    if (w == sep) ++attained;
    return ok;
  });
  return ok && attained == 1;
}

/// Rank over the rationals of the span of the given polynomials, by
/// fraction-free Gaussian elimination on the monomial-coefficient matrix.
inline int rank_over_rationals(const std::vector<WebPolynomial>& rows) {
  std::map<std::string, int> col;
  for (const WebPolynomial& p : rows)
    for (auto& [w, c] : p.coeff) col.emplace(w, static_cast<int>(col.size()));
  const int m = static_cast<int>(rows.size()), n = static_cast<int>(col.size());
  std::vector<std::vector<long long>> a(m, std::vector<long long>(n, 0));
  for (int i = 0; i < m; ++i)
    for (auto& [w, c] : rows[i].coeff) a[i][col[w]] = c;
  int rank = 0;
  long long prev = 1;
  for (int j = 0; j < n && rank < m; ++j) {
    int piv = -1;
    for (int i = rank; i < m; ++i)
      if (a[i][j] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    for (int i = rank + 1; i < m; ++i) {
      for (int k = j + 1; k < n; ++k)
        a[i][k] = (a[rank][j] * a[i][k] - a[i][j] * a[rank][k]) / prev;
      a[i][j] = 0;
    }
    prev = a[rank][j];
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// The web basis
// ---------------------------------------------------------------------------

/// One top fully reduced web per move class of the given type, indexed by
/// the balanced lattice words of that type (their separation words).
inline std::vector<Graph> basis_webs(const std::vector<int>& type) {
  std::vector<Graph> out;
  for (const Word& w : enumerate_balanced_words(type))
    out.push_back(top_element(grow(w).graph));
  return out;
}

}  // namespace hourglass
