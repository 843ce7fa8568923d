#include <catch2/catch_amalgamated.hpp>

#include "hourglass/tableaux.hpp"

using namespace hourglass;

namespace {
const char* kWordS = "1 2 -4 1 3 4 2 -3 -2 3 4 -1";
const char* kWordT = "{1,2} -4 {1,3,4} 2 {-3,-2} {3,4} -1";
const char* kWordPS = "1 -4 1 2 4 2 -4 -2 3 4 -1 4";

std::vector<int> cycles_to_oneline(
    const std::vector<std::vector<int>>& cycles, int n) {
  std::vector<int> p(n + 1);
  for (int i = 1; i <= n; ++i) p[i] = i;
  for (const auto& c : cycles)
    for (std::size_t k = 0; k < c.size(); ++k) p[c[k]] = c[(k + 1) % c.size()];
  return p;
}
}  // namespace

TEST_CASE("tableau from word roundtrip") {
  auto t = tableau_from_word(parse_word("1 2 3 4"));
  CHECK(t.shapes.back() == Weight{1, 1, 1, 1});
  CHECK(t.rectangular());

  auto tt = tableau_from_word(parse_word(kWordT));
  CHECK(oscillize(tt.letters) == parse_word(kWordS));
  CHECK(tt.rectangular());
  CHECK(tt.shapes.back() == Weight{1, 1, 1, 1});

  CHECK_THROWS_AS(tableau_from_word(parse_word("1 -2")), ValidationError);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    Word w = random_balanced_word(2 * (1 + trial % 8), rng);
    CHECK(word_of(tableau_from_word(w)) == w);
  }
}

TEST_CASE("promotion via balance points") {
  CHECK(format_word(promote_balance(parse_word(kWordS))) == format_word(parse_word(kWordPS)));
  CHECK(format_word(promote_balance(parse_word("1 2 3 4"))) == "1 2 3 4");
}

TEST_CASE("promotion via jeu de taquin agrees with the balance oracle") {
  CHECK(promote_jdt_osc(parse_word(kWordS)) == parse_word(kWordPS));
  std::mt19937 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    Word w = random_balanced_oscillating_word(2 * (1 + trial % 8), rng);
    CHECK(format_word(promote_jdt_osc(w)) == format_word(promote_balance(w)));
  }
}

TEST_CASE("promotion of general type reduces to the oscillating case") {
  auto tt = tableau_from_word(parse_word(kWordT));
  auto pt = promote_jdt(tt);
  Word o = oscillize(tt.letters);
  for (int k = 0; k < 2; ++k) o = promote_jdt_osc(o);  // |c_1| = 2
  CHECK(oscillize(pt.letters) == o);
  std::mt19937 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = tableau_from_word(random_balanced_word(2 * (2 + trial % 6), rng));
    if (!t.rectangular()) continue;
    auto p = promote_jdt(t);
    Word expect = oscillize(t.letters);
    for (int k = 0; k < t.letters.front().degree(); ++k)
      expect = promote_jdt_osc(expect);
    CHECK(oscillize(p.letters) == expect);
  }
}

TEST_CASE("promotion order divides n on small rectangles") {
  auto words = enumerate_balanced_words(std::vector<int>(8, 1));
  CHECK(words.size() == 14);
  for (const Word& w : words) {
    Word cur = w;
    for (int k = 0; k < 8; ++k) cur = promote_jdt_osc(cur);
    CHECK(cur == w);
  }
}

TEST_CASE("evacuation") {
  auto t = tableau_from_word(parse_word(kWordS));
  CHECK(word_of(evacuate(t)) == epsilon(t.letters));
  CHECK(word_of(evacuate(evacuate(t))) == t.letters);
  auto col = tableau_from_word(parse_word("1 2 3 4"));
  CHECK(word_of(evacuate(col)) == col.letters);
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto w = random_balanced_word(2 * (1 + trial % 8), rng);
    auto tr = tableau_from_word(w);
    CHECK(word_of(evacuate(evacuate(tr))) == w);
  }
}

TEST_CASE("promotion permutations of the running example") {
  auto t = tableau_from_word(parse_word(kWordS));
  auto data = promotion_permutations(t);
  auto p1 = cycles_to_oneline({{1, 2, 7, 10, 11, 4, 5, 6, 3, 12, 9, 8}}, 12);
  CHECK(data.perms[0] == std::vector<int>(p1.begin() + 1, p1.end()));
  auto p2 = cycles_to_oneline(
      {{1, 5}, {2, 10}, {3, 9}, {4, 6}, {7, 12}, {8, 11}}, 12);
  CHECK(data.perms[1] == std::vector<int>(p2.begin() + 1, p2.end()));
  auto p3 = cycles_to_oneline({{1, 8, 9, 12, 3, 6, 5, 4, 11, 10, 7, 2}}, 12);
  CHECK(data.perms[2] == std::vector<int>(p3.begin() + 1, p3.end()));

  // single column: prom_i(b) = b + i (mod 4)
  auto col = promotion_permutations(tableau_from_word(parse_word("1 2 3 4")));
  for (int i = 1; i <= 3; ++i)
    for (int b = 1; b <= 4; ++b)
      CHECK(col.perms[i - 1][b - 1] == ((b + i - 1) % 4) + 1);
}

TEST_CASE("promotion permutation identities") {
  std::mt19937 rng(37);
  int tested = 0;
  while (tested < 60) {
    Word w = random_balanced_word(2 * (2 + tested % 6), rng);
    auto t = tableau_from_word(w);
    if (!t.rectangular()) continue;
    ++tested;
    const int N = total_degree(w);
    auto d = promotion_permutations(t);
    // prom_i = prom_{4-i}^{-1}; prom_2 is an involution
    for (int i = 1; i <= 3; ++i)
      for (int b = 1; b <= N; ++b)
        CHECK(d.perms[(kRank - i) - 1][d.perms[i - 1][b - 1] - 1] == b);
    // fixed-point-free
    for (int i = 1; i <= 3; ++i)
      for (int b = 1; b <= N; ++b) CHECK(d.perms[i - 1][b - 1] != b);
    // prom_i(P(T)) = sigma^{-|c_1|} prom_i(T) sigma^{|c_1|}
    auto dp = promotion_permutations(promote_jdt(t));
    const int s = t.letters.front().degree();
    auto sh = [&](int x, int k) { return ((x - 1 + k) % N + N) % N + 1; };
    for (int i = 1; i <= 3; ++i)
      for (int b = 1; b <= N; ++b)
        CHECK(dp.perms[i - 1][b - 1] == sh(d.perms[i - 1][sh(b, s) - 1], -s));
    // prom_i(evac(T)) = w0 prom_{4-i}(T) w0
    auto de = promotion_permutations(evacuate(t));
    for (int i = 1; i <= 3; ++i)
      for (int b = 1; b <= N; ++b)
        CHECK(de.perms[i - 1][b - 1] ==
              N + 1 - d.perms[(kRank - i) - 1][N - b]);
  }
}

TEST_CASE("cyclic monotonicity") {
  CHECK(cyclic_monotonicity_check(tableau_from_word(parse_word("1 2 3 4"))));
  CHECK(cyclic_monotonicity_check(tableau_from_word(parse_word(kWordS))));
  std::mt19937 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    Word w = random_balanced_oscillating_word(2 * (2 + trial % 6), rng);
    CHECK(cyclic_monotonicity_check(tableau_from_word(w)));
  }
}

TEST_CASE("tableau rendering is stable") {
  auto t = tableau_from_word(parse_word("1 2 3 4"));
  CHECK(render_tableau(t) ==
        "row 1: | [1]\nrow 2: | [2]\nrow 3: | [3]\nrow 4: | [4]\n");
}
