#include <catch2/catch_amalgamated.hpp>

#include "hourglass/words.hpp"

using namespace hourglass;

namespace {
const char* kWordS = "1 2 -4 1 3 4 2 -3 -2 3 4 -1";  // running example word
}

TEST_CASE("letter parsing and formatting") {
  CHECK(parse_letter("3").value() == 3);
  CHECK(parse_letter("-3").value() == -3);
  CHECK(parse_letter("{1,3}").entries() == std::vector<int>{1, 3});
  CHECK(parse_letter("{-2,-4}").entries() == std::vector<int>{-4, -2});
  CHECK(format_letter(parse_letter("{-2,-4}")) == "{-4,-2}");
  CHECK(format_word(parse_word(kWordS)) == kWordS);
  CHECK_THROWS_AS(parse_letter("{1,-2}"), ValidationError);
  CHECK_THROWS_AS(parse_letter("{}"), ValidationError);
  CHECK_THROWS_AS(parse_letter("5"), ValidationError);
  CHECK_THROWS_AS(parse_letter("0"), ValidationError);
  CHECK_THROWS_AS(parse_letter("{1,1}"), ValidationError);
  CHECK_THROWS_AS(parse_letter("x"), ValidationError);
}

TEST_CASE("lattice classification") {
  CHECK(classify_word(parse_word("1 2 3 4")) == LatticeClass::BalancedLattice);
  CHECK(classify_word(parse_word("1 -2")) == LatticeClass::NotLattice);
  CHECK(classify_word(parse_word("1 2")) == LatticeClass::Lattice);
  CHECK(classify_word(parse_word(kWordS)) == LatticeClass::BalancedLattice);
  CHECK(classify_word(parse_word("{1,2,3,4}")) == LatticeClass::BalancedLattice);
  CHECK(classify_word(Word{}) == LatticeClass::BalancedLattice);
}

TEST_CASE("oscillization") {
  CHECK(format_word(oscillize(parse_word("{1,2} -1"))) == "1 2 -1");
  CHECK(format_word(oscillize(parse_word("{-1,-2}"))) == "-2 -1");
  Word w = parse_word(kWordS);
  CHECK(oscillize(w) == w);  // oscillating words are fixed points
}

TEST_CASE("tlex and grevlex") {
  CHECK(tilde(1) == 1);
  CHECK(tilde(-4) == 1);
  CHECK(tilde(-1) == 4);
  CHECK(tlex_compare(parse_word("1 2"), parse_word("2 1")) ==
        std::strong_ordering::less);
  CHECK(tlex_compare(parse_word("1 -4"), parse_word("-4 1")) ==
        std::strong_ordering::equal);  // same tilde image
  CHECK(grevlex_compare(parse_word("1 2 3 4"), parse_word("1 2 4 3")) ==
        std::strong_ordering::greater);
  CHECK(grevlex_compare(parse_word("1 -1"), parse_word("1 2 3 4")) ==
        std::strong_ordering::less);  // lower degree first
}

TEST_CASE("involutions") {
  CHECK(format_word(varpi(parse_word("1"))) == "-4");
  CHECK(format_word(tau(parse_word("1 2"))) == "-2 -1");
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Word w = random_balanced_word(2 * (1 + trial % 8), rng);
    CHECK(tau(tau(w)) == w);
    CHECK(varpi(varpi(w)) == w);
    CHECK(epsilon(epsilon(w)) == w);
    CHECK(tau(w) == epsilon(varpi(w)));
    // varpi fixes the tilde image
    CHECK(tlex_compare(w, varpi(w)) == std::strong_ordering::equal);
  }
}

TEST_CASE("descents") {
  auto d = descents(parse_word("1 2 3 4"));
  CHECK(d == std::vector<int>{1, 2, 3});
  CHECK(descents(parse_word("1 -1")).empty());
  CHECK(descents(parse_word("-2 -1")) == std::vector<int>{1});
}

TEST_CASE("balance points") {
  auto js = balance_points(parse_word(kWordS));
  CHECK(js == std::array<int, 4>{1, 2, 5, 8});
  CHECK(balance_points(parse_word("1 2 3 4")) == std::array<int, 4>{1, 2, 3, 4});
  CHECK_THROWS_AS(balance_points(parse_word("1 2")), ValidationError);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Word w = random_balanced_oscillating_word(2 * (1 + trial % 8), rng);
    auto j = balance_points(w);
    CHECK(j[0] == 1);
    CHECK(j[1] >= 2);
    CHECK(j[0] <= j[1]);
    CHECK(j[1] <= j[2]);
    CHECK(j[2] <= j[3]);
  }
}

TEST_CASE("crystal operators") {
  CHECK(format_word(*crystal_e(parse_word("2"), 1)) == "1");
  CHECK(!crystal_f(parse_word("1 2"), 1).has_value());
  auto v1 = crystal_e(parse_word("-3 2 4"), 1);
  REQUIRE(v1.has_value());
  CHECK(format_word(*v1) == "-3 1 4");
  auto v2 = crystal_e(*v1, 3);
  REQUIRE(v2.has_value());
  CHECK(format_word(*v2) == "-3 1 3");
  auto d1 = crystal_f(parse_word("-3 2 4"), 2);
  REQUIRE(d1.has_value());
  CHECK(format_word(*d1) == "-2 2 4");

  std::mt19937 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    Word w = random_balanced_oscillating_word(2 * (1 + trial % 7), rng);
    for (int i = 1; i <= 3; ++i) {
      if (auto up = crystal_e(w, i)) {
        auto back = crystal_f(*up, i);
        REQUIRE(back.has_value());
        CHECK(*back == w);
      }
      if (auto down = crystal_f(w, i)) {
        auto back = crystal_e(*down, i);
        REQUIRE(back.has_value());
        CHECK(*back == w);
      }
    }
  }
}

TEST_CASE("random word generators produce lattice words") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Word o = random_balanced_oscillating_word(2 * (1 + trial % 9), rng);
    CHECK(classify_word(o) == LatticeClass::BalancedLattice);
    CHECK(is_oscillating(o));
    Word g = random_balanced_word(2 * (1 + trial % 9), rng);
    CHECK(classify_word(g) == LatticeClass::BalancedLattice);
    CHECK(classify_word(oscillize(g)) == LatticeClass::BalancedLattice);
  }
}
