#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "hourglass/growth.hpp"

using namespace hourglass;

namespace {

bool has_rule(const std::string& name) {
  for (const GrowthRule& r : rule_table())
    if (r.name() == name) return true;
  return false;
}

}  // namespace

TEST_CASE("rewrite table contents") {
  const auto& table = rule_table();
  CHECK(table.size() == 32);
  // the two caps come first
  CHECK(table[0].cap);
  CHECK(table[1].cap);
  CHECK(table[0].name() == "1 -1 -> ()");
  CHECK(table[1].name() == "-4 4 -> ()");
  for (std::size_t i = 2; i < table.size(); ++i) CHECK(!table[i].cap);
  // representative crossing rules of each kind
  CHECK(has_rule("2 3 -> -1 -4"));   // sink
  CHECK(has_rule("-3 -2 -> 4 1"));   // source
  CHECK(has_rule("1 2 -> 2 1"));     // transmit, slide
  CHECK(has_rule("1 2 -> -3 -4"));   // tlex tie of the slide
  CHECK(has_rule("2 -2 -> -1 1"));   // left-in transmit
  CHECK(has_rule("-4 2 -> 2 -4"));   // right-in transmit
  CHECK(has_rule("1 4 -> 4 1"));
  // redundant degenerations are excluded
  CHECK(!has_rule("1 -1 -> -2 2"));
  CHECK(!has_rule("-4 4 -> 3 -3"));
  CHECK(!has_rule("1 4 -> -2 -3"));
  CHECK(!has_rule("-4 -1 -> 3 2"));
  // no rule may decrease the word tlex-wise or keep its leading tilde value
  for (const GrowthRule& r : table) {
    if (r.cap) continue;
    CHECK(tilde(r.a.value()) < tilde(r.c.value()));
    Word top = {r.a, r.b}, bot = {r.c, r.d};
    CHECK(tlex_compare(bot, top) == std::strong_ordering::greater);
  }
}

TEST_CASE("growth of the star word") {
  GrowthResult res = grow(parse_word("1 2 3 4"));
  CHECK(canonical_key(res.graph) == canonical_key(star_graph(4)));
  REQUIRE(res.trace.size() == 3);
  CHECK(res.trace[0].rule == "2 3 -> -1 -4");
  CHECK(res.trace[0].position == 1);
  CHECK(res.trace[1].rule == "1 -1 -> ()");
  CHECK(res.trace[2].rule == "-4 4 -> ()");
  for (int e = 0; e < 4; ++e) CHECK(res.labeling.mask[e] == 1 << e);
}

TEST_CASE("growth of the benzene word lands in the benzene move class") {
  GrowthResult res = grow(parse_word("1 -4 2 -2 4 -1"));
  CHECK(separation_word(res.graph) == parse_word("1 -4 2 -2 4 -1"));
  std::set<std::string> keys;
  for (const Graph& m : move_class(benzene_graph(false)))
    keys.insert(canonical_key(m));
  CHECK(keys.count(canonical_key(res.graph)) == 1);
}

TEST_CASE("tableau of the grown graph is the input tableau") {
  // a 12-column fluctuating word exercising hourglass letters and caps
  Word w = parse_word("1 1 -4 2 1 -3 {-4,-3,-2,-1} 3 -1 -1 {-2,-1} 4");
  GrowthResult res = grow(w);
  CHECK(separation_word(res.graph) == w);
  CHECK(word_of(tableau_of(res.graph)) == w);
  CHECK(is_fully_reduced(res.graph));
  CHECK(is_contracted(res.graph));
  CHECK(graph_type(res.graph) == word_type(w));
}

TEST_CASE("trips of a grown standard-word graph") {
  Word w = parse_word("1 1 2 3 2 1 2 1 3 3 4 4 4 2 3 4");
  GrowthResult res = grow(w);
  CHECK(separation_word(res.graph) == w);
  TripPerms t = trip_perms(res.graph);
  CHECK(t.perm[0][0] == 4);
  CHECK(t.perm[1][0] == 9);
  CHECK(t.perm[2][0] == 12);
  // trip permutations realize the promotion permutations everywhere
  PromotionData p = promotion_permutations(tableau_from_word(w));
  for (int a = 0; a < kRank - 1; ++a)
    for (int i = 0; i < res.graph.nb; ++i)
      CHECK(t.perm[a][i] == p.perms[a][i] - 1);
}

TEST_CASE("growth round-trips every word of several small types") {
  for (const std::vector<int>& type : std::vector<std::vector<int>>{
           {1, 1, 1, 1},
           {1, -1, 1, -1},
           {2, 2, -2, -2},
           {1, 2, 3, -3, -2, -1},
           {3, 1, -2, -2},
           {4, 4},
           {1, 1, -1, -1, 1, -1}}) {
    for (const Word& w : enumerate_balanced_words(type)) {
      GrowthResult res = grow(w);
      CHECK(separation_word(res.graph) == w);
      CHECK(labeling_boundary_word(res.graph, res.labeling) == w);
      CHECK(is_fully_reduced(res.graph));
      CHECK(is_contracted(res.graph));
      CHECK(graph_type(res.graph) == word_type(w));
    }
  }
}

TEST_CASE("growth of random balanced words") {
  std::mt19937 rng(20260825);
  for (int trial = 0; trial < 60; ++trial) {
    Word w = random_balanced_word(4 + 2 * (trial % 6), rng);
    GrowthResult res = grow(w);
    CHECK(separation_word(res.graph) == w);
    CHECK(is_fully_reduced(res.graph));
  }
}

TEST_CASE("randomized growth reaches the same move class") {
  Word w = parse_word("1 2 1 3 2 4 3 4");
  GrowthResult det = grow(w);
  std::set<std::string> keys;
  for (const Graph& m : move_class(det.graph)) keys.insert(canonical_key(m));
  for (unsigned seed : {1u, 7u, 42u}) {
    GrowthResult r = randomized_grow(w, seed);
    CHECK(separation_word(r.graph) == w);
    CHECK(keys.count(canonical_key(r.graph)) == 1);
  }
}

TEST_CASE("growth rejects bad words") {
  CHECK_THROWS_AS(grow(parse_word("2 1")), ValidationError);       // not lattice
  CHECK_THROWS_AS(grow(parse_word("1 2 -2")), ValidationError);    // not balanced
  CHECK_THROWS_AS(grow(parse_word("{1,3} {-3,-1}")), ValidationError);
  CHECK(grow(Word{}).trace.empty());
}
