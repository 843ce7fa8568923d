#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "hourglass/labeling.hpp"
#include "hourglass/moves.hpp"

using namespace hourglass;

namespace {

/// Boundary-2-hourglass graph of type (2,1,1) around a single white vertex.
Graph hourglass_claw_graph() {
  Graph h;
  h.nb = 3;
  h.verts = {{1, {}}, {1, {}}, {1, {}}, {-1, {}}};
  h.edges = {{0, 3, 2}, {1, 3, 1}, {2, 3, 1}};
  h.verts[0].rot = {{0, 1}, {0, 0}};
  h.verts[1].rot = {{1, 0}};
  h.verts[2].rot = {{2, 0}};
  h.verts[3].rot = {{2, 0}, {1, 0}, {0, 1}, {0, 0}};
  return h;
}

}  // namespace

TEST_CASE("separation labeling of the star graph") {
  Graph g = star_graph(4);
  ProperLabeling lab = separation_labeling(g);
  for (int e = 0; e < 4; ++e) CHECK(lab.mask[e] == 1 << e);
  CHECK(separation_word(g) == parse_word("1 2 3 4"));
  CHECK(boundary_sep_from_trips(g) == parse_word("1 2 3 4"));
  CHECK(word_of(tableau_of(g)) == parse_word("1 2 3 4"));
}

TEST_CASE("proper labelings of the star graph") {
  auto labs = enumerate_proper_labelings(star_graph(4));
  CHECK(labs.size() == 24);
  // the separation word is the unique tlex-minimal boundary word
  Word sep = separation_word(star_graph(4));
  int attained = 0;
  for (const auto& l : labs) {
    Word w = labeling_boundary_word(star_graph(4), l);
    auto cmp = tlex_compare(sep, w);
    CHECK(cmp <= 0);
    if (cmp == std::strong_ordering::equal) ++attained;
  }
  CHECK(attained == 1);
}

TEST_CASE("separation word of the benzene graphs") {
  Word expect = parse_word("1 -4 2 -2 4 -1");
  for (bool ch : {false, true}) {
    Graph g = benzene_graph(ch);
    CHECK(separation_word(g) == expect);
    CHECK(boundary_sep_from_trips(g) == expect);
    // unique tlex-minimal labeling over the full enumeration
    auto labs = enumerate_proper_labelings(g);
    CHECK(!labs.empty());
    int attained = 0;
    for (const auto& l : labs) {
      Word w = labeling_boundary_word(g, l);
      CHECK(tlex_compare(expect, w) <= 0);
      if (w == expect) ++attained;
    }
    CHECK(attained == 1);
  }
}

TEST_CASE("separation labeling through boundary hourglasses") {
  Graph h = hourglass_claw_graph();
  ProperLabeling lab = separation_labeling(h);
  Word w = separation_word(h);
  CHECK(w == boundary_sep_from_trips(h));
  CHECK(is_balanced_lattice(w));
  // the 2-hourglass carries the union of its claw labels
  CHECK(std::popcount(static_cast<unsigned>(lab.mask[0])) == 2);
  // boundary word: col * sep with degrees 2,1,1
  CHECK(word_type(w) == std::vector<int>{2, 1, 1});
}

TEST_CASE("tableau map is equivariant for rotation and reflection") {
  for (const Graph& g : {star_graph(4), benzene_graph(false),
                         benzene_graph(true)}) {
    FluctuatingTableau t = tableau_of(g);
    CHECK(word_of(tableau_of(rotate_graph(g))) ==
          word_of(promote_jdt(t)));
    CHECK(word_of(tableau_of(reflect_graph(g))) == epsilon(word_of(t)));
  }
}

TEST_CASE("separation word is constant on move classes") {
  for (const Graph& g : {benzene_graph(false), star_graph(4)}) {
    Word sep = separation_word(g);
    for (const Graph& m : move_class(g)) CHECK(separation_word(m) == sep);
  }
}

TEST_CASE("coinversion of simple block sequences") {
  CHECK(coinversion({1 << 0, 1 << 1}) == 1);  // ({1},{2})
  CHECK(coinversion({1 << 1, 1 << 0}) == 0);  // ({2},{1})
  CHECK(coinversion({1 << 0, 1 << 1, 1 << 2, 1 << 3}) == 6);
}

TEST_CASE("labeling sign depends only on the boundary word") {
  for (const Graph& g : {star_graph(4), benzene_graph(false),
                         benzene_graph(true)}) {
    std::map<std::string, int> sign_of_word;
    for (const ProperLabeling& l : enumerate_proper_labelings(g)) {
      auto [coin, sign] = coinversion_and_sign(g, l);
      CHECK(sign == (coin % 2 ? -1 : 1));
      std::string key = format_word(labeling_boundary_word(g, l));
      auto [it, fresh] = sign_of_word.emplace(key, sign);
      CHECK(it->second == sign);
    }
  }
}

TEST_CASE("separation labeling rejects non-reduced graphs") {
  // two stacked 2-cycles: valid graph, trips double-cross
  Graph g;
  g.nb = 4;
  g.verts = {{1, {}}, {1, {}}, {-1, {}}, {-1, {}}, {-1, {}}, {1, {}}};
  g.edges = {{0, 4, 1}, {1, 4, 1}, {2, 5, 1}, {3, 5, 1}, {4, 5, 1}, {4, 5, 1}};
  g.verts[0].rot = {{0, 0}};
  g.verts[1].rot = {{1, 0}};
  g.verts[2].rot = {{2, 0}};
  g.verts[3].rot = {{3, 0}};
  g.verts[4].rot = {{0, 0}, {4, 0}, {5, 0}, {1, 0}};
  g.verts[5].rot = {{3, 0}, {5, 0}, {4, 0}, {2, 0}};
  if (!validate_diagnostic(g).has_value() && !is_fully_reduced(g))
    CHECK_THROWS_AS(separation_labeling(g), ValidationError);
}
