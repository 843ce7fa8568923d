#include <catch2/catch_amalgamated.hpp>

#include "hourglass/graph.hpp"
#include "hourglass/tableaux.hpp"

using namespace hourglass;

TEST_CASE("star graph validates and trips shift by a") {
  Graph g = star_graph(4);
  CHECK(!validate_diagnostic(g).has_value());
  CHECK(graph_type(g) == std::vector<int>{1, 1, 1, 1});
  for (int a = 1; a <= 3; ++a)
    for (int i = 0; i < 4; ++i) {
      auto p = trip_strand(g, a, i);
      CHECK(p.start == i);
      CHECK(p.end == (i + a) % 4);
      CHECK(p.steps.size() == 1);
    }
}

TEST_CASE("benzene graph: trips match promotion, chirality-independent") {
  Graph g0 = benzene_graph(false);
  Graph g1 = benzene_graph(true);
  CHECK(!validate_diagnostic(g0).has_value());
  CHECK(!validate_diagnostic(g1).has_value());
  CHECK(graph_type(g0) == std::vector<int>{1, -1, 1, -1, 1, -1});
  auto t0 = trip_perms(g0);
  CHECK(t0 == trip_perms(g1));
  // trip_1 and trip_3 are inverse; trip_2 is an involution
  for (int i = 0; i < 6; ++i) {
    CHECK(t0.perm[2][t0.perm[0][i]] == i);
    CHECK(t0.perm[1][t0.perm[1][i]] == i);
  }
  // trip_a agrees with the promotion permutation prom_a of the boundary word
  auto data =
      promotion_permutations(tableau_from_word(parse_word("1 -4 2 -2 4 -1")));
  for (int a = 1; a <= 3; ++a)
    for (int i = 0; i < 6; ++i)
      CHECK(t0.perm[a - 1][i] == data.perms[a - 1][i] - 1);
}

TEST_CASE("trip perms of the star match the single column word") {
  auto t = trip_perms(star_graph(4));
  auto data = promotion_permutations(tableau_from_word(parse_word("1 2 3 4")));
  for (int a = 1; a <= 3; ++a)
    for (int i = 0; i < 4; ++i)
      CHECK(t.perm[a - 1][i] == data.perms[a - 1][i] - 1);
}

TEST_CASE("validation rejects malformed graphs") {
  Graph g = star_graph(4);
  g.verts[4].color = 1;  // same color as neighbors
  CHECK(validate_diagnostic(g).has_value());

  g = star_graph(4);
  std::swap(g.verts[4].rot[0], g.verts[4].rot[2]);  // non-planar rotation
  auto d = validate_diagnostic(g);
  REQUIRE(d.has_value());
  CHECK(d->find("planar") != std::string::npos);

  g = star_graph(4);
  g.edges[0].mult = 2;  // slot count mismatch
  CHECK(validate_diagnostic(g).has_value());

  g = star_graph(4);
  g.verts[0].rot.push_back({1, 0});  // boundary simple degree 2
  CHECK(validate_diagnostic(g).has_value());
}

TEST_CASE("isolated component detection") {
  Graph g = star_graph(4);
  CHECK(!has_isolated_components(g));
  // add a floating 2-cycle of internal vertices (double edge pair)
  int x = g.num_vertices(), y = x + 1;
  g.verts.push_back({1, {}});
  g.verts.push_back({-1, {}});
  int e1 = g.num_edges(), e2 = e1 + 1;
  g.edges.push_back({x, y, 2});
  g.edges.push_back({x, y, 2});
  g.verts[x].rot = {{e1, 1}, {e1, 0}, {e2, 1}, {e2, 0}};
  g.verts[y].rot = {{e1, 1}, {e1, 0}, {e2, 1}, {e2, 0}};
  CHECK(has_isolated_components(g));
}

TEST_CASE("oscillization splits boundary hourglasses into claws") {
  // star with one doubled boundary edge: contract two boundary claw edges
  // into a 2-hourglass and check osc() restores simple boundary edges
  Graph g = benzene_graph(false);
  Graph o = oscillize_graph(g);
  CHECK(o.nb == 6);  // already oscillating type: unchanged boundary count
  CHECK(canonical_key(o) == canonical_key(g));

  // a 2-hourglass boundary graph: two boundary vertices joined through a
  // single path b0 =2= v - w =2= b1 is not degree-valid; instead test via a
  // graph with a boundary 2-hourglass built directly:
  Graph h;
  h.nb = 4;
  // b0 black deg 2 (hourglass), b1 black deg 1, b2 black deg 1, b3 white? --
  // simplest: two internal vertices u (white) and x (black):
  // b0 =2= u, b1 - u, b2 - u ... u needs degree 4: b0 =2= u, b1 - u, b2 - u
  h.verts.push_back({1, {}});   // b0, deg 2
  h.verts.push_back({1, {}});   // b1
  h.verts.push_back({1, {}});   // b2
  h.verts.push_back({-1, {}});  // unused boundary? keep type valid: use nb=3
  h.verts.pop_back();
  h.nb = 3;
  h.verts.push_back({-1, {}});  // u, internal white, id 3
  h.edges.push_back({0, 3, 2});
  h.edges.push_back({1, 3, 1});
  h.edges.push_back({2, 3, 1});
  h.verts[0].rot = {{0, 1}, {0, 0}};
  h.verts[1].rot = {{1, 0}};
  h.verts[2].rot = {{2, 0}};
  h.verts[3].rot = {{2, 0}, {1, 0}, {0, 1}, {0, 0}};
  CHECK(!validate_diagnostic(h).has_value());
  CHECK(graph_type(h) == std::vector<int>{2, 1, 1});

  Graph ho = oscillize_graph(h);
  CHECK(!validate_diagnostic(ho).has_value());
  CHECK(ho.nb == 4);
  CHECK(is_oscillating_type(ho));
  // the claw preserves planarity and trips behave like the 4-star
  auto t = trip_perms(ho);
  for (int a = 1; a <= 3; ++a)
    for (int i = 0; i < 4; ++i) CHECK(t.perm[a - 1][i] == (i + a) % 4);
}

TEST_CASE("rotation and reflection are rigid motions") {
  for (bool ch : {false, true}) {
    Graph g = benzene_graph(ch);
    Graph r = g;
    for (int k = 0; k < 6; ++k) r = rotate_graph(r);
    CHECK(canonical_key(r) == canonical_key(g));
    CHECK(canonical_key(reflect_graph(reflect_graph(g))) == canonical_key(g));
    CHECK(!validate_diagnostic(rotate_graph(g)).has_value());
    CHECK(!validate_diagnostic(reflect_graph(g)).has_value());
    // trips of the rotated graph are conjugate by the boundary shift
    auto t = trip_perms(g);
    auto tr = trip_perms(rotate_graph(g));
    const int n = g.nb;
    for (int a = 1; a <= 3; ++a)
      for (int i = 0; i < n; ++i)
        CHECK(tr.perm[a - 1][i] == (t.perm[a - 1][(i + 1) % n] + n - 1) % n);
    // reflection conjugates trip_a by the boundary reversal, swapping a, 4-a
    auto tf = trip_perms(reflect_graph(g));
    for (int a = 1; a <= 3; ++a)
      for (int i = 0; i < n; ++i)
        CHECK(tf.perm[a - 1][n - 1 - i] ==
              n - 1 - t.perm[(kRank - a) - 1][i]);
  }
}

TEST_CASE("JSON round trip") {
  for (const Graph& g :
       {star_graph(4), benzene_graph(false), benzene_graph(true)}) {
    auto j = graph_to_json(g);
    Graph back = graph_from_json(j);
    CHECK(canonical_key(back) == canonical_key(g));
  }
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::object()), ValidationError);
  auto j = graph_to_json(star_graph(4));
  j["edges"][0]["mult"] = 3;
  CHECK_THROWS_AS(graph_from_json(j), ValidationError);
}
