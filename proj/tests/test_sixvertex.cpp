#include <catch2/catch_amalgamated.hpp>

#include "hourglass/sixvertex.hpp"

using namespace hourglass;

namespace {

/// Four transmitting vertices around a square face with alternating edge
/// orientations, two boundary legs per corner (clockwise corners u0..u3).
SixVertexConfig square_config() {
  SixVertexConfig d;
  d.nb = 8;
  d.rot.resize(12);
  // legs: edge j joins b_j to its corner; in at u0 and u2, out at u1 and u3
  d.edge_ends = {{0, 8},  {1, 8},  {9, 2},  {9, 3},
                 {4, 10}, {5, 10}, {11, 6}, {11, 7},
                 // square edges: u0->u1, u2->u1, u2->u3, u0->u3
                 {8, 9},  {10, 9}, {10, 11}, {8, 11}};
  for (int b = 0; b < 8; ++b) d.rot[b] = {b};
  d.rot[8] = {0, 11, 8, 1};
  d.rot[9] = {2, 8, 9, 3};
  d.rot[10] = {4, 9, 10, 5};
  d.rot[11] = {6, 10, 11, 7};
  return d;
}

/// Three valid transmitting vertices around an *unoriented* triangle
/// (u0 -> u1, u1 -> u2, u0 -> u2), two boundary legs per corner.
SixVertexConfig unoriented_triangle_config() {
  SixVertexConfig d;
  d.nb = 6;
  d.rot.resize(9);
  d.edge_ends = {{0, 6}, {1, 6}, {2, 7}, {7, 3}, {8, 4}, {8, 5},
                 {6, 7}, {7, 8}, {6, 8}};
  for (int b = 0; b < 6; ++b) d.rot[b] = {b};
  d.rot[6] = {0, 8, 6, 1};
  d.rot[7] = {2, 6, 7, 3};
  d.rot[8] = {4, 7, 8, 5};
  return d;
}

}  // namespace

TEST_CASE("phi on the star graph gives a sink") {
  Graph g = star_graph(4);
  SixVertexConfig d = phi(g);
  CHECK(d.num_vertices() == 5);
  CHECK(vertex_kind(d, 4) == VertexKind::Sink);
  CHECK(boundary_conditions(d) == std::vector<int>{1, 1, 1, 1});
  CHECK(canonical_key(phi_inverse(d)) == canonical_key(g));
  CHECK(is_well_oriented(d));
}

TEST_CASE("phi contracts benzene hourglasses to transmitting vertices") {
  for (bool ch : {false, true}) {
    Graph g = benzene_graph(ch);
    SixVertexConfig d = phi(g);
    CHECK(d.num_vertices() == 9);  // 6 boundary + 3 merged
    for (int v = 6; v < 9; ++v)
      CHECK(vertex_kind(d, v) == VertexKind::Transmit);
    CHECK(is_well_oriented(d));
    // roundtrip
    CHECK(canonical_key(phi_inverse(d)) == canonical_key(g));
    CHECK(six_vertex_key(phi(phi_inverse(d))) == six_vertex_key(d));
    // trip_2 matching agrees with the hourglass trips
    auto t = trip_perms(g);
    CHECK(six_vertex_matching(d) == t.perm[1]);
  }
}

TEST_CASE("phi rejects non-contracted input") {
  Graph h;
  h.nb = 3;
  h.verts = {{1, {}}, {1, {}}, {1, {}}, {-1, {}}};
  h.edges = {{0, 3, 2}, {1, 3, 1}, {2, 3, 1}};
  h.verts[0].rot = {{0, 1}, {0, 0}};
  h.verts[1].rot = {{1, 0}};
  h.verts[2].rot = {{2, 0}};
  h.verts[3].rot = {{2, 0}, {1, 0}, {0, 1}, {0, 0}};
  CHECK_THROWS_AS(phi(h), ValidationError);
}

TEST_CASE("Yang-Baxter move realizes the benzene flip") {
  Graph g0 = benzene_graph(false), g1 = benzene_graph(true);
  SixVertexConfig d = phi(g0);
  auto moves = six_vertex_moves(d);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].kind == SixVertexMove::YangBaxter);
  SixVertexConfig flipped = apply_yang_baxter(d, moves[0].face_edges);
  CHECK(canonical_key(phi_inverse(flipped)) == canonical_key(g1));
  CHECK(trip_perms(phi_inverse(flipped)) == trip_perms(g0));
  // flipping back returns to the start
  auto moves2 = six_vertex_moves(flipped);
  REQUIRE(moves2.size() == 1);
  CHECK(six_vertex_key(apply_yang_baxter(flipped, moves2[0].face_edges)) ==
        six_vertex_key(d));
}

TEST_CASE("ASM move reverses an alternating square face") {
  SixVertexConfig d = square_config();
  CHECK(!validate_six_vertex_diagnostic(d).has_value());
  for (int v = 8; v < 12; ++v)
    CHECK(vertex_kind(d, v) == VertexKind::Transmit);
  auto moves = six_vertex_moves(d);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].kind == SixVertexMove::ASM);
  SixVertexConfig e = apply_asm_move(d, moves[0].face_edges);
  CHECK(trip_perms(phi_inverse(e)) == trip_perms(phi_inverse(d)));
  CHECK(six_vertex_matching(e) == six_vertex_matching(d));
  auto moves2 = six_vertex_moves(e);
  REQUIRE(moves2.size() == 1);
  CHECK(six_vertex_key(apply_asm_move(e, moves2[0].face_edges)) ==
        six_vertex_key(d));
  CHECK(is_well_oriented(d));
  CHECK(is_well_oriented(e));
}

TEST_CASE("well-orientedness rejects an unoriented triangle") {
  SixVertexConfig d = unoriented_triangle_config();
  CHECK(!validate_six_vertex_diagnostic(d).has_value());
  CHECK(!is_well_oriented(d));
  // and no Yang-Baxter site is offered on the unoriented triangle
  CHECK(six_vertex_moves(d).empty());
  // monotonicity of the pulled-back hourglass graph agrees
  CHECK(!is_monotonic(phi_inverse(d)));
}

TEST_CASE("well-orientedness agrees with monotonicity on examples") {
  for (const Graph& g :
       {star_graph(4), benzene_graph(false), benzene_graph(true)}) {
    CHECK(is_monotonic(g));
    CHECK(is_well_oriented(phi(g)));
  }
}

TEST_CASE("canonical matching diagram") {
  // non-crossing matching: no internal vertices
  auto md0 = canonical_matching_diagram({1, 0, 3, 2});
  CHECK(md0.graph.num_vertices() == 4);
  CHECK(md0.graph.num_edges() == 2);
  CHECK(six_vertex_matching(md0.graph) == std::vector<int>{1, 0, 3, 2});
  CHECK(has_abc_property(md0));

  // the 12-point example: 11 crossings
  std::vector<int> m{5, 8, 6, 10, 9, 0, 2, 11, 1, 4, 3, 7};
  auto md = canonical_matching_diagram(m);
  CHECK(md.graph.num_vertices() == 12 + 11);
  CHECK(six_vertex_matching(md.graph) == m);
  CHECK(has_abc_property(md));

  // a matching that needs four pairwise-crossing strands is rejected
  CHECK_THROWS_AS(canonical_matching_diagram({4, 5, 6, 7, 0, 1, 2, 3}),
                  ValidationError);
}

TEST_CASE("matching diagrams are Yang-Baxter-connected to the canonical one") {
  SixVertexConfig d = phi(benzene_graph(false));
  std::vector<int> m = six_vertex_matching(d);
  auto canon = canonical_matching_diagram(m);
  // BFS over undirected Yang-Baxter flips from the realized diagram
  std::set<std::string> seen;
  std::vector<SixVertexConfig> frontier{d};
  seen.insert(six_vertex_key(d, false));
  while (!frontier.empty()) {
    SixVertexConfig cur = frontier.back();
    frontier.pop_back();
    for (const auto& f : internal_faces(cur)) {
      if (f.size() != 3) continue;
      std::vector<int> edges;
      for (auto& [e, dir] : f) edges.push_back(e);
      SixVertexConfig nxt = apply_yang_baxter(cur, edges, /*directed=*/false);
      std::string key = six_vertex_key(nxt, false);
      if (seen.insert(key).second) frontier.push_back(nxt);
    }
    if (seen.size() > 1000) break;
  }
  CHECK(seen.count(six_vertex_key(canon.graph, false)) == 1);
}
