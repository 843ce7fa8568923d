#include <catch2/catch_amalgamated.hpp>

#include "hourglass/moves.hpp"

using namespace hourglass;

namespace {

int count_kind(const std::vector<MoveInstance>& ms, MoveInstance::Kind k) {
  int n = 0;
  for (const auto& m : ms) n += m.kind == k;
  return n;
}

/// Four transmitting vertices around a square face with alternating edge
/// orientations, two boundary legs per corner.
SixVertexConfig square_config() {
  SixVertexConfig d;
  d.nb = 8;
  d.rot.resize(12);
  d.edge_ends = {{0, 8},  {1, 8},  {9, 2},  {9, 3},
                 {4, 10}, {5, 10}, {11, 6}, {11, 7},
                 {8, 9},  {10, 9}, {10, 11}, {8, 11}};
  for (int b = 0; b < 8; ++b) d.rot[b] = {b};
  d.rot[8] = {0, 11, 8, 1};
  d.rot[9] = {2, 8, 9, 3};
  d.rot[10] = {4, 9, 10, 5};
  d.rot[11] = {6, 10, 11, 7};
  return d;
}

}  // namespace

TEST_CASE("benzene move toggles the hexagon chirality") {
  Graph g0 = benzene_graph(false), g1 = benzene_graph(true);
  auto moves = find_moves(g0);
  REQUIRE(count_kind(moves, MoveInstance::Benzene) == 1);
  CHECK(count_kind(moves, MoveInstance::Square) == 0);
  CHECK(count_kind(moves, MoveInstance::Contraction) == 0);
  const MoveInstance* bz = nullptr;
  for (const auto& m : moves)
    if (m.kind == MoveInstance::Benzene) bz = &m;
  Graph flipped = apply_move(g0, *bz);
  CHECK(canonical_key(flipped) == canonical_key(g1));
  CHECK(trip_perms(flipped) == trip_perms(g0));
  // the move is an involution
  auto moves2 = find_moves(flipped);
  REQUIRE(count_kind(moves2, MoveInstance::Benzene) == 1);
  CHECK(canonical_key(apply_move(flipped, moves2[0])) == canonical_key(g0));
}

TEST_CASE("contraction undoes un-contraction") {
  Graph g = benzene_graph(false);
  CHECK(is_contracted(g));
  CHECK(is_contracted(star_graph(4)));
  for (int e = 0; e < g.num_edges(); ++e) {
    Graph u = uncontract_edge(g, e);
    CHECK(trip_perms(u) == trip_perms(g));
    auto sites = contraction_sites(u);
    REQUIRE(sites.size() == 1);
    CHECK(canonical_key(contract(u)) == canonical_key(g));
  }
  // nested un-contractions also normalize back
  Graph u = uncontract_edge(uncontract_edge(g, 0), g.num_edges());
  CHECK(canonical_key(contract(u)) == canonical_key(g));
}

TEST_CASE("square move flips an alternating plaquette") {
  Graph g = phi_inverse(square_config());
  auto moves = find_moves(g);
  CHECK(count_kind(moves, MoveInstance::Benzene) == 0);
  REQUIRE(count_kind(moves, MoveInstance::Square) == 1);
  Graph h = apply_move(g, moves[0]);
  CHECK(canonical_key(h) != canonical_key(g));
  CHECK(trip_perms(h) == trip_perms(g));
  auto moves2 = find_moves(h);
  REQUIRE(count_kind(moves2, MoveInstance::Square) == 1);
  CHECK(canonical_key(apply_move(h, moves2[0])) == canonical_key(g));
}

TEST_CASE("square move works through boundary hourglasses") {
  Graph fine = phi_inverse(square_config());
  // merge boundary legs pairwise into 2-hourglasses (type with |c_i| = 2)
  std::vector<int> type;
  for (int b = 0; b < fine.nb; b += 2) {
    REQUIRE(fine.verts[b].color == fine.verts[b + 1].color);
    type.push_back(2 * fine.verts[b].color);
  }
  Graph coarse = detail::de_oscillize(fine, type);
  CHECK(graph_type(coarse) == type);
  CHECK(is_contracted(coarse));
  CHECK(trip_perms(coarse) == trip_perms(fine));

  auto moves = find_moves(coarse);
  REQUIRE(count_kind(moves, MoveInstance::Square) == 1);
  Graph flipped = apply_move(coarse, moves[0]);
  CHECK(graph_type(flipped) == type);
  CHECK(trip_perms(flipped) == trip_perms(coarse));
  auto moves2 = find_moves(flipped);
  REQUIRE(count_kind(moves2, MoveInstance::Square) == 1);
  CHECK(canonical_key(apply_move(flipped, moves2[0])) == canonical_key(coarse));
}

TEST_CASE("move classes of small graphs") {
  CHECK(move_class(star_graph(4)).size() == 1);

  auto cls = move_class(benzene_graph(false));
  REQUIRE(cls.size() == 2);
  std::set<std::string> keys;
  for (const Graph& g : cls) keys.insert(canonical_key(g));
  CHECK(keys.count(canonical_key(benzene_graph(true))) == 1);
  CHECK(keys.count(canonical_key(benzene_graph(false))) == 1);

  CHECK(move_class(phi_inverse(square_config())).size() == 2);
}

TEST_CASE("top element is confluent across the benzene class") {
  Graph t0 = top_element(benzene_graph(false));
  Graph t1 = top_element(benzene_graph(true));
  CHECK(canonical_key(t0) == canonical_key(t1));
  // the top has no clockwise benzene faces
  for (const auto& f : internal_faces_graph(t0))
    if (detail::benzene_face_site(t0, f))
      CHECK(!is_clockwise_benzene_face(t0, f));
  // exactly one of the two chiralities has a clockwise face
  int clockwise = 0;
  for (bool ch : {false, true}) {
    Graph g = benzene_graph(ch);
    for (const auto& f : internal_faces_graph(g))
      if (detail::benzene_face_site(g, f))
        clockwise += is_clockwise_benzene_face(g, f);
  }
  CHECK(clockwise == 1);
}
