#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "arbor/error.hpp"
#include "arbor/graph_of_groups.hpp"
#include "catalog.hpp"

using namespace arbor;
using testsupport::cyclic;
using testsupport::klein_four;

namespace {

PermGroup s3() { return PermGroup::symmetric(3); }
PermGroup c2_3() { return PermGroup(3, {parse_cycles("(1 2)", 3)}); }

}  // namespace

TEST_CASE("validation catches missing or inconsistent data") {
  GraphOfGroups gog = testsupport::gog_edge_locally_2t();
  CHECK_NOTHROW(validate_gog(gog));

  SUBCASE("missing vertex group") {
    gog.vertex_groups.erase("v1");
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
  SUBCASE("missing edge group") {
    gog.edge_groups.erase("e0");
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
  SUBCASE("missing inclusion") {
    gog.inclusions.erase("e0r");
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
  SUBCASE("edge group keyed by a non-geometric id") {
    PermGroup k = gog.edge_groups.at("e0");
    gog.edge_groups.erase("e0");
    gog.edge_groups.emplace("e0r", k);
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
  SUBCASE("inclusion domain differs from the edge group") {
    gog.inclusions.at("e0").hom = inclusion_homomorphism(PermGroup::trivial(3), s3());
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
  SUBCASE("inclusion codomain differs from the named leaf group") {
    gog.inclusions.at("e0").hom = inclusion_homomorphism(c2_3(), c2_3());
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
  SUBCASE("non-injective inclusion") {
    gog.edge_groups.at("e0") = cyclic(4);
    Homomorphism quotient =
        make_homomorphism(cyclic(4), {parse_cycles("(1 2)", 3)}, s3());
    gog.inclusions.at("e0").hom = quotient;
    gog.inclusions.at("e0r").hom = quotient;
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
  SUBCASE("target leaf names the wrong vertex") {
    gog.inclusions.at("e0").target_leaf = "v0";
    CHECK_THROWS_AS(validate_gog(gog), Error);
  }
}

TEST_CASE("lifted degrees add up the inclusion indices") {
  GraphOfGroups edge = testsupport::gog_edge_locally_2t();
  CHECK(lifted_degree(edge, "v0") == 3);
  CHECK(lifted_degree(edge, "v1") == 3);
  CHECK(is_thick(edge));

  GraphOfGroups thin = testsupport::gog_thin_segment();
  CHECK(lifted_degree(thin, "v0") == 3);
  CHECK(lifted_degree(thin, "v1") == 2);
  CHECK_FALSE(is_thick(thin));

  GraphOfGroups star = testsupport::gog_star_three_leaves();
  CHECK(lifted_degree(star, "v0") == 9);
  CHECK(lifted_degree(star, "v1") == 3);
  CHECK(is_thick(star));

  // A loop contributes both of its directions to the lift.
  GraphOfGroups rose = testsupport::gog_rose_lifted_ends();
  CHECK(lifted_degree(rose, "v0") == 3 + 3 + 2 + 2);
}

TEST_CASE("tree actions reject inconsistent maps and inversions") {
  SerreGraph edge({{"t0", false}, {"t1", false}},
                  {{"e0", "t0", "t1", "e0r"}, {"e0r", "t1", "t0", "e0"}});
  // Swapping the endpoints of an edge is an inversion.
  std::map<std::string, std::string> swap{{"t0", "t1"}, {"t1", "t0"}};
  CHECK_THROWS_AS(make_tree_action(cyclic(2), edge, {swap}), Error);
  // Collapsing both endpoints onto one is not an automorphism.
  std::map<std::string, std::string> collapse{{"t0", "t0"}, {"t1", "t0"}};
  CHECK_THROWS_AS(make_tree_action(cyclic(2), edge, {collapse}), Error);
  // Generator count must match.
  CHECK_THROWS_AS(make_tree_action(cyclic(2), edge, {}), Error);
}

TEST_CASE("action_of extends generator maps consistently") {
  for (const auto& [name, action] : testsupport::action_corpus()) {
    CAPTURE(name);
    const auto& gens = action.group.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      // Identity composed with a generator reproduces the generator map.
      const auto& via_group = action.action_of(gens[i]);
      for (const SerreVertex& v : action.tree.vertices()) CHECK(via_group.count(v.id) == 1);
    }
    const auto& id_map = action.action_of(action.group.identity());
    for (const SerreVertex& v : action.tree.vertices()) CHECK(id_map.at(v.id) == v.id);
  }
}

TEST_CASE("quotients satisfy orbit-stabiliser counting") {
  for (const auto& [name, action] : testsupport::action_corpus()) {
    CAPTURE(name);
    QuotientResult q = quotient_of_action(action);
    CHECK_NOTHROW(validate_gog(q.gog));

    std::size_t vertex_total = 0;
    for (const auto& [id, orb] : q.vertex_orbits) {
      vertex_total += orb.size();
      const GroupRef& ref = q.gog.vertex_group(id);
      REQUIRE(ref.is_finite());
      CHECK(orb.size() * ref.finite_group().order() == action.group.order());
      // The chosen lift belongs to its own orbit.
      CHECK(std::find(orb.begin(), orb.end(), q.vertex_lift.at(id)) != orb.end());
    }
    CHECK(vertex_total == action.tree.vertices().size());

    std::size_t edge_total = 0;
    for (const auto& [id, orb] : q.edge_orbits) edge_total += orb.size();
    CHECK(edge_total == action.tree.edges().size());
    for (const auto& [key, group] : q.gog.edge_groups) {
      CHECK(q.edge_orbits.at(key).size() * group.order() == action.group.order());
    }
  }
}

TEST_CASE("quotient of the leaf-permuting star action is a single edge") {
  QuotientResult q = quotient_of_action(testsupport::action_corpus()[0].action);  // S3 star
  CHECK(q.gog.graph.vertices().size() == 2);
  CHECK(q.gog.graph.geometric_edge_count() == 1);
  std::multiset<std::size_t> orders;
  for (const auto& [id, ref] : q.gog.vertex_groups) orders.insert(ref.finite_group().order());
  CHECK(orders == std::multiset<std::size_t>{2, 6});
  CHECK(q.gog.edge_groups.begin()->second.order() == 2);
}

TEST_CASE("quotient by the trivial group is the tree itself") {
  QuotientResult q = quotient_of_action(testsupport::action_corpus().back().action);
  CHECK(q.gog.graph.vertices().size() == 2);
  CHECK(q.gog.graph.geometric_edge_count() == 1);
  for (const auto& [id, ref] : q.gog.vertex_groups) CHECK(ref.finite_group().is_trivial());
}

TEST_CASE("contracting an inner edge produces the amalgam of its endpoints") {
  GraphOfGroups segment = testsupport::gog_segment_contraction();
  GraphOfGroups contracted = contract_subtree(segment, {"e1"});
  CHECK(contracted.graph.vertices().size() == 3);
  CHECK(contracted.graph.geometric_edge_count() == 2);
  REQUIRE(contracted.graph.has_vertex("v1"));
  const GroupRef& middle = contracted.vertex_group("v1");
  REQUIRE(middle.is_amalgam());
  CHECK(middle.leaf_ids() == std::vector<std::string>{"v1", "v2"});
  CHECK(middle.leaf_group("v1").same_group(PermGroup::symmetric(3)));
  CHECK_FALSE(middle.is_compact());  // S3 *_{C3} S3 is infinite
  // The outer inclusions survive and point into the right leaves.
  CHECK(contracted.inclusion("e0").target_leaf == "v1");
  CHECK(contracted.inclusion("e2r").target_leaf == "v2");
  CHECK_NOTHROW(validate_gog(contracted));
}

TEST_CASE("a degenerate amalgam collapses to a compact reference") {
  PermGroup v4 = klein_four();
  GraphOfGroups pair = testsupport::path_gog(
      {v4, v4}, {testsupport::EdgeSpec{v4, v4.generators(), v4.generators()}});
  GraphOfGroups contracted = contract_subtree(pair, {"e0"});
  const GroupRef& ref = contracted.vertex_group("v0");
  REQUIRE(ref.is_amalgam());
  CHECK(ref.is_compact());
  CHECK(ref.collapsed_order() == 4);
}

TEST_CASE("contract_subtree rejects non-tree edge sets") {
  GraphOfGroups theta = testsupport::gog_theta();
  CHECK_THROWS_AS(contract_subtree(theta, {"e0", "e1"}), Error);  // a 2-cycle
  CHECK_THROWS_AS(contract_subtree(theta, {"missing"}), Error);
}

TEST_CASE("covering truncation unrolls a circuit into a line") {
  GraphOfGroups circuit = testsupport::gog_circuit_grouping_a();
  CoveringTruncation cover = covering_tree_truncation(circuit, "v0", 2);
  CHECK(cover.tree.graph.is_tree());
  CHECK(cover.tree.graph.vertices().size() == 5);
  for (const SerreVertex& v : cover.tree.graph.vertices()) {
    CHECK(cover.vertex_projection.count(v.id) == 1);
    const GroupRef& ref = cover.tree.vertex_group(v.id);
    REQUIRE(ref.is_finite());
    const std::string& original = cover.vertex_projection.at(v.id);
    CHECK(ref.finite_group().same_group(circuit.vertex_group(original).finite_group()));
  }
  // Boundary marks exactly at the truncation radius.
  int boundary = 0;
  for (const SerreVertex& v : cover.tree.graph.vertices()) boundary += v.boundary ? 1 : 0;
  CHECK(boundary == 2);
  // Inclusions are copied along the projection.
  for (const SerreEdge& e : cover.tree.graph.edges()) {
    const EdgeInclusion& lifted = cover.tree.inclusion(e.id);
    const EdgeInclusion& base = circuit.inclusion(cover.edge_projection.at(e.id));
    CHECK(lifted.hom.images_by_element() == base.hom.images_by_element());
  }
  CHECK_NOTHROW(validate_gog(cover.tree));
}

TEST_CASE("spanning tree and rank") {
  CHECK(spanning_tree_and_rank(testsupport::gog_single_vertex()).rank == 0);
  CHECK(spanning_tree_and_rank(testsupport::gog_single_vertex()).tree_edges.empty());
  CHECK(spanning_tree_and_rank(testsupport::gog_segment_contraction()).rank == 0);
  CHECK(spanning_tree_and_rank(testsupport::gog_segment_contraction()).tree_edges.size() == 3);
  CHECK(spanning_tree_and_rank(testsupport::gog_circuit_grouping_a()).rank == 1);
  CHECK(spanning_tree_and_rank(testsupport::gog_theta()).rank == 2);
  SpanningTree theta = spanning_tree_and_rank(testsupport::gog_theta());
  CHECK(theta.tree_edges == std::vector<std::string>{"e0"});
  CHECK(spanning_tree_and_rank(testsupport::gog_rose_free_quotient()).rank == 2);
  CHECK(spanning_tree_and_rank(testsupport::gog_rose_free_quotient()).tree_edges.empty());
}
