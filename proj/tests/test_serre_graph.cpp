#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "arbor/error.hpp"
#include "arbor/serre_graph.hpp"
#include "catalog.hpp"
#include "oracles.hpp"

using namespace arbor;

namespace {

void add_edge(std::vector<SerreEdge>& es, const std::string& key, const std::string& o,
              const std::string& t) {
  es.push_back({key, o, t, key + "r"});
  es.push_back({key + "r", t, o, key});
}

SerreGraph path(int n) {  // vertices p0..p{n-1}
  std::vector<SerreVertex> vs;
  std::vector<SerreEdge> es;
  for (int i = 0; i < n; ++i) vs.push_back({"p" + std::to_string(i), false});
  for (int i = 0; i + 1 < n; ++i)
    add_edge(es, "e" + std::to_string(i), "p" + std::to_string(i), "p" + std::to_string(i + 1));
  return SerreGraph(vs, es);
}

SerreGraph cycle(int n) {
  std::vector<SerreVertex> vs;
  std::vector<SerreEdge> es;
  for (int i = 0; i < n; ++i) vs.push_back({"p" + std::to_string(i), false});
  for (int i = 0; i < n; ++i)
    add_edge(es, "e" + std::to_string(i), "p" + std::to_string(i),
             "p" + std::to_string((i + 1) % n));
  return SerreGraph(vs, es);
}

}  // namespace

TEST_CASE("construction validates the edge involution") {
  std::vector<SerreVertex> vs{{"a", false}, {"b", false}};
  // Endpoint not a vertex.
  CHECK_THROWS_AS(SerreGraph(vs, {{"e", "a", "z", "er"}, {"er", "z", "a", "e"}}), Error);
  // Dangling reverse id.
  CHECK_THROWS_AS(SerreGraph(vs, {{"e", "a", "b", "missing"}}), Error);
  // An edge may not be its own reverse.
  CHECK_THROWS_AS(SerreGraph(vs, {{"e", "a", "b", "e"}}), Error);
  // Reverse must swap origin and target.
  CHECK_THROWS_AS(SerreGraph(vs, {{"e", "a", "b", "er"}, {"er", "a", "b", "e"}}), Error);
  // Duplicate ids.
  CHECK_THROWS_AS(SerreGraph({{"a", false}, {"a", false}}, {}), Error);
}

TEST_CASE("degree counts loops twice") {
  std::vector<SerreEdge> es;
  add_edge(es, "l", "a", "a");
  add_edge(es, "e", "a", "b");
  SerreGraph g({{"a", false}, {"b", false}}, es);
  CHECK(g.degree("a") == 3);
  CHECK(g.degree("b") == 1);
  CHECK(g.edges_at("a") == std::vector<std::string>{"e", "l", "lr"});
  CHECK(g.geometric_edge_count() == 2);
}

TEST_CASE("geometric edges pair each direction with its reverse") {
  SerreGraph g = path(3);
  auto pairs = g.geometric_edges();
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"e0", "e0r"});
  CHECK(pairs[1] == std::pair<std::string, std::string>{"e1", "e1r"});
}

TEST_CASE("connectivity, trees and circuit rank") {
  CHECK(path(4).is_tree());
  CHECK(path(4).circuit_rank() == 0);
  CHECK_FALSE(cycle(3).is_tree());
  CHECK(cycle(3).circuit_rank() == 1);
  CHECK(cycle(1).circuit_rank() == 1);  // a single loop

  // Two components.
  std::vector<SerreEdge> es;
  add_edge(es, "e", "a", "b");
  SerreGraph split({{"a", false}, {"b", false}, {"c", false}}, es);
  CHECK_FALSE(split.is_connected());
  CHECK_FALSE(split.is_tree());
  CHECK_FALSE(SerreGraph({}, {}).is_connected());
}

TEST_CASE("bipartition two-colours trees and even cycles only") {
  auto tree_colours = bipartition(path(4));
  REQUIRE(tree_colours.has_value());
  CHECK(tree_colours->at("p0") == 0);
  CHECK(tree_colours->at("p1") == 1);
  CHECK(tree_colours->at("p2") == 0);

  CHECK(bipartition(cycle(4)).has_value());
  CHECK_FALSE(bipartition(cycle(3)).has_value());
  CHECK_FALSE(bipartition(cycle(5)).has_value());
}

TEST_CASE("reduction suppresses exactly the degree-2 vertices") {
  for (const SerreGraph& g : testsupport::subdivided_trees()) {
    ReductionResult red = suppress_degree_two(SerreTree(g));
    for (const SerreVertex& v : red.reduced.vertices()) {
      CHECK((red.reduced.degree(v.id) != 2 || v.boundary));
      CHECK(g.has_vertex(v.id));
    }
    // Chains stitch original edges into directed paths.
    for (const auto& [id, chain] : red.edge_paths) {
      REQUIRE(red.reduced.has_edge(id));
      CHECK(chain.vertex_ids.size() == chain.edge_ids.size() + 1);
      CHECK(chain.vertex_ids.front() == red.reduced.edge(id).origin);
      CHECK(chain.vertex_ids.back() == red.reduced.edge(id).target);
      for (std::size_t i = 0; i < chain.edge_ids.size(); ++i) {
        const SerreEdge& old = g.edge(chain.edge_ids[i]);
        CHECK(old.origin == chain.vertex_ids[i]);
        CHECK(old.target == chain.vertex_ids[i + 1]);
      }
    }
  }
}

TEST_CASE("expansion reproduces the original tree bit-exactly") {
  for (const SerreGraph& g : testsupport::subdivided_trees()) {
    SerreGraph back = expand_chains(suppress_degree_two(SerreTree(g)));
    auto key = [](const SerreGraph& x) {
      std::set<std::string> vs, es;
      for (const SerreVertex& v : x.vertices()) vs.insert(v.id + (v.boundary ? "#" : ""));
      for (const SerreEdge& e : x.edges()) es.insert(e.id + ">" + e.origin + ">" + e.target + ">" + e.reverse);
      return std::make_pair(vs, es);
    };
    CHECK(key(back) == key(g));
  }
}

TEST_CASE("reduction preconditions are enforced") {
  // A leaf without a boundary mark.
  std::vector<SerreEdge> es;
  add_edge(es, "e0", "c", "a");
  add_edge(es, "e1", "c", "b");
  add_edge(es, "e2", "c", "d");
  SerreGraph star({{"c", false}, {"a", true}, {"b", true}, {"d", false}}, es);
  CHECK_THROWS_AS(suppress_degree_two(SerreTree(star)), Error);
  // A boundary mark away from the leaves.
  SerreGraph marked_centre({{"c", true}, {"a", true}, {"b", true}, {"d", true}}, es);
  CHECK_THROWS_AS(suppress_degree_two(SerreTree(marked_centre)), Error);
  // No branch vertex at all.
  std::vector<SerreEdge> pe;
  add_edge(pe, "e0", "x", "y");
  add_edge(pe, "e1", "y", "z");
  SerreGraph bare_path({{"x", true}, {"y", false}, {"z", true}}, pe);
  CHECK_THROWS_AS(suppress_degree_two(SerreTree(bare_path)), Error);
  // Not a tree.
  CHECK_THROWS_AS(SerreTree(cycle(3)), Error);
}

TEST_CASE("automorphism counts match the exhaustive oracle") {
  SerreGraph p3 = path(3);
  CHECK(automorphisms(p3).size() == testsupport::graph_automorphism_count_oracle(p3));
  CHECK(automorphisms(p3).size() == 2);

  SerreGraph c4 = cycle(4);
  CHECK(automorphisms(c4).size() == testsupport::graph_automorphism_count_oracle(c4));
  CHECK(automorphisms(c4).size() == 8);

  std::vector<SerreEdge> es;
  add_edge(es, "e0", "c", "a");
  add_edge(es, "e1", "c", "b");
  add_edge(es, "e2", "c", "d");
  SerreGraph star({{"c", false}, {"a", false}, {"b", false}, {"d", false}}, es);
  CHECK(automorphisms(star).size() == 6);
  CHECK(automorphisms(star).size() == testsupport::graph_automorphism_count_oracle(star));
}

TEST_CASE("automorphisms respect boundary marks and edge labels") {
  std::vector<SerreEdge> es;
  add_edge(es, "e0", "c", "a");
  add_edge(es, "e1", "c", "b");
  add_edge(es, "e2", "c", "d");
  // One leaf marked: only the other two may swap.
  SerreGraph star({{"c", false}, {"a", true}, {"b", false}, {"d", false}}, es);
  CHECK(automorphisms(star).size() == 2);
  CHECK(automorphisms(star).size() == testsupport::graph_automorphism_count_oracle(star));

  // Distinct labels freeze the swap as well.
  SerreGraph plain({{"c", false}, {"a", false}, {"b", false}, {"d", false}}, es);
  std::map<std::string, std::string> labels{{"e0", "2"}, {"e1", "2"}, {"e2", "3"}};
  CHECK(automorphisms(plain, &labels).size() == 2);
  CHECK(automorphisms(plain, &labels).size() ==
        testsupport::graph_automorphism_count_oracle(plain, &labels));
}

TEST_CASE("automorphism composition and identity") {
  SerreGraph c4 = cycle(4);
  std::vector<GraphAutomorphism> autos = automorphisms(c4);
  GraphAutomorphism id = identity_automorphism(c4);
  CHECK(std::find(autos.begin(), autos.end(), id) != autos.end());
  // Closure under composition.
  for (const GraphAutomorphism& a : autos) {
    for (const GraphAutomorphism& b : autos) {
      CHECK(std::find(autos.begin(), autos.end(), compose(a, b)) != autos.end());
    }
  }
}
