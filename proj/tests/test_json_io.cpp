#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "arbor/error.hpp"
#include "arbor/json_io.hpp"
#include "catalog.hpp"

using namespace arbor;
using ojson = nlohmann::ordered_json;

TEST_CASE("permutations round-trip and accept cycle strings") {
  Permutation p = parse_cycles("(1 2 3)(4 5)", 6);
  CHECK(permutation_from_json(permutation_to_json(p)) == p);
  CHECK(permutation_from_json(ojson("(1 2 3)(4 5)"), 6) == p);
  CHECK(permutation_from_json(ojson("()"), 3) == Permutation::identity(3));

  ojson j = permutation_to_json(p);
  CHECK(j["degree"] == 6);
  CHECK(j["images"].is_array());
}

TEST_CASE("permutation parsing is strict") {
  CHECK_THROWS_AS(permutation_from_json(ojson("(1 2)")), Error);  // no degree context
  CHECK_THROWS_AS(permutation_from_json(ojson{{"degree", 3}, {"images", {0, 0, 1}}}), Error);
  CHECK_THROWS_AS(permutation_from_json(ojson{{"degree", 4}, {"images", {0, 1, 2}}}), Error);
  CHECK_THROWS_AS(
      permutation_from_json(ojson{{"degree", 3}, {"images", {0, 1, 2}}, {"extra", 1}}), Error);
  CHECK_THROWS_AS(permutation_from_json(ojson{{"images", {0, 1, 2}}}), Error);
  // degree_hint must agree with object input.
  CHECK_THROWS_AS(permutation_from_json(permutation_to_json(Permutation::identity(3)), 4),
                  Error);
}

TEST_CASE("groups round-trip through generators") {
  for (const auto& [name, group] : testsupport::hecke_corpus()) {
    CAPTURE(name);
    PermGroup back = group_from_json(group_to_json(group));
    CHECK(back.same_group(group));
    CHECK(back.degree() == group.degree());
  }
  CHECK_THROWS_AS(group_from_json(ojson{{"degree", 3}}), Error);
  CHECK_THROWS_AS(group_from_json(ojson{{"degree", 3}, {"generators", 5}}), Error);
}

TEST_CASE("graphs round-trip with boundary marks optional on input") {
  for (const SerreGraph& g : testsupport::subdivided_trees()) {
    ojson j = graph_to_json(g);
    SerreGraph back = graph_from_json(j);
    CHECK(dump_json(graph_to_json(back)) == dump_json(j));
  }
  ojson j{{"vertices", {ojson{{"id", "a"}}, ojson{{"id", "b"}, {"boundary", true}}}},
          {"edges",
           {ojson{{"id", "e"}, {"origin", "a"}, {"target", "b"}, {"reverse", "er"}},
            ojson{{"id", "er"}, {"origin", "b"}, {"target", "a"}, {"reverse", "e"}}}}};
  SerreGraph g = graph_from_json(j);
  CHECK_FALSE(g.vertex("a").boundary);
  CHECK(g.vertex("b").boundary);
  // Serialized form always writes boundary and sorts vertices by id.
  ojson out = graph_to_json(g);
  CHECK(out["vertices"][0].contains("boundary"));
}

TEST_CASE("graph parsing is strict") {
  ojson good{{"vertices", {ojson{{"id", "a"}}, ojson{{"id", "b"}}}},
             {"edges",
              {ojson{{"id", "e"}, {"origin", "a"}, {"target", "b"}, {"reverse", "er"}},
               ojson{{"id", "er"}, {"origin", "b"}, {"target", "a"}, {"reverse", "e"}}}}};
  CHECK_NOTHROW(graph_from_json(good));
  ojson unknown = good;
  unknown["colour"] = "green";
  CHECK_THROWS_AS(graph_from_json(unknown), Error);
  ojson dangling = good;
  dangling["edges"][0]["reverse"] = "nope";
  CHECK_THROWS_AS(graph_from_json(dangling), Error);
  ojson missing = good;
  missing["edges"][0].erase("target");
  CHECK_THROWS_AS(graph_from_json(missing), Error);
}

TEST_CASE("group references serialize finite and amalgam forms") {
  GroupRef fin = GroupRef::finite("v7", PermGroup::symmetric(3));
  ojson j = group_ref_to_json(fin);
  CHECK(j["kind"] == "finite");
  CHECK(j["leaf"] == "v7");
  GroupRef back = group_ref_from_json(j);
  CHECK(back.is_finite());
  CHECK(back.finite_leaf_id() == "v7");
  CHECK(back.finite_group().same_group(PermGroup::symmetric(3)));

  // The bare-group shorthand needs an implicit leaf.
  ojson bare = group_to_json(PermGroup::symmetric(3));
  CHECK_THROWS_AS(group_ref_from_json(bare), Error);
  GroupRef implicit = group_ref_from_json(bare, "v0");
  CHECK(implicit.finite_leaf_id() == "v0");

  // An amalgam built by contraction survives the round trip.
  GraphOfGroups contracted =
      contract_subtree(testsupport::gog_segment_contraction(), {"e1"});
  const GroupRef& amalgam = contracted.vertex_group("v1");
  ojson aj = group_ref_to_json(amalgam);
  CHECK(aj["kind"] == "amalgam");
  GroupRef amal_back = group_ref_from_json(aj);
  REQUIRE(amal_back.is_amalgam());
  CHECK(amal_back.leaf_ids() == amalgam.leaf_ids());
  CHECK(amal_back.is_compact() == amalgam.is_compact());
  CHECK(dump_json(group_ref_to_json(amal_back)) == dump_json(aj));
}

TEST_CASE("graphs of groups round-trip byte-identically") {
  for (const auto& engine_case : testsupport::engine_corpus()) {
    CAPTURE(engine_case.name);
    ojson j = gog_to_json(engine_case.gog);
    GraphOfGroups back = gog_from_json(j);
    CHECK(dump_json(gog_to_json(back)) == dump_json(j));
  }
}

TEST_CASE("a contracted graph of groups still round-trips") {
  GraphOfGroups contracted =
      contract_subtree(testsupport::gog_segment_contraction(), {"e1"});
  ojson j = gog_to_json(contracted);
  GraphOfGroups back = gog_from_json(j);
  CHECK(dump_json(gog_to_json(back)) == dump_json(j));
  CHECK(back.vertex_group("v1").is_amalgam());
}

TEST_CASE("gog parsing is strict about inclusions") {
  ojson j = gog_to_json(testsupport::gog_edge_locally_2t());
  ojson missing = j;
  missing["inclusions"].erase("e0r");
  CHECK_THROWS_AS(gog_from_json(missing), Error);
  ojson wrong_key = j;
  wrong_key["edge_groups"]["e0r"] = wrong_key["edge_groups"]["e0"];
  wrong_key["edge_groups"].erase("e0");
  CHECK_THROWS_AS(gog_from_json(wrong_key), Error);
  ojson non_member = j;
  non_member["inclusions"]["e0"] = ojson::array({"(1 2 3)"});  // order-3 image of an involution
  CHECK_THROWS_AS(gog_from_json(non_member), Error);
}

TEST_CASE("reductions round-trip") {
  for (const SerreGraph& g : testsupport::subdivided_trees()) {
    ReductionResult red = suppress_degree_two(SerreTree(g));
    ojson j = reduction_to_json(red);
    ReductionResult back = reduction_from_json(j);
    CHECK(dump_json(reduction_to_json(back)) == dump_json(j));
    // The parsed result still expands to the original tree.
    ojson orig = graph_to_json(g);
    CHECK(dump_json(graph_to_json(expand_chains(back))) == dump_json(orig));
  }
}

TEST_CASE("file loading distinguishes malformed JSON") {
  std::string path = (std::filesystem::temp_directory_path() /
                      ("arbor_json_io_" + std::to_string(::getpid()) + ".json"))
                         .string();
  {
    std::ofstream out(path);
    out << "{\"degree\": 3, \"generators\": [\"(1 2)\"]}";
  }
  ojson j = load_json_file(path);
  CHECK(group_from_json(j).order() == 2);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  try {
    load_json_file(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("malformed JSON") == 0);
  }
  std::remove(path.c_str());
  try {
    load_json_file(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("malformed JSON") == 0);
  }
}
