#pragma once

// Shared fixtures for the test binaries: small permutation groups, the
// corpus used by the Hecke and maximality checks, and graph-of-groups
// builders covering every branch of the decision pipeline.

#include <string>
#include <vector>

#include "arbor/engine.hpp"
#include "arbor/graph_of_groups.hpp"
#include "arbor/perm_group.hpp"
#include "arbor/permutation.hpp"
#include "arbor/serre_graph.hpp"

namespace testsupport {

// --- groups ---------------------------------------------------------------

arbor::PermGroup cyclic(int n);       // <(0 1 ... n-1)> on n points
arbor::PermGroup dihedral(int n);     // order 2n on n points, n >= 3
arbor::PermGroup alternating(int n);  // n >= 3
arbor::PermGroup klein_four();        // <(0 1)(2 3), (0 2)(1 3)> on 4 points
arbor::PermGroup quaternion_regular();  // Q8 in its regular action on 8 points

// All transitive subgroups of Sym(5), found by exhaustive subgroup
// search: six conjugates each of C5, D5 and F20, plus A5 and S5 (20 in
// total).
std::vector<arbor::PermGroup> transitive_subgroups_s5();

struct NamedGroup {
  std::string name;
  arbor::PermGroup group;
};

// The eight-group corpus shared by the Hecke-dimension and maximality
// checks: S3, S4, A4, D4, V4, C4, C6, Q8.
std::vector<NamedGroup> hecke_corpus();

// --- graph-of-groups builders ----------------------------------------------
//
// Vertices are "v0".."v{n}"; geometric edge i is "e{i}" with reverse
// "e{i}r", so "e{i}" is always the geometric key.

struct EdgeSpec {
  arbor::PermGroup group;
  // Images of group's generators under the inclusion into each endpoint.
  std::vector<arbor::Permutation> into_origin;
  std::vector<arbor::Permutation> into_target;
};

// Generator images for the identity embedding of `sub` into an ambient
// group on the same points.
std::vector<arbor::Permutation> identity_images(const arbor::PermGroup& sub);

// Path v0 - v1 - ... - v{k}: edge i runs from v{i} to v{i+1}.
arbor::GraphOfGroups path_gog(const std::vector<arbor::PermGroup>& vertex_groups,
                              const std::vector<EdgeSpec>& edges);

// Cycle on p >= 1 vertices: edge i runs from v{i} to v{(i+1) % p}; a single
// loop when p == 1.
arbor::GraphOfGroups cycle_gog(const std::vector<arbor::PermGroup>& vertex_groups,
                               const std::vector<EdgeSpec>& edges);

// Star: centre v0, leaves v1..v{k}; edge i runs from v0 to v{i+1}, so
// into_origin maps into the centre group.
arbor::GraphOfGroups star_gog(const arbor::PermGroup& centre,
                              const std::vector<arbor::PermGroup>& leaf_groups,
                              const std::vector<EdgeSpec>& edges);

// Rose: a single vertex v0 with loops e0..e{k-1}.
arbor::GraphOfGroups rose_gog(const arbor::PermGroup& vertex,
                              const std::vector<EdgeSpec>& loops);

// --- decision-pipeline corpus ----------------------------------------------

struct EngineCase {
  std::string name;
  arbor::GraphOfGroups gog;
  arbor::Assertions assertions;
  arbor::Verdict expected_verdict;
  std::string expected_route;  // steps[1].witness["route"]
};

// One case per route of the decision pipeline; every case is replayable.
std::vector<EngineCase> engine_corpus();

// Individual builders (each also appears in engine_corpus).
arbor::GraphOfGroups gog_single_vertex();
arbor::GraphOfGroups gog_edge_free_product();      // C4 * 1 * C2: criterion fires
arbor::GraphOfGroups gog_edge_locally_2t();        // S3 *_{C2} S3: inconclusive
arbor::GraphOfGroups gog_edge_no_opposite();       // C4 * 1 * 1: inconclusive
arbor::GraphOfGroups gog_star_three_leaves();      // rank-zero-ends
arbor::GraphOfGroups gog_thin_segment();           // rank-zero-thin
arbor::GraphOfGroups gog_segment_contraction();    // rank-zero-segment-contraction
arbor::GraphOfGroups gog_equality_chain();         // rank-zero-equality-chain
arbor::GraphOfGroups gog_circuit_grouping_a();     // rank-one-circuit, grouping A
arbor::GraphOfGroups gog_circuit_grouping_b();     // rank-one-circuit, grouping B
arbor::GraphOfGroups gog_circuit_flat();           // rank-one-circuit-flat
arbor::GraphOfGroups gog_circuit_limit();          // rank-one-circuit-limit
arbor::GraphOfGroups gog_terminal_cover();         // rank-one-terminal-cover
arbor::GraphOfGroups gog_rose_free_quotient();     // rank-two-free-quotient
arbor::GraphOfGroups gog_rose_lifted_ends();       // rank-two-lifted-ends
arbor::GraphOfGroups gog_theta();                  // rank two after tree contraction

// --- tree actions ------------------------------------------------------------

struct ActionCase {
  std::string name;
  arbor::TreeAction action;
};

// Finite groups acting on small trees without inversions (used for the
// quotient/stabiliser checks).
std::vector<ActionCase> action_corpus();

// --- reduction fixtures ------------------------------------------------------

// At least ten subdivided trees on <= 20 vertices, each with boundary-marked
// leaves and at least one branch vertex, for the reduction round-trip and
// automorphism-restriction checks.
std::vector<arbor::SerreGraph> subdivided_trees();

}  // namespace testsupport
