// Acceptance gate for the toolkit: one hard pass/fail line per criterion,
// exit 0 only when every criterion holds.  Each check recomputes its
// expectation from first principles (brute-force oracles, closed-form
// counts) rather than trusting the library under test.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arbor/ball.hpp"
#include "arbor/certificate.hpp"
#include "arbor/engine.hpp"
#include "arbor/graph_of_groups.hpp"
#include "arbor/hecke.hpp"
#include "arbor/json_io.hpp"
#include "arbor/perm_group.hpp"
#include "arbor/permutation.hpp"
#include "arbor/serre_graph.hpp"
#include "catalog.hpp"
#include "oracles.hpp"

using namespace arbor;

namespace {

int failed_criteria = 0;

void report(int number, bool ok, const std::string& description) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": "
            << description << "\n";
  if (!ok) ++failed_criteria;
}

void detail(const std::string& message) {
  std::cerr << "       " << message << "\n";
}

std::string seconds_of(std::chrono::steady_clock::time_point start) {
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << elapsed.count() << "s";
  return out.str();
}

// ---------------------------------------------------------------------------
// 1. Corner dimension == double-coset count, all subgroups of the corpus,
//    with a hard wall-clock budget of 60 s.

bool hecke_dimensions(std::string& description) {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::size_t pairs = 0;
  for (const testsupport::NamedGroup& named : testsupport::hecke_corpus()) {
    for (const PermGroup& k : all_subgroups(named.group)) {
      HeckeDimensionReport r = verify_hecke_dimension(named.group, k);
      ++pairs;
      if (!r.equal || r.double_coset_count != double_cosets(named.group, k, k).count()) {
        ok = false;
        detail("dimension mismatch in " + named.name + " at a subgroup of order " +
               std::to_string(k.order()));
      }
    }
  }
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  if (elapsed.count() >= 60.0) {
    ok = false;
    detail("corpus took " + seconds_of(start) + ", budget is 60s");
  }
  description = "corner dimension equals the double-coset count for all " +
                std::to_string(pairs) + " subgroup pairs (" + seconds_of(start) + ")";
  return ok;
}

// ---------------------------------------------------------------------------
// 2. classify_bm says TypeI exactly for the 2-transitive local actions.

std::vector<PermGroup> classification_corpus() {
  std::vector<PermGroup> groups;
  for (PermGroup& g : all_subgroups(PermGroup::symmetric(3))) groups.push_back(std::move(g));
  for (PermGroup& g : all_subgroups(PermGroup::symmetric(4))) groups.push_back(std::move(g));
  for (PermGroup& g : testsupport::transitive_subgroups_s5()) groups.push_back(std::move(g));
  return groups;
}

bool classification_verdicts(std::vector<std::pair<PermGroup, Certificate>>& certified,
                             std::string& description) {
  bool ok = true;
  for (const PermGroup& f : classification_corpus()) {
    Certificate cert = classify_bm(f, f.degree());
    bool expected = testsupport::two_transitive_oracle(f);
    if ((cert.verdict == Verdict::TypeI) != expected) {
      ok = false;
      detail("verdict disagrees with the pair-transitivity oracle for a degree-" +
             std::to_string(f.degree()) + " group of order " + std::to_string(f.order()));
    }
    certified.emplace_back(f, std::move(cert));
  }
  description = "verdicts match brute-force 2-transitivity for all " +
                std::to_string(certified.size()) + " local actions";
  return ok;
}

// ---------------------------------------------------------------------------
// 3. Finite balls: sphere transitivity at every inspected radius holds iff
//    the local action is 2-transitive, and the enumerated ball group size
//    matches the closed-form order (library and naive formula) exactly.

bool ball_enumeration(std::string& description) {
  struct BallCase {
    int degree;
    int max_radius;
    PermGroup f;
  };
  const Permutation swap12 = parse_cycles("(1 2)", 3);
  std::vector<BallCase> cases = {
      {3, 3, PermGroup(3, {})},
      {3, 3, PermGroup(3, {swap12})},
      {3, 3, testsupport::cyclic(3)},
      {3, 3, PermGroup::symmetric(3)},
      {4, 2, testsupport::cyclic(4)},
      {4, 2, testsupport::klein_four()},
      {4, 2, testsupport::dihedral(4)},
      {4, 2, testsupport::alternating(4)},
      {4, 2, PermGroup::symmetric(4)},
  };
  bool ok = true;
  for (const BallCase& c : cases) {
    bool all_spheres_transitive = true;
    for (int r = 1; r <= c.max_radius; ++r) {
      ColouredBall ball = build_ball(c.degree, r);
      std::vector<BallAutomorphism> group = ball_group(ball, c.f);
      unsigned long long closed_form = ball_group_order(ball, c.f);
      unsigned long long naive = testsupport::ball_order_oracle(ball, c.f);
      if (group.size() != closed_form || closed_form != naive) {
        ok = false;
        detail("order mismatch at degree " + std::to_string(c.degree) + ", radius " +
               std::to_string(r) + ": enumerated " + std::to_string(group.size()) +
               ", closed form " + std::to_string(closed_form) + ", naive " +
               std::to_string(naive));
      }
      if (sphere_orbits(ball, group, r).size() != 1) all_spheres_transitive = false;
    }
    if (all_spheres_transitive != testsupport::two_transitive_oracle(c.f)) {
      ok = false;
      detail("sphere transitivity disagrees with 2-transitivity for a degree-" +
             std::to_string(c.degree) + " group of order " + std::to_string(c.f.order()));
    }
  }
  description = "sphere transitivity tracks 2-transitivity and enumerations match "
                "the order formula (" +
                std::to_string(cases.size()) + " local actions)";
  return ok;
}

// ---------------------------------------------------------------------------
// 4. A double-coset count of at most two forces maximality: the brute-force
//    search must find no intermediate subgroup.

bool small_coset_maximality(std::string& description) {
  bool ok = true;
  std::size_t checked = 0;
  for (const testsupport::NamedGroup& named : testsupport::hecke_corpus()) {
    for (const PermGroup& h : all_subgroups(named.group)) {
      if (double_cosets(named.group, h, h).count() > 2) continue;
      ++checked;
      if (testsupport::has_intermediate_subgroup_oracle(named.group, h)) {
        ok = false;
        detail("intermediate subgroup found above an order-" + std::to_string(h.order()) +
               " subgroup of " + named.name);
      }
    }
  }
  description = "a double-coset count of at most two always means no intermediate "
                "subgroup (" +
                std::to_string(checked) + " pairs)";
  return ok;
}

// ---------------------------------------------------------------------------
// 5. Suppressing degree-2 vertices restricts the automorphism group
//    isomorphically onto the label-preserving automorphisms of the reduced
//    tree, and the reduction expands back bit-exactly.

using VertexMap = std::map<std::string, std::string>;

VertexMap restrict_map(const GraphAutomorphism& phi, const SerreGraph& reduced) {
  VertexMap out;
  for (const SerreVertex& v : reduced.vertices()) out[v.id] = phi.apply(v.id);
  return out;
}

VertexMap compose_maps(const VertexMap& outer, const VertexMap& inner) {
  VertexMap out;
  for (const auto& [v, w] : inner) out[v] = outer.at(w);
  return out;
}

bool reduction_isomorphism(std::string& description) {
  std::vector<SerreGraph> trees = testsupport::subdivided_trees();
  bool ok = trees.size() >= 10;
  if (!ok) detail("corpus has only " + std::to_string(trees.size()) + " trees");
  for (const SerreGraph& tree : trees) {
    ReductionResult reduction = suppress_degree_two(SerreTree(tree));

    if (dump_json(graph_to_json(expand_chains(reduction))) !=
        dump_json(graph_to_json(tree))) {
      ok = false;
      detail("expansion is not bit-exact for a tree with " +
             std::to_string(tree.vertices().size()) + " vertices");
    }

    std::map<std::string, std::string> labels;
    for (const auto& [edge_id, path] : reduction.edge_paths) {
      const SerreEdge& e = reduction.reduced.edge(edge_id);
      labels[std::min(e.id, e.reverse)] = std::to_string(path.edge_ids.size());
    }

    std::vector<GraphAutomorphism> original = automorphisms(tree);
    std::vector<GraphAutomorphism> reduced = automorphisms(reduction.reduced, &labels);

    std::set<VertexMap> reduced_maps;
    for (const GraphAutomorphism& phi : reduced) {
      reduced_maps.insert(restrict_map(phi, reduction.reduced));
    }
    std::set<VertexMap> images;
    bool tree_ok = original.size() == reduced.size();
    for (const GraphAutomorphism& phi : original) {
      VertexMap restricted = restrict_map(phi, reduction.reduced);
      if (!reduced_maps.count(restricted)) tree_ok = false;  // not into the target
      images.insert(restricted);
    }
    if (images.size() != original.size()) tree_ok = false;  // not injective
    for (const GraphAutomorphism& phi : original) {
      for (const GraphAutomorphism& psi : original) {
        VertexMap lhs = restrict_map(compose(phi, psi), reduction.reduced);
        VertexMap rhs = compose_maps(restrict_map(phi, reduction.reduced),
                                     restrict_map(psi, reduction.reduced));
        if (lhs != rhs) tree_ok = false;  // not a homomorphism
      }
    }
    if (!tree_ok) {
      ok = false;
      detail("restriction map fails to be an isomorphism for a tree with " +
             std::to_string(tree.vertices().size()) + " vertices (" +
             std::to_string(original.size()) + " vs " + std::to_string(reduced.size()) +
             " automorphisms)");
    }
  }
  description = "automorphisms restrict isomorphically onto every reduced tree and "
                "reduction round-trips exactly (" +
                std::to_string(trees.size()) + " trees)";
  return ok;
}

// ---------------------------------------------------------------------------
// 6. Every emitted certificate replays through independent witness
//    recomputation, and no verdict lacks its qualifying step.

bool certificate_soundness(const std::vector<std::pair<PermGroup, Certificate>>& certified,
                           std::string& description) {
  bool ok = true;
  std::size_t total = 0;
  for (const auto& [f, cert] : certified) {
    ++total;
    ReplayReport replay = replay_classify_bm(cert, f, f.degree());
    if (!replay.ok || !replay.failures.empty()) {
      ok = false;
      detail("replay failed for a degree-" + std::to_string(f.degree()) +
             " local action: " + (replay.failures.empty() ? "" : replay.failures.front()));
    }
    if (!verdict_supported(cert)) {
      ok = false;
      detail("verdict " + verdict_name(cert.verdict) + " lacks a qualifying step");
    }
  }
  for (const testsupport::EngineCase& c : testsupport::engine_corpus()) {
    ++total;
    Certificate cert = analyze(c.gog, c.assertions);
    ReplayReport replay = replay_analyze(cert, c.gog, c.assertions);
    if (!replay.ok || !replay.failures.empty()) {
      ok = false;
      detail("replay failed for " + c.name + ": " +
             (replay.failures.empty() ? "" : replay.failures.front()));
    }
    if (!verdict_supported(cert)) {
      ok = false;
      detail("verdict for " + c.name + " lacks a qualifying step");
    }
  }
  description = "all " + std::to_string(total) +
                " emitted certificates replay cleanly and every verdict is supported "
                "by a recorded step";
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Quotients of tree actions: orbit-stabiliser counting and lifted degrees.

bool quotient_consistency(std::string& description) {
  std::vector<testsupport::ActionCase> actions = testsupport::action_corpus();
  bool ok = actions.size() >= 5;
  if (!ok) detail("corpus has only " + std::to_string(actions.size()) + " actions");
  for (const testsupport::ActionCase& c : actions) {
    QuotientResult q = quotient_of_action(c.action);
    std::size_t group_order = c.action.group.order();
    for (const auto& [id, orbit] : q.vertex_orbits) {
      const GroupRef& ref = q.gog.vertex_groups.at(id);
      if (!ref.is_finite() || orbit.size() * ref.finite_group().order() != group_order) {
        ok = false;
        detail(c.name + ": vertex " + id + " violates orbit-stabiliser counting");
      }
      if (lifted_degree(q.gog, id) != c.action.tree.degree(q.vertex_lift.at(id))) {
        ok = false;
        detail(c.name + ": lifted degree at " + id + " differs from the tree degree of " +
               q.vertex_lift.at(id));
      }
    }
    for (const auto& [key, orbit] : q.edge_orbits) {
      if (!q.gog.edge_groups.count(key)) continue;  // directed ids share the key
      if (orbit.size() * q.gog.edge_groups.at(key).order() != group_order) {
        ok = false;
        detail(c.name + ": edge " + key + " violates orbit-stabiliser counting");
      }
    }
  }
  description = "orbit-stabiliser counting and lifted degrees hold for all " +
                std::to_string(actions.size()) + " tree actions";
  return ok;
}

}  // namespace

int main() {
  std::string description;

  report(1, hecke_dimensions(description), description);

  std::vector<std::pair<PermGroup, Certificate>> certified;
  report(2, classification_verdicts(certified, description), description);
  report(3, ball_enumeration(description), description);
  report(4, small_coset_maximality(description), description);
  report(5, reduction_isomorphism(description), description);
  report(6, certificate_soundness(certified, description), description);
  report(7, quotient_consistency(description), description);

  if (failed_criteria != 0) {
    std::cerr << failed_criteria << " criterion(s) failed\n";
    return 1;
  }
  return 0;
}
