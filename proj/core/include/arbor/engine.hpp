#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arbor/certificate.hpp"
#include "arbor/graph_of_groups.hpp"
#include "arbor/group_ref.hpp"
#include "arbor/perm_group.hpp"

namespace arbor {

// Caller-supplied facts consumed by analyze that finite quotient data cannot
// decide: non-amenability of the acting group and type-preservation of the
// action.  Both are recorded in the certificate when used, never defaulted.
struct Assertions {
  bool nonamenable_group = false;
  bool type_preserving = false;
};

// A finite group mapped injectively into a named leaf of a GroupRef.
struct Embedding {
  std::string leaf;
  Homomorphism hom;  // domain: the embedded group; codomain: the leaf group
};
struct EmbeddedGroup {
  GroupRef group;
  Embedding embedding;
};

// Outcome of a hypothesis check: a certificate step when the hypotheses
// hold, or the reason they do not.
struct StepOutcome {
  bool ok = false;
  std::optional<CertStep> step;
  std::string refusal;
};

// Amalgam non-amenability over a small subgroup: succeeds iff K has at
// least three double cosets in the counting side (computed exactly when
// that side is compact, by the non-compactness rule otherwise) and embeds
// properly into the other side.
StepOutcome check_lemma_3_1(const PermGroup& k, const EmbeddedGroup& counting_side,
                            const EmbeddedGroup& proper_side);

// Tree-of-groups non-amenability: case "segment" (three vertices, outer
// inclusions proper, at most one equality into the middle vertex group) or
// case "ends" (at least three terminal edges with proper inclusions into
// their terminal vertex groups).
StepOutcome check_lemma_3_2(const GraphOfGroups& gog);

// Full decision pipeline over quotient data, dispatching on circuit rank.
// Requires the type-preserving assertion always, and the non-amenability
// assertion for the rank-1 and non-edge rank-0 branches.
Certificate analyze(const GraphOfGroups& gog, const Assertions& assertions);

// Classification of the universal group with prescribed local action F on
// the degree-regular tree: TypeI iff F is 2-transitive, with a stabilizer
// orbit witness and (for small degree) sphere-orbit corroboration.
Certificate classify_bm(const PermGroup& f, int degree);

struct ReplayReport {
  bool ok = true;
  std::vector<std::string> failures;
};

// Structural invariant on verdicts: NonamenableLvN needs a qualifying lemma
// step (or the verified failure of 2-transitivity), TypeI needs the verified
// 2-transitivity witness, Inconclusive needs its reason step.
bool verdict_supported(const Certificate& cert);

// Independent recomputation of every witness in a certificate against the
// original input: fresh transitivity, orbit, double-coset, rank, order and
// properness computations.  Collects all mismatches.
ReplayReport replay_classify_bm(const Certificate& cert, const PermGroup& f, int degree);
ReplayReport replay_analyze(const Certificate& cert, const GraphOfGroups& gog,
                            const Assertions& assertions);

}  // namespace arbor
