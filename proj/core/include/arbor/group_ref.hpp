#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arbor/perm_group.hpp"

namespace arbor {

// Reference to a vertex group: either a finite permutation group or an
// amalgamated free product built from two GroupRefs over a finite edge
// group.  Leaves carry string ids (vertex ids of the graph they came from);
// the two monomorphisms of an amalgam node each map the edge group into a
// named leaf group of the corresponding side.
//
// An amalgam node is degenerate when both inclusions are surjective onto
// their whole side — then the product adds nothing and equals the edge
// group.  is_compact() is true for finite refs and for amalgams in which
// every node is degenerate (the expression collapses); any non-degenerate
// node makes the amalgam infinite.
class GroupRef {
 public:
  struct AmalgamNode;

  static GroupRef finite(std::string leaf_id, PermGroup group);
  static GroupRef amalgam(GroupRef left, GroupRef right, PermGroup edge_group,
                          std::string left_leaf, Homomorphism left_inclusion,
                          std::string right_leaf, Homomorphism right_inclusion,
                          std::string label = "");

  bool is_finite() const { return node_ == nullptr; }
  bool is_amalgam() const { return node_ != nullptr; }

  // Finite accessors (throw on amalgams).
  const PermGroup& finite_group() const;
  const std::string& finite_leaf_id() const;

  // Amalgam accessor (throws on finite refs).
  const AmalgamNode& amalgam_node() const;

  // All leaf ids of the expression, sorted.
  std::vector<std::string> leaf_ids() const;
  bool has_leaf(const std::string& leaf_id) const;
  // The finite group sitting at a leaf.
  const PermGroup& leaf_group(const std::string& leaf_id) const;

  // True when the whole expression collapses to a finite group.
  bool is_compact() const;
  // Order of the collapsed group; nullopt when not compact.
  std::optional<std::size_t> collapsed_order() const;

  // Human-oriented structural summary, e.g. "S3" sizes: "finite(6)" or
  // "amalgam(finite(6), finite(4); edge 2)".
  std::string describe() const;

 private:
  GroupRef() = default;
  // Finite payload:
  std::string leaf_id_;
  std::shared_ptr<const PermGroup> group_;
  // Amalgam payload:
  std::shared_ptr<const AmalgamNode> node_;
};

struct GroupRef::AmalgamNode {
  GroupRef left;
  GroupRef right;
  PermGroup edge_group;
  std::string left_leaf;
  std::string right_leaf;
  Homomorphism left_inclusion;   // edge_group -> left.leaf_group(left_leaf)
  Homomorphism right_inclusion;  // edge_group -> right.leaf_group(right_leaf)
  std::string label;             // optional provenance tag (e.g. edge id)

  // Surjectivity of an inclusion onto its whole side: the side must collapse
  // and the image must fill the collapsed order.
  bool left_surjective() const;
  bool right_surjective() const;
  bool degenerate() const { return left_surjective() && right_surjective(); }
};

}  // namespace arbor
