#include "arbor/group_ref.hpp"

#include <algorithm>

#include "arbor/error.hpp"

namespace arbor {

GroupRef GroupRef::finite(std::string leaf_id, PermGroup group) {
  GroupRef ref;
  ref.leaf_id_ = std::move(leaf_id);
  ref.group_ = std::make_shared<const PermGroup>(std::move(group));
  return ref;
}

GroupRef GroupRef::amalgam(GroupRef left, GroupRef right, PermGroup edge_group,
                           std::string left_leaf, Homomorphism left_inclusion,
                           std::string right_leaf, Homomorphism right_inclusion,
                           std::string label) {
  if (!left.has_leaf(left_leaf)) {
    throw_invalid("amalgam: left side has no leaf \"" + left_leaf + "\"");
  }
  if (!right.has_leaf(right_leaf)) {
    throw_invalid("amalgam: right side has no leaf \"" + right_leaf + "\"");
  }
  for (const std::string& id : left.leaf_ids()) {
    if (right.has_leaf(id)) {
      throw_invalid("amalgam: leaf \"" + id + "\" appears on both sides");
    }
  }
  if (!left_inclusion.domain().same_group(edge_group) ||
      !right_inclusion.domain().same_group(edge_group)) {
    throw_invalid("amalgam: inclusion domain is not the edge group");
  }
  if (!left_inclusion.codomain().same_group(left.leaf_group(left_leaf))) {
    throw_invalid("amalgam: left inclusion does not target leaf \"" + left_leaf + "\"");
  }
  if (!right_inclusion.codomain().same_group(right.leaf_group(right_leaf))) {
    throw_invalid("amalgam: right inclusion does not target leaf \"" + right_leaf + "\"");
  }
  if (!left_inclusion.is_injective() || !right_inclusion.is_injective()) {
    throw_invalid("amalgam: inclusions must be injective");
  }
  auto node = std::make_shared<AmalgamNode>(AmalgamNode{
      std::move(left), std::move(right), std::move(edge_group),
      std::move(left_leaf), std::move(right_leaf),
      std::move(left_inclusion), std::move(right_inclusion), std::move(label)});
  GroupRef ref;
  ref.node_ = std::move(node);
  return ref;
}

const PermGroup& GroupRef::finite_group() const {
  if (!is_finite()) throw_invalid("group ref is not finite");
  return *group_;
}

const std::string& GroupRef::finite_leaf_id() const {
  if (!is_finite()) throw_invalid("group ref is not finite");
  return leaf_id_;
}

const GroupRef::AmalgamNode& GroupRef::amalgam_node() const {
  if (!is_amalgam()) throw_invalid("group ref is not an amalgam");
  return *node_;
}

std::vector<std::string> GroupRef::leaf_ids() const {
  std::vector<std::string> result;
  if (is_finite()) {
    result.push_back(leaf_id_);
  } else {
    for (const std::string& id : node_->left.leaf_ids()) result.push_back(id);
    for (const std::string& id : node_->right.leaf_ids()) result.push_back(id);
    std::sort(result.begin(), result.end());
  }
  return result;
}

bool GroupRef::has_leaf(const std::string& leaf_id) const {
  if (is_finite()) return leaf_id_ == leaf_id;
  return node_->left.has_leaf(leaf_id) || node_->right.has_leaf(leaf_id);
}

const PermGroup& GroupRef::leaf_group(const std::string& leaf_id) const {
  if (is_finite()) {
    if (leaf_id_ != leaf_id) throw_invalid("unknown leaf \"" + leaf_id + "\"");
    return *group_;
  }
  if (node_->left.has_leaf(leaf_id)) return node_->left.leaf_group(leaf_id);
  return node_->right.leaf_group(leaf_id);
}

bool GroupRef::is_compact() const { return collapsed_order().has_value(); }

std::optional<std::size_t> GroupRef::collapsed_order() const {
  if (is_finite()) return group_->order();
  if (node_->degenerate()) return node_->edge_group.order();
  return std::nullopt;
}

std::string GroupRef::describe() const {
  if (is_finite()) return "finite(" + std::to_string(group_->order()) + ")";
  return "amalgam(" + node_->left.describe() + ", " + node_->right.describe() +
         "; edge " + std::to_string(node_->edge_group.order()) + ")";
}

bool GroupRef::AmalgamNode::left_surjective() const {
  std::optional<std::size_t> side = left.collapsed_order();
  return side.has_value() && left_inclusion.image_order() == *side;
}

bool GroupRef::AmalgamNode::right_surjective() const {
  std::optional<std::size_t> side = right.collapsed_order();
  return side.has_value() && right_inclusion.image_order() == *side;
}

}  // namespace arbor
