#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arbor/caps.hpp"
#include "arbor/permutation.hpp"

namespace arbor {

// A finite permutation group on {0, ..., degree-1}, represented by its full
// element list in canonical (lexicographic) order.  Construction closes the
// generators; the closure aborts with ErrorKind::cap_exceeded if the order
// would exceed `cap` (default: global_caps().group_order).
class PermGroup {
 public:
  // The trivial group of degree 0.
  PermGroup();
  PermGroup(int degree, std::vector<Permutation> generators,
            std::optional<std::size_t> cap = std::nullopt);

  static PermGroup trivial(int degree);
  // Full symmetric group; intended for small degrees (order is degree!).
  static PermGroup symmetric(int degree);

  // Builds a group from an explicit element list, which must be closed under
  // composition and inverses (validated).  A small generating set is derived.
  static PermGroup from_elements(int degree, std::vector<Permutation> elements);

  int degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  // All elements, sorted lexicographically by image table.
  const std::vector<Permutation>& elements() const { return *elements_; }
  std::size_t order() const { return elements_->size(); }

  bool contains(const Permutation& p) const;
  // Index into elements(), or -1 if not a member.
  std::ptrdiff_t index_of(const Permutation& p) const;
  const Permutation& identity() const;

  bool is_trivial() const { return order() == 1; }
  bool is_abelian() const;
  bool is_transitive() const;

  // True if every element of `sub` belongs to this group (degrees must match).
  bool contains_subgroup(const PermGroup& sub) const;
  // True if `n` is a normal subgroup of this group.
  bool is_normal_subgroup(const PermGroup& n) const;

  bool same_group(const PermGroup& other) const;

 private:
  struct raw_tag {};
  explicit PermGroup(raw_tag) {}
  int degree_ = 0;
  std::vector<Permutation> generators_;
  std::shared_ptr<const std::vector<Permutation>> elements_;
};

// Breadth-first closure of `generators` under composition.  Returns the full
// element list sorted canonically.  Throws ErrorKind::cap_exceeded when more
// than `cap` elements would be enumerated.
std::vector<Permutation> group_closure(int degree,
                                       const std::vector<Permutation>& generators,
                                       std::size_t cap);

// Orbit of `point` under the group, sorted ascending.
std::vector<int> orbit(const PermGroup& group, int point);

// Orbits of all points, sorted by least element.
std::vector<std::vector<int>> orbits(const PermGroup& group);

// Subgroup of elements fixing `point`.
PermGroup point_stabilizer(const PermGroup& group, int point);

// True when the stabiliser of every point acts transitively on the remaining
// points.  Degenerate degrees follow the same rule: on 2 points the lone
// remaining point always forms one orbit, and on 1 point the condition is
// vacuous, so both cases return true for every group.  Requires degree >= 1.
bool is_two_transitive(const PermGroup& group);

// Double cosets H\G/K.  `h` and `k` must be subgroups of `group`.
// Representatives are canonical (the least element of each class) and listed
// in increasing order; sizes are aligned with representatives.
struct DoubleCosets {
  std::vector<Permutation> representatives;
  std::vector<std::size_t> sizes;
  std::size_t count() const { return representatives.size(); }
};
DoubleCosets double_cosets(const PermGroup& group, const PermGroup& h,
                           const PermGroup& k);

// Maximality of a proper subgroup H < G.
//
//   maximal_by_double_coset_bound : |H\G/H| <= 2 forces maximality, no search run
//   not_maximal                   : an intermediate subgroup H < M < G was found
//   maximal_by_exhaustion         : the closure of H together with any single
//                                   outside element is all of G (this search is
//                                   complete: any intermediate M contains some
//                                   g outside H, and <H, g> stays inside M)
struct MaximalityResult {
  enum class Status {
    maximal_by_double_coset_bound,
    not_maximal,
    maximal_by_exhaustion,
  };
  Status status;
  std::size_t double_coset_count = 0;
  // Present only for not_maximal: a witness with H < M < G.
  std::optional<PermGroup> intermediate;
};
MaximalityResult maximality(const PermGroup& group, const PermGroup& h);

// A homomorphism between two finite permutation groups, stored as the full
// element-to-element map (aligned with domain().elements()).
class Homomorphism {
 public:
  Homomorphism(PermGroup domain, PermGroup codomain,
               std::vector<Permutation> images_by_element);

  const PermGroup& domain() const { return domain_; }
  const PermGroup& codomain() const { return codomain_; }

  Permutation apply(const Permutation& p) const;
  const std::vector<Permutation>& images_by_element() const { return images_; }
  // Images of domain().generators(), in order.
  std::vector<Permutation> generator_images() const;

  // The image subgroup, as a group on the codomain's points.
  PermGroup image() const;
  std::size_t image_order() const;
  bool is_injective() const;
  bool is_surjective() const;

 private:
  PermGroup domain_;
  PermGroup codomain_;
  std::vector<Permutation> images_;
};

// Extends `generator_images` (aligned with domain.generators()) to the whole
// domain and verifies multiplicativity on the full product table.  Throws on
// inconsistent images, and on non-injective maps when `require_injective`.
Homomorphism make_homomorphism(const PermGroup& domain,
                               const std::vector<Permutation>& generator_images,
                               const PermGroup& codomain,
                               bool require_injective = false);

// The identity embedding of a subgroup.  Validates containment.
Homomorphism inclusion_homomorphism(const PermGroup& sub, const PermGroup& super);

// Composite x -> outer(inner(x)).  inner's codomain must contain inner's
// images inside outer's domain.
Homomorphism compose(const Homomorphism& outer, const Homomorphism& inner);

// Every subgroup of `group` (including the trivial group and `group` itself),
// sorted by order and then by element list.  Exhaustive search; intended for
// groups of modest order (worklist of subgroups, single-element extensions).
std::vector<PermGroup> all_subgroups(const PermGroup& group);

}  // namespace arbor
