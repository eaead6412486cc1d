#pragma once

#include <cstddef>
#include <gmpxx.h>

#include <vector>

#include "arbor/perm_group.hpp"

namespace arbor {

// An element of the rational group algebra of a finite permutation group,
// stored densely: coefficients_[i] belongs to group.elements()[i].  All
// arithmetic is exact; no floating point enters this module.
class GroupAlgebraElement {
 public:
  explicit GroupAlgebraElement(PermGroup group);

  const PermGroup& group() const { return group_; }
  const std::vector<mpq_class>& coefficients() const { return coefficients_; }

  const mpq_class& coefficient(const Permutation& g) const;
  void set_coefficient(const Permutation& g, const mpq_class& value);

  bool operator==(const GroupAlgebraElement& other) const;

 private:
  PermGroup group_;
  std::vector<mpq_class> coefficients_;
};

// The basis element u_g.
GroupAlgebraElement unit_element(const PermGroup& group, const Permutation& g);

GroupAlgebraElement add(const GroupAlgebraElement& a, const GroupAlgebraElement& b);
GroupAlgebraElement scale(const mpq_class& c, const GroupAlgebraElement& a);

// Convolution product, with the convention (f*h)(x) = sum_y f(y) h(y^{-1} x).
GroupAlgebraElement convolve(const GroupAlgebraElement& f, const GroupAlgebraElement& h);

// The coefficient-transpose a*(g) = a(g^{-1}).
GroupAlgebraElement adjoint(const GroupAlgebraElement& a);

// p_K = (1/|K|) * sum over k in K of u_k.  K must be a subgroup of G.
// The result is idempotent and self-adjoint.
GroupAlgebraElement averaging_projection(const PermGroup& g, const PermGroup& k);

// Dimension of the corner p_K C[G] p_K: the exact rational rank of the span
// of {p * u_g * p : g in G}.
std::size_t corner_dimension(const PermGroup& g, const PermGroup& k);

// True iff u_g * p * u_g^{-1} = p for every g in G.
bool is_central(const GroupAlgebraElement& p, const PermGroup& g);

// Rank over the rationals of a family of dense vectors (Gaussian
// elimination, exact arithmetic).
std::size_t rational_rank(std::vector<std::vector<mpq_class>> rows);

// The corner dimension and the double-coset count |K\G/K|, computed
// independently (linear rank vs. coset enumeration), with an equality flag.
struct HeckeDimensionReport {
  std::size_t corner_dim = 0;
  std::size_t double_coset_count = 0;
  bool equal = false;
};
HeckeDimensionReport verify_hecke_dimension(const PermGroup& g, const PermGroup& k);

}  // namespace arbor
