#include "arbor/hecke.hpp"

#include <utility>

#include "arbor/error.hpp"

namespace arbor {

namespace {

void require_subgroup(const PermGroup& g, const PermGroup& k, const char* what) {
  if (!g.contains_subgroup(k)) {
    throw_invalid(std::string(what) + " is not a subgroup of the ambient group");
  }
}

}  // namespace

GroupAlgebraElement::GroupAlgebraElement(PermGroup group)
    : group_(std::move(group)), coefficients_(group_.order(), mpq_class(0)) {}

const mpq_class& GroupAlgebraElement::coefficient(const Permutation& g) const {
  std::ptrdiff_t index = group_.index_of(g);
  if (index < 0) throw_invalid("coefficient lookup outside the group");
  return coefficients_[static_cast<std::size_t>(index)];
}

void GroupAlgebraElement::set_coefficient(const Permutation& g, const mpq_class& value) {
  std::ptrdiff_t index = group_.index_of(g);
  if (index < 0) throw_invalid("coefficient assignment outside the group");
  coefficients_[static_cast<std::size_t>(index)] = value;
}

bool GroupAlgebraElement::operator==(const GroupAlgebraElement& other) const {
  if (!group_.same_group(other.group_)) return false;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (cmp(coefficients_[i], other.coefficients_[i]) != 0) return false;
  }
  return true;
}

GroupAlgebraElement unit_element(const PermGroup& group, const Permutation& g) {
  GroupAlgebraElement result(group);
  result.set_coefficient(g, 1);
  return result;
}

GroupAlgebraElement add(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  if (!a.group().same_group(b.group())) throw_invalid("sum across different groups");
  GroupAlgebraElement result(a.group());
  const auto& elements = a.group().elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    result.set_coefficient(elements[i], a.coefficients()[i] + b.coefficients()[i]);
  }
  return result;
}

GroupAlgebraElement scale(const mpq_class& c, const GroupAlgebraElement& a) {
  GroupAlgebraElement result(a.group());
  const auto& elements = a.group().elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    result.set_coefficient(elements[i], c * a.coefficients()[i]);
  }
  return result;
}

GroupAlgebraElement convolve(const GroupAlgebraElement& f, const GroupAlgebraElement& h) {
  if (!f.group().same_group(h.group())) {
    throw_invalid("convolution across different groups");
  }
  const PermGroup& group = f.group();
  const auto& elements = group.elements();
  GroupAlgebraElement result(group);
  // (f*h)(x) = sum_y f(y) h(y^{-1} x); accumulate as sum over (y, z) of
  // f(y) h(z) onto x = y*z.
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (cmp(f.coefficients()[i], 0) == 0) continue;
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (cmp(h.coefficients()[j], 0) == 0) continue;
      Permutation x = elements[i] * elements[j];
      result.set_coefficient(x, result.coefficient(x) +
                                    f.coefficients()[i] * h.coefficients()[j]);
    }
  }
  return result;
}

GroupAlgebraElement adjoint(const GroupAlgebraElement& a) {
  GroupAlgebraElement result(a.group());
  const auto& elements = a.group().elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    result.set_coefficient(elements[i].inverse(), a.coefficients()[i]);
  }
  return result;
}

GroupAlgebraElement averaging_projection(const PermGroup& g, const PermGroup& k) {
  require_subgroup(g, k, "averaging subgroup");
  GroupAlgebraElement result(g);
  mpq_class weight(1, static_cast<unsigned long>(k.order()));
  for (const Permutation& element : k.elements()) {
    result.set_coefficient(element, weight);
  }
  return result;
}

std::size_t rational_rank(std::vector<std::vector<mpq_class>> rows) {
  std::size_t rank = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, column)
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (auto [pr, pc] : pivots) {
      if (cmp(rows[r][pc], 0) == 0) continue;
      mpq_class factor = rows[r][pc] / rows[pr][pc];
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        rows[r][c] -= factor * rows[pr][c];
      }
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (cmp(rows[r][c], 0) != 0) {
        pivots.emplace_back(r, c);
        ++rank;
        break;
      }
    }
  }
  return rank;
}

std::size_t corner_dimension(const PermGroup& g, const PermGroup& k) {
  require_subgroup(g, k, "corner subgroup");
  GroupAlgebraElement p = averaging_projection(g, k);
  std::vector<std::vector<mpq_class>> rows;
  rows.reserve(g.order());
  for (const Permutation& element : g.elements()) {
    GroupAlgebraElement v = convolve(convolve(p, unit_element(g, element)), p);
    rows.push_back(v.coefficients());
  }
  return rational_rank(std::move(rows));
}

bool is_central(const GroupAlgebraElement& p, const PermGroup& g) {
  if (!p.group().same_group(g)) throw_invalid("centrality check across different groups");
  // u_g p u_g^{-1} has coefficient p(g^{-1} x g) at x.
  for (const Permutation& element : g.elements()) {
    Permutation inverse = element.inverse();
    for (const Permutation& x : g.elements()) {
      if (cmp(p.coefficient(inverse * x * element), p.coefficient(x)) != 0) return false;
    }
  }
  return true;
}

HeckeDimensionReport verify_hecke_dimension(const PermGroup& g, const PermGroup& k) {
  HeckeDimensionReport report;
  report.corner_dim = corner_dimension(g, k);
  report.double_coset_count = double_cosets(g, k, k).count();
  report.equal = report.corner_dim == report.double_coset_count;
  return report;
}

}  // namespace arbor
