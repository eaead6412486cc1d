#include "arbor/perm_group.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "arbor/error.hpp"

namespace arbor {

namespace {

std::size_t effective_cap(std::optional<std::size_t> cap) {
  return cap.value_or(global_caps().group_order);
}

}  // namespace

PermGroup::PermGroup() : PermGroup(0, {}) {}

std::vector<Permutation> group_closure(int degree,
                                       const std::vector<Permutation>& generators,
                                       std::size_t cap) {
  for (const Permutation& g : generators) {
    if (g.degree() != degree) {
      throw_invalid("generator degree " + std::to_string(g.degree()) +
                    " does not match group degree " + std::to_string(degree));
    }
  }
  std::set<Permutation> seen;
  std::queue<Permutation> frontier;
  Permutation id = Permutation::identity(degree);
  seen.insert(id);
  frontier.push(id);
  while (!frontier.empty()) {
    Permutation current = std::move(frontier.front());
    frontier.pop();
    for (const Permutation& g : generators) {
      Permutation next = current.compose(g);
      if (seen.insert(next).second) {
        if (seen.size() > cap) {
          throw_cap("group closure exceeds cap of " + std::to_string(cap) + " elements");
        }
        frontier.push(std::move(next));
      }
    }
  }
  return std::vector<Permutation>(seen.begin(), seen.end());
}

PermGroup::PermGroup(int degree, std::vector<Permutation> generators,
                     std::optional<std::size_t> cap)
    : degree_(degree), generators_(std::move(generators)) {
  if (degree < 0) throw_invalid("negative group degree");
  elements_ = std::make_shared<const std::vector<Permutation>>(
      group_closure(degree_, generators_, effective_cap(cap)));
}

PermGroup PermGroup::trivial(int degree) { return PermGroup(degree, {}); }

PermGroup PermGroup::symmetric(int degree) {
  if (degree < 0) throw_invalid("negative group degree");
  std::vector<Permutation> gens;
  if (degree >= 2) {
    std::vector<int> swap01(static_cast<std::size_t>(degree));
    std::vector<int> cycle(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) {
      swap01[static_cast<std::size_t>(i)] = i;
      cycle[static_cast<std::size_t>(i)] = (i + 1) % degree;
    }
    swap01[0] = 1;
    swap01[1] = 0;
    gens.emplace_back(std::move(swap01));
    gens.emplace_back(std::move(cycle));
  }
  return PermGroup(degree, std::move(gens));
}

PermGroup PermGroup::from_elements(int degree, std::vector<Permutation> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (elements.empty()) throw_invalid("element list is empty");
  std::vector<Permutation> gens;
  std::vector<Permutation> closure = {Permutation::identity(degree)};
  for (const Permutation& e : elements) {
    if (e.degree() != degree) throw_invalid("element degree mismatch");
    if (!std::binary_search(closure.begin(), closure.end(), e)) {
      gens.push_back(e);
      closure = group_closure(degree, gens, global_caps().group_order);
    }
  }
  if (closure != elements) {
    throw_invalid("element list is not closed under composition");
  }
  PermGroup result{raw_tag{}};
  result.degree_ = degree;
  result.generators_ = std::move(gens);
  result.elements_ = std::make_shared<const std::vector<Permutation>>(std::move(closure));
  return result;
}

bool PermGroup::contains(const Permutation& p) const { return index_of(p) >= 0; }

std::ptrdiff_t PermGroup::index_of(const Permutation& p) const {
  if (p.degree() != degree_) return -1;
  auto it = std::lower_bound(elements_->begin(), elements_->end(), p);
  if (it == elements_->end() || *it != p) return -1;
  return it - elements_->begin();
}

const Permutation& PermGroup::identity() const {
  auto idx = index_of(Permutation::identity(degree_));
  return (*elements_)[static_cast<std::size_t>(idx)];
}

bool PermGroup::is_abelian() const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    for (std::size_t j = i + 1; j < generators_.size(); ++j) {
      if (generators_[i].compose(generators_[j]) != generators_[j].compose(generators_[i])) {
        return false;
      }
    }
  }
  return true;
}

bool PermGroup::is_transitive() const {
  if (degree_ == 0) return true;
  return static_cast<int>(orbit(*this, 0).size()) == degree_;
}

bool PermGroup::contains_subgroup(const PermGroup& sub) const {
  if (sub.degree() != degree_) return false;
  for (const Permutation& p : sub.elements()) {
    if (!contains(p)) return false;
  }
  return true;
}

bool PermGroup::is_normal_subgroup(const PermGroup& n) const {
  if (!contains_subgroup(n)) return false;
  for (const Permutation& g : generators_) {
    Permutation gi = g.inverse();
    for (const Permutation& h : n.generators()) {
      if (!n.contains(g.compose(h).compose(gi))) return false;
    }
  }
  return true;
}

bool PermGroup::same_group(const PermGroup& other) const {
  return degree_ == other.degree_ && *elements_ == *other.elements_;
}

std::vector<int> orbit(const PermGroup& group, int point) {
  if (point < 0 || point >= group.degree()) {
    throw_invalid("orbit point " + std::to_string(point) + " out of range");
  }
  std::vector<bool> seen(static_cast<std::size_t>(group.degree()), false);
  std::vector<int> result;
  std::queue<int> frontier;
  seen[static_cast<std::size_t>(point)] = true;
  frontier.push(point);
  result.push_back(point);
  while (!frontier.empty()) {
    int x = frontier.front();
    frontier.pop();
    for (const Permutation& g : group.generators()) {
      int y = g(x);
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        frontier.push(y);
        result.push_back(y);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<std::vector<int>> orbits(const PermGroup& group) {
  std::vector<std::vector<int>> result;
  std::vector<bool> covered(static_cast<std::size_t>(group.degree()), false);
  for (int p = 0; p < group.degree(); ++p) {
    if (covered[static_cast<std::size_t>(p)]) continue;
    std::vector<int> o = orbit(group, p);
    for (int x : o) covered[static_cast<std::size_t>(x)] = true;
    result.push_back(std::move(o));
  }
  return result;
}

PermGroup point_stabilizer(const PermGroup& group, int point) {
  if (point < 0 || point >= group.degree()) {
    throw_invalid("stabilizer point " + std::to_string(point) + " out of range");
  }
  std::vector<Permutation> fixed;
  for (const Permutation& g : group.elements()) {
    if (g(point) == point) fixed.push_back(g);
  }
  return PermGroup::from_elements(group.degree(), std::move(fixed));
}

bool is_two_transitive(const PermGroup& group) {
  const int n = group.degree();
  if (n < 1) throw_invalid("two-transitivity needs degree >= 1");
  for (int x = 0; x < n; ++x) {
    // Orbit of the least point != x under the stabiliser of x must be
    // everything except x.  For n <= 2 there is at most one other point and
    // the condition holds automatically.
    std::vector<Permutation> stab;
    for (const Permutation& g : group.elements()) {
      if (g(x) == x) stab.push_back(g);
    }
    int y = (x == 0) ? 1 : 0;
    if (y >= n) continue;  // n == 1: nothing to check
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<int> frontier;
    seen[static_cast<std::size_t>(y)] = true;
    frontier.push(y);
    std::size_t reached = 1;
    while (!frontier.empty()) {
      int p = frontier.front();
      frontier.pop();
      for (const Permutation& g : stab) {
        int q = g(p);
        if (!seen[static_cast<std::size_t>(q)]) {
          seen[static_cast<std::size_t>(q)] = true;
          frontier.push(q);
          ++reached;
        }
      }
    }
    if (reached != static_cast<std::size_t>(n - 1)) return false;
  }
  return true;
}

DoubleCosets double_cosets(const PermGroup& group, const PermGroup& h,
                           const PermGroup& k) {
  if (!group.contains_subgroup(h)) throw_invalid("H is not a subgroup of G");
  if (!group.contains_subgroup(k)) throw_invalid("K is not a subgroup of G");
  const auto& elements = group.elements();
  std::vector<bool> seen(elements.size(), false);
  DoubleCosets result;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (seen[i]) continue;
    // Elements are scanned in canonical order, so the first unseen element is
    // the least member of its double coset.
    const Permutation& rep = elements[i];
    std::size_t size = 0;
    for (const Permutation& a : h.elements()) {
      Permutation ar = a.compose(rep);
      for (const Permutation& b : k.elements()) {
        std::ptrdiff_t idx = group.index_of(ar.compose(b));
        if (idx < 0) throw_invalid("double coset left the group; H or K invalid");
        if (!seen[static_cast<std::size_t>(idx)]) {
          seen[static_cast<std::size_t>(idx)] = true;
          ++size;
        }
      }
    }
    result.representatives.push_back(rep);
    result.sizes.push_back(size);
  }
  return result;
}

MaximalityResult maximality(const PermGroup& group, const PermGroup& h) {
  if (!group.contains_subgroup(h)) throw_invalid("H is not a subgroup of G");
  if (h.order() >= group.order()) throw_invalid("H must be a proper subgroup of G");
  MaximalityResult result;
  result.double_coset_count = double_cosets(group, h, h).count();
  if (result.double_coset_count <= 2) {
    result.status = MaximalityResult::Status::maximal_by_double_coset_bound;
    return result;
  }
  for (const Permutation& g : group.elements()) {
    if (h.contains(g)) continue;
    std::vector<Permutation> gens = h.generators();
    gens.push_back(g);
    PermGroup extended(group.degree(), std::move(gens));
    if (extended.order() < group.order()) {
      result.status = MaximalityResult::Status::not_maximal;
      result.intermediate = std::move(extended);
      return result;
    }
  }
  result.status = MaximalityResult::Status::maximal_by_exhaustion;
  return result;
}

Homomorphism::Homomorphism(PermGroup domain, PermGroup codomain,
                           std::vector<Permutation> images_by_element)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      images_(std::move(images_by_element)) {
  if (images_.size() != domain_.order()) {
    throw_invalid("homomorphism image table size does not match domain order");
  }
  for (const Permutation& p : images_) {
    if (!codomain_.contains(p)) {
      throw_invalid("homomorphism image lies outside the codomain");
    }
  }
  // Full multiplicativity check; domain orders here are small by design.
  const auto& elems = domain_.elements();
  for (std::size_t a = 0; a < elems.size(); ++a) {
    for (std::size_t b = 0; b < elems.size(); ++b) {
      std::ptrdiff_t ab = domain_.index_of(elems[a].compose(elems[b]));
      if (images_[static_cast<std::size_t>(ab)] != images_[a].compose(images_[b])) {
        throw_invalid("map is not a homomorphism: images violate a relation");
      }
    }
  }
}

Permutation Homomorphism::apply(const Permutation& p) const {
  std::ptrdiff_t idx = domain_.index_of(p);
  if (idx < 0) throw_invalid("homomorphism applied outside its domain");
  return images_[static_cast<std::size_t>(idx)];
}

std::vector<Permutation> Homomorphism::generator_images() const {
  std::vector<Permutation> result;
  result.reserve(domain_.generators().size());
  for (const Permutation& g : domain_.generators()) result.push_back(apply(g));
  return result;
}

PermGroup Homomorphism::image() const {
  std::vector<Permutation> imgs = images_;
  return PermGroup::from_elements(codomain_.degree(), std::move(imgs));
}

std::size_t Homomorphism::image_order() const {
  std::set<Permutation> distinct(images_.begin(), images_.end());
  return distinct.size();
}

bool Homomorphism::is_injective() const { return image_order() == domain_.order(); }

bool Homomorphism::is_surjective() const { return image_order() == codomain_.order(); }

Homomorphism make_homomorphism(const PermGroup& domain,
                               const std::vector<Permutation>& generator_images,
                               const PermGroup& codomain,
                               bool require_injective) {
  if (generator_images.size() != domain.generators().size()) {
    throw_invalid("need one image per domain generator");
  }
  for (const Permutation& p : generator_images) {
    if (!codomain.contains(p)) throw_invalid("generator image lies outside the codomain");
  }
  const auto& elems = domain.elements();
  std::vector<Permutation> images(elems.size());
  std::vector<bool> known(elems.size(), false);
  std::ptrdiff_t id_idx = domain.index_of(Permutation::identity(domain.degree()));
  images[static_cast<std::size_t>(id_idx)] = Permutation::identity(codomain.degree());
  known[static_cast<std::size_t>(id_idx)] = true;
  std::queue<std::size_t> frontier;
  frontier.push(static_cast<std::size_t>(id_idx));
  while (!frontier.empty()) {
    std::size_t x = frontier.front();
    frontier.pop();
    for (std::size_t i = 0; i < domain.generators().size(); ++i) {
      std::ptrdiff_t y = domain.index_of(elems[x].compose(domain.generators()[i]));
      Permutation candidate = images[x].compose(generator_images[i]);
      auto yi = static_cast<std::size_t>(y);
      if (!known[yi]) {
        images[yi] = std::move(candidate);
        known[yi] = true;
        frontier.push(yi);
      } else if (images[yi] != candidate) {
        throw_invalid("generator images are inconsistent: a relation is violated");
      }
    }
  }
  // The Homomorphism constructor re-verifies multiplicativity on the full
  // table, which is the real consistency proof; the BFS above only extends.
  Homomorphism result(domain, codomain, std::move(images));
  if (require_injective && !result.is_injective()) {
    throw_invalid("homomorphism is not injective");
  }
  return result;
}

Homomorphism inclusion_homomorphism(const PermGroup& sub, const PermGroup& super) {
  if (!super.contains_subgroup(sub)) {
    throw_invalid("inclusion requires a subgroup of the target");
  }
  std::vector<Permutation> images(sub.elements().begin(), sub.elements().end());
  return Homomorphism(sub, super, std::move(images));
}

Homomorphism compose(const Homomorphism& outer, const Homomorphism& inner) {
  std::vector<Permutation> images;
  images.reserve(inner.domain().order());
  for (const Permutation& img : inner.images_by_element()) {
    images.push_back(outer.apply(img));
  }
  return Homomorphism(inner.domain(), outer.codomain(), std::move(images));
}

std::vector<PermGroup> all_subgroups(const PermGroup& group) {
  // Worklist search: every subgroup arises from a smaller one by adjoining a
  // single element, starting from the trivial subgroup.
  std::map<std::vector<Permutation>, std::vector<Permutation>> seen;  // elements -> generators
  std::queue<std::vector<Permutation>> frontier;
  PermGroup triv = PermGroup::trivial(group.degree());
  seen.emplace(triv.elements(), std::vector<Permutation>{});
  frontier.push(triv.elements());
  while (!frontier.empty()) {
    std::vector<Permutation> current = std::move(frontier.front());
    frontier.pop();
    const std::vector<Permutation>& gens = seen.at(current);
    for (const Permutation& g : group.elements()) {
      if (std::binary_search(current.begin(), current.end(), g)) continue;
      std::vector<Permutation> extended_gens = gens;
      extended_gens.push_back(g);
      std::vector<Permutation> closure =
          group_closure(group.degree(), extended_gens, global_caps().group_order);
      if (seen.find(closure) == seen.end()) {
        seen.emplace(closure, std::move(extended_gens));
        frontier.push(std::move(closure));
      }
    }
  }
  std::vector<PermGroup> result;
  result.reserve(seen.size());
  for (const auto& [elements, gens] : seen) {
    PermGroup subgroup(group.degree(), gens);
    result.push_back(std::move(subgroup));
  }
  std::sort(result.begin(), result.end(), [](const PermGroup& a, const PermGroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return result;
}

}  // namespace arbor
