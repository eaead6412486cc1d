#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <utility>

namespace testsupport {

using arbor::ColouredBall;
using arbor::PermGroup;
using arbor::Permutation;
using arbor::SerreEdge;
using arbor::SerreGraph;
using arbor::SerreVertex;

std::vector<Permutation> closure_oracle(int degree, const std::vector<Permutation>& gens) {
  std::set<Permutation> seen{Permutation::identity(degree)};
  std::deque<Permutation> work(seen.begin(), seen.end());
  for (const Permutation& g : gens) {
    if (seen.insert(g).second) work.push_back(g);
  }
  while (!work.empty()) {
    Permutation a = work.front();
    work.pop_front();
    for (const Permutation& g : gens) {
      for (const Permutation& p : {a.compose(g), g.compose(a)}) {
        if (seen.insert(p).second) work.push_back(p);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

bool two_transitive_oracle(const PermGroup& group) {
  const int n = group.degree();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      for (int z = 0; z < n; ++z) {
        if (z == x) continue;
        bool reached = false;
        for (const Permutation& g : group.elements()) {
          if (g(x) == x && g(y) == z) {
            reached = true;
            break;
          }
        }
        if (!reached) return false;
      }
    }
  }
  return true;
}

std::size_t double_coset_count_oracle(const PermGroup& group, const PermGroup& h,
                                      const PermGroup& k) {
  std::vector<char> marked(group.order(), 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < group.order(); ++i) {
    if (marked[i]) continue;
    ++count;
    const Permutation& g = group.elements()[i];
    for (const Permutation& a : h.elements()) {
      for (const Permutation& b : k.elements()) {
        marked[static_cast<std::size_t>(group.index_of(a.compose(g).compose(b)))] = 1;
      }
    }
  }
  return count;
}

bool has_intermediate_subgroup_oracle(const PermGroup& group, const PermGroup& h) {
  for (const Permutation& g : group.elements()) {
    if (h.contains(g)) continue;
    std::vector<Permutation> gens = h.generators();
    gens.push_back(g);
    std::vector<Permutation> closed = closure_oracle(group.degree(), gens);
    if (closed.size() > h.order() && closed.size() < group.order()) return true;
  }
  return false;
}

unsigned long long ball_order_oracle(const ColouredBall& ball, const PermGroup& f) {
  unsigned long long total = f.order();
  for (int v = 1; v < ball.size(); ++v) {
    if (!ball.is_interior(v)) continue;
    const int colour = ball.parent_colour(v);
    unsigned long long stab = 0;
    for (const Permutation& g : f.elements()) {
      if (g(colour) == colour) ++stab;
    }
    total *= stab;
  }
  return total;
}

std::size_t graph_automorphism_count_oracle(const SerreGraph& graph,
                                            const std::map<std::string, std::string>* edge_labels) {
  std::vector<std::string> ids;
  for (const SerreVertex& v : graph.vertices()) ids.push_back(v.id);
  std::sort(ids.begin(), ids.end());

  std::map<std::pair<std::string, std::string>, int> directed;
  std::map<std::pair<std::string, std::string>, std::string> label_of;
  for (const SerreEdge& e : graph.edges()) {
    ++directed[{e.origin, e.target}];
    if (edge_labels != nullptr) {
      auto pair = std::minmax(e.origin, e.target);
      label_of[{pair.first, pair.second}] = edge_labels->at(std::min(e.id, e.reverse));
    }
  }

  std::vector<std::size_t> perm(ids.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::size_t count = 0;
  do {
    auto image = [&](const std::string& id) {
      std::size_t i = static_cast<std::size_t>(
          std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
      return ids[perm[i]];
    };
    bool ok = true;
    for (const SerreVertex& v : graph.vertices()) {
      if (graph.vertex(image(v.id)).boundary != v.boundary) {
        ok = false;
        break;
      }
    }
    for (auto it = directed.begin(); ok && it != directed.end(); ++it) {
      auto found = directed.find({image(it->first.first), image(it->first.second)});
      if (found == directed.end() || found->second != it->second) ok = false;
    }
    if (ok && edge_labels != nullptr) {
      for (const auto& [pair, label] : label_of) {
        std::string a = image(pair.first);
        std::string b = image(pair.second);
        if (b < a) std::swap(a, b);
        auto found = label_of.find({a, b});
        if (found == label_of.end() || found->second != label) {
          ok = false;
          break;
        }
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace testsupport
