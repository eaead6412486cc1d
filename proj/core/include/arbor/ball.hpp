#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arbor/perm_group.hpp"

namespace arbor {

// The ball of given radius in the `degree`-regular tree, with a legal edge
// colouring: every vertex sees each colour 0..degree-1 at most once, every
// interior vertex sees each exactly once, and an edge has the same colour
// from both ends.  Vertices are indexed in breadth-first order, root 0.
class ColouredBall {
 public:
  enum class Colouring {
    canonical,  // children take the free colours in increasing order
    scrambled,  // children take the free colours in a deterministic shuffle
  };

  ColouredBall(int degree, int radius, Colouring colouring = Colouring::canonical);

  int degree() const { return degree_; }
  int radius() const { return radius_; }
  int size() const { return static_cast<int>(parent_.size()); }

  int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
  int depth(int v) const { return depth_[static_cast<std::size_t>(v)]; }
  // Colour of the edge towards the parent; -1 for the root.
  int parent_colour(int v) const { return parent_colour_[static_cast<std::size_t>(v)]; }
  // Child of v along colour c, or -1 (parent edge / outside the ball).
  int child(int v, int c) const {
    return children_[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)];
  }
  bool is_interior(int v) const { return depth(v) < radius_; }

  // Vertex indices at exactly depth r (contiguous by construction).
  std::pair<int, int> sphere_range(int r) const;  // [first, last)

 private:
  int degree_;
  int radius_;
  std::vector<int> parent_;
  std::vector<int> parent_colour_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> children_;  // children_[v][colour]
  std::vector<int> sphere_first_;           // first index of each depth
};

ColouredBall build_ball(int degree, int radius,
                        ColouredBall::Colouring colouring = ColouredBall::Colouring::canonical);

// A root-fixing automorphism of the ball, as a vertex relabelling.
struct BallAutomorphism {
  std::vector<int> vertex_images;

  int apply(int v) const { return vertex_images[static_cast<std::size_t>(v)]; }
  bool operator==(const BallAutomorphism&) const = default;
  bool operator<(const BallAutomorphism& other) const {
    return vertex_images < other.vertex_images;
  }
};

BallAutomorphism compose(const BallAutomorphism& outer, const BallAutomorphism& inner);

// The colour permutation induced at an interior vertex v: colours of edges
// at v are mapped to colours of the image edges at g(v).
Permutation local_action(const ColouredBall& ball, const BallAutomorphism& g, int v);

// Exact order of the group enumerated by ball_group, computed from the
// product formula |F| * prod over interior non-root vertices u of
// |stab_F(parent_colour(u))|, without enumerating.
unsigned long long ball_group_order(const ColouredBall& ball, const PermGroup& f);

// All root-fixing automorphisms of the ball whose local action at every
// interior vertex lies in F.  F must act on `degree` colours with
// degree >= 3.  Enumerated depth-first over interior vertices with the
// compatibility constraint (the local action at a vertex must agree with the
// parent's on their shared colour); results are sorted canonically.  Throws
// ErrorKind::cap_exceeded if the order formula exceeds the ball-size cap.
std::vector<BallAutomorphism> ball_group(const ColouredBall& ball, const PermGroup& f,
                                         std::optional<std::size_t> cap = std::nullopt);

// Orbits of the given automorphisms on the radius-r sphere, each sorted,
// listed by least element.
std::vector<std::vector<int>> sphere_orbits(const ColouredBall& ball,
                                            const std::vector<BallAutomorphism>& group,
                                            int r);

// Factorisation of the fixator of the root edge (root, child 0) into the
// fixators of the two half-balls on either side, inside the ball group of F:
// checks |Fix(e)| = |Fix(h1)| * |Fix(h2)|, that the factors commute
// elementwise, and that they intersect trivially.
struct IndependenceReport {
  bool holds = false;
  std::size_t edge_fixator_order = 0;
  std::size_t half_fixator_orders[2] = {0, 0};
};
IndependenceReport check_independence(const PermGroup& f, int degree, int radius);

}  // namespace arbor
