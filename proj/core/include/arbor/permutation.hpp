#pragma once

#include <compare>
#include <string>
#include <vector>

namespace arbor {

// A bijection of {0, ..., degree-1}, stored as its image table.  Points are
// 0-based everywhere in the library; the cycle-notation parser and formatter
// below translate from/to the 1-based convention used in input and output.
class Permutation {
 public:
  Permutation() = default;  // degree 0
  // Validates that `images` is a bijection of {0, ..., images.size()-1}.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int degree);

  int degree() const { return static_cast<int>(images_.size()); }
  const std::vector<int>& images() const { return images_; }

  // Image of a point.  Bounds are the caller's responsibility.
  int operator()(int point) const { return images_[static_cast<std::size_t>(point)]; }

  // Function composition: (p.compose(q))(x) == p(q(x)).
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;

  bool is_identity() const;
  // Multiplicative order (lcm of cycle lengths).
  long long order() const;

  // Lexicographic comparison of image tables; this is the canonical order
  // used for deterministic group-element listings.
  auto operator<=>(const Permutation& other) const = default;
  bool operator==(const Permutation& other) const = default;

 private:
  std::vector<int> images_;
};

inline Permutation operator*(const Permutation& p, const Permutation& q) {
  return p.compose(q);
}

// Parses disjoint-cycle notation with 1-based points, e.g. "(1 2 3)(4 5)".
// Commas and whitespace both separate points; "()" and "" denote the
// identity.  Fixed points may be omitted.  Throws Error on malformed text,
// points outside 1..degree, or repeated points.
Permutation parse_cycles(const std::string& text, int degree);

// Formats as disjoint cycles with 1-based points; identity formats as "()".
std::string format_cycles(const Permutation& p);

}  // namespace arbor
