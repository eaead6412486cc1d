#include "arbor/permutation.hpp"

#include <numeric>
#include <sstream>

#include "arbor/error.hpp"

namespace arbor {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = degree();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int value : images_) {
    if (value < 0 || value >= n) {
      throw_invalid("permutation image " + std::to_string(value) +
                    " out of range for degree " + std::to_string(n));
    }
    if (seen[static_cast<std::size_t>(value)]) {
      throw_invalid("permutation image table repeats " + std::to_string(value));
    }
    seen[static_cast<std::size_t>(value)] = true;
  }
}

Permutation Permutation::identity(int degree) {
  if (degree < 0) throw_invalid("negative permutation degree");
  std::vector<int> images(static_cast<std::size_t>(degree));
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (degree() != other.degree()) {
    throw_invalid("composing permutations of degrees " + std::to_string(degree()) +
                  " and " + std::to_string(other.degree()));
  }
  std::vector<int> images(images_.size());
  for (std::size_t x = 0; x < images.size(); ++x) {
    images[x] = images_[static_cast<std::size_t>(other.images_[x])];
  }
  Permutation result;
  result.images_ = std::move(images);  // composition of bijections needs no re-validation
  return result;
}

Permutation Permutation::inverse() const {
  std::vector<int> images(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) {
    images[static_cast<std::size_t>(images_[x])] = static_cast<int>(x);
  }
  Permutation result;
  result.images_ = std::move(images);
  return result;
}

bool Permutation::is_identity() const {
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (images_[x] != static_cast<int>(x)) return false;
  }
  return true;
}

long long Permutation::order() const {
  long long result = 1;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t start = 0; start < images_.size(); ++start) {
    if (seen[start]) continue;
    long long length = 0;
    std::size_t x = start;
    while (!seen[x]) {
      seen[x] = true;
      x = static_cast<std::size_t>(images_[x]);
      ++length;
    }
    result = std::lcm(result, length);
  }
  return result;
}

Permutation parse_cycles(const std::string& text, int degree) {
  if (degree < 0) throw_invalid("negative permutation degree");
  std::vector<int> images(static_cast<std::size_t>(degree));
  std::iota(images.begin(), images.end(), 0);
  std::vector<bool> used(static_cast<std::size_t>(degree), false);

  std::size_t i = 0;
  auto skip_blank = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
  };
  skip_blank();
  while (i < text.size()) {
    if (text[i] != '(') throw_invalid("cycle notation: expected '(' in \"" + text + "\"");
    ++i;
    std::vector<int> cycle;
    skip_blank();
    while (i < text.size() && text[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw_invalid("cycle notation: expected a point in \"" + text + "\"");
      }
      int value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + (text[i] - '0');
        ++i;
      }
      if (value < 1 || value > degree) {
        throw_invalid("cycle notation: point " + std::to_string(value) +
                      " outside 1.." + std::to_string(degree));
      }
      int point = value - 1;
      if (used[static_cast<std::size_t>(point)]) {
        throw_invalid("cycle notation: point " + std::to_string(value) + " repeated");
      }
      used[static_cast<std::size_t>(point)] = true;
      cycle.push_back(point);
      skip_blank();
    }
    if (i >= text.size()) throw_invalid("cycle notation: unterminated cycle in \"" + text + "\"");
    ++i;  // consume ')'
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      images[static_cast<std::size_t>(cycle[k])] = cycle[(k + 1) % cycle.size()];
    }
    skip_blank();
  }
  return Permutation(std::move(images));
}

std::string format_cycles(const Permutation& p) {
  std::ostringstream out;
  std::vector<bool> seen(static_cast<std::size_t>(p.degree()), false);
  bool any = false;
  for (int start = 0; start < p.degree(); ++start) {
    if (seen[static_cast<std::size_t>(start)] || p(start) == start) {
      seen[static_cast<std::size_t>(start)] = true;
      continue;
    }
    any = true;
    out << '(';
    int x = start;
    bool first = true;
    while (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = true;
      if (!first) out << ' ';
      out << (x + 1);
      first = false;
      x = p(x);
    }
    out << ')';
  }
  if (!any) return "()";
  return out.str();
}

}  // namespace arbor
