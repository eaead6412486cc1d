#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arbor/hecke.hpp"
#include "catalog.hpp"
#include "oracles.hpp"

using namespace arbor;
using testsupport::alternating;
using testsupport::cyclic;
using testsupport::klein_four;

namespace {

PermGroup s3() { return PermGroup::symmetric(3); }
PermGroup c2_3() { return PermGroup(3, {parse_cycles("(1 2)", 3)}); }

}  // namespace

TEST_CASE("unit elements convolve like group elements") {
  PermGroup g = s3();
  for (const Permutation& a : g.elements()) {
    for (const Permutation& b : g.elements()) {
      CHECK(convolve(unit_element(g, a), unit_element(g, b)) ==
            unit_element(g, a.compose(b)));
    }
  }
}

TEST_CASE("convolution is associative and distributes over sums") {
  PermGroup g = s3();
  GroupAlgebraElement x = add(unit_element(g, g.elements()[1]),
                              scale(mpq_class(2, 3), unit_element(g, g.elements()[4])));
  GroupAlgebraElement y = add(scale(mpq_class(-1, 2), unit_element(g, g.elements()[2])),
                              unit_element(g, g.elements()[5]));
  GroupAlgebraElement z = add(unit_element(g, g.elements()[0]),
                              scale(mpq_class(7), unit_element(g, g.elements()[3])));
  CHECK(convolve(convolve(x, y), z) == convolve(x, convolve(y, z)));
  CHECK(convolve(x, add(y, z)) == add(convolve(x, y), convolve(x, z)));
}

TEST_CASE("adjoint is an involution reversing products") {
  PermGroup g = s3();
  GroupAlgebraElement x = add(unit_element(g, g.elements()[1]),
                              scale(mpq_class(5, 2), unit_element(g, g.elements()[3])));
  GroupAlgebraElement y = scale(mpq_class(-3), unit_element(g, g.elements()[4]));
  CHECK(adjoint(adjoint(x)) == x);
  CHECK(adjoint(convolve(x, y)) == convolve(adjoint(y), adjoint(x)));
}

TEST_CASE("averaging projection is a self-adjoint idempotent") {
  for (const auto& [name, g] : testsupport::hecke_corpus()) {
    CAPTURE(name);
    for (const PermGroup& k : all_subgroups(g)) {
      GroupAlgebraElement p = averaging_projection(g, k);
      CHECK(convolve(p, p) == p);
      CHECK(adjoint(p) == p);
    }
  }
}

TEST_CASE("the projection is central exactly for normal subgroups") {
  PermGroup g4 = PermGroup::symmetric(4);
  CHECK(is_central(averaging_projection(g4, alternating(4)), g4));
  CHECK(is_central(averaging_projection(g4, klein_four()), g4));
  CHECK_FALSE(is_central(averaging_projection(g4, testsupport::dihedral(4)), g4));
  CHECK_FALSE(is_central(averaging_projection(s3(), c2_3()), s3()));
}

TEST_CASE("corner dimension of the order-2 subgroup of S3") {
  CHECK(corner_dimension(s3(), c2_3()) == 2);
  HeckeDimensionReport report = verify_hecke_dimension(s3(), c2_3());
  CHECK(report.corner_dim == 2);
  CHECK(report.double_coset_count == 2);
  CHECK(report.equal);
}

TEST_CASE("corner dimension equals the double-coset count") {
  PermGroup g4 = PermGroup::symmetric(4);
  for (const PermGroup& k : all_subgroups(g4)) {
    HeckeDimensionReport report = verify_hecke_dimension(g4, k);
    CHECK(report.equal);
    CHECK(report.double_coset_count == testsupport::double_coset_count_oracle(g4, k, k));
  }
  // The extreme subgroups bracket the possible dimensions.
  CHECK(corner_dimension(g4, g4) == 1);
  CHECK(corner_dimension(g4, PermGroup::trivial(4)) == g4.order());
}

TEST_CASE("rational rank is exact") {
  using Row = std::vector<mpq_class>;
  CHECK(rational_rank({}) == 0);
  CHECK(rational_rank({Row{0, 0}}) == 0);
  CHECK(rational_rank({Row{1, 2}, Row{2, 4}}) == 1);
  CHECK(rational_rank({Row{1, 2}, Row{2, 5}}) == 2);
  // A case where floating point would drown: tiny pivots of huge spread.
  Row a{mpq_class(1, 1000000000), 1};
  Row b{1, mpq_class(1000000000)};
  CHECK(rational_rank({a, b}) == 1);  // b == 1e9 * a exactly
  Row c{1, mpq_class(1000000001)};
  CHECK(rational_rank({a, c}) == 2);
}

TEST_CASE("coefficient access is by group element") {
  PermGroup g = s3();
  GroupAlgebraElement x(g);
  CHECK(x.coefficients().size() == g.order());
  x.set_coefficient(g.elements()[2], mpq_class(3, 7));
  CHECK(x.coefficient(g.elements()[2]) == mpq_class(3, 7));
  CHECK(x.coefficient(g.elements()[1]) == 0);
}
