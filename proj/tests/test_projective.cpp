#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pslab/projective.hpp"

using namespace pslab;

namespace {

std::mt19937_64 rng(771234);

Cx rand_cx(double s = 1.0) {
  std::uniform_real_distribution<double> d(-s, s);
  return Cx(d(rng), d(rng));
}

RationalFunction rand_moebius() {
  while (true) {
    Cx a = rand_cx(), b = rand_cx(), c = rand_cx(), d = rand_cx();
    if (std::abs(a * d - b * c) > 0.05)
      return RationalFunction({b, a}, {d, c});
  }
}

RationalFunction rand_rf(int dn, int dd) {
  Poly n(static_cast<size_t>(dn) + 1), d(static_cast<size_t>(dd) + 1);
  for (Cx& c : n) c = rand_cx();
  for (Cx& c : d) c = rand_cx();
  d.back() += Cx(2.0);
  return RationalFunction(n, d);
}

const RationalFunction X = RationalFunction::x();

}  // namespace

TEST_CASE("schwarzian kernel is Moebius") {
  // f = (2x+1)/(x-3) has S(f) = 0 identically in canonical form
  RationalFunction f({Cx(1), Cx(2)}, {Cx(-3), Cx(1)});
  CHECK(schwarzian(f).is_zero());

  for (int t = 0; t < 30; ++t) CHECK(schwarzian(rand_moebius()).is_zero());

  // non-Moebius maps have nonzero Schwarzian
  for (int t = 0; t < 10; ++t) {
    auto g = rand_rf(3, 1);
    if (g.deg_num() <= 1 && g.deg_den() <= 1) continue;
    CHECK(!schwarzian(g).is_zero());
  }
}

TEST_CASE("schwarzian power-map values") {
  // S(x^k) = (1-k^2)/(2x^2)
  auto s2 = schwarzian(X * X);
  RationalFunction expect2({Cx(-1.5)}, {Cx(0), Cx(0), Cx(1)});
  CHECK(rf_probe_distance(s2, expect2) < 1e-12);

  auto s3 = schwarzian(X * X * X);
  RationalFunction expect3({Cx(-4)}, {Cx(0), Cx(0), Cx(1)});
  CHECK(rf_probe_distance(s3, expect3) < 1e-12);
}

TEST_CASE("cocycle identity") {
  // f Moebius: S(f.g) = S(g)
  for (int t = 0; t < 5; ++t) {
    auto f = rand_moebius();
    CHECK(schwarzian_cocycle_check(f, X * X) < 1e-10);
  }
  CHECK(schwarzian_cocycle_check(X, X) < 1e-14);
  for (int t = 0; t < 20; ++t) {
    auto f = rand_rf(3, 0);
    auto g = rand_rf(3, 0);
    CHECK(schwarzian_cocycle_check(f, g) < 1e-9);
  }
}

TEST_CASE("structure difference") {
  auto d1 = structure_difference(X, rand_moebius());
  CHECK(d1.q.is_zero());
  auto d2 = structure_difference(X, X * X);
  RationalFunction expect({Cx(-1.5)}, {Cx(0), Cx(0), Cx(1)});
  CHECK(rf_probe_distance(d2.q, expect) < 1e-12);
  auto d3 = structure_difference(X * X, X * X);
  CHECK(d3.q.is_zero());
}

TEST_CASE("polar divisor") {
  // q = -2x -> {(inf, 5)}
  auto D1 = polar_divisor({RationalFunction::constant(Cx(-2)) * X});
  REQUIRE(D1.entries.size() == 1);
  CHECK(D1.entries[0].point.infinite);
  CHECK(D1.entries[0].mult == 5);

  // q = 1/x^2 -> {(0,2), (inf,2)}
  auto D2 = polar_divisor({RationalFunction::constant(Cx(1)) / (X * X)});
  REQUIRE(D2.entries.size() == 2);
  CHECK(D2.degree() == 4);

  // q = 1 -> {(inf, 4)}
  auto D3 = polar_divisor({RationalFunction::constant(Cx(1))});
  REQUIRE(D3.entries.size() == 1);
  CHECK(D3.entries[0].mult == 4);

  CHECK_THROWS_AS(polar_divisor({RationalFunction::zero()}), ZeroDifferential);
}

TEST_CASE("polar divisor degree invariant under Moebius pullback") {
  for (int t = 0; t < 6; ++t) {
    // build q with known poles
    RationalFunction q = RationalFunction::constant(rand_cx()) / (X * X) +
                         RationalFunction::constant(rand_cx()) /
                             ((X - RationalFunction::constant(Cx(1))) *
                              (X - RationalFunction::constant(Cx(1))));
    auto g = rand_moebius();
    RationalFunction g1 = rf_derivative(g);
    RationalFunction pulled = g1 * g1 * rf_compose(q, g);
    CHECK(polar_divisor({q}).degree() == polar_divisor({pulled}).degree());
  }
}

TEST_CASE("residue and index") {
  // q = 3/(8x^2): res2 = lim x^2 q = 3/8, theta = sqrt(1 - 3/4) = 1/2
  RationalFunction q1({Cx(0.375)}, {Cx(0), Cx(0), Cx(1)});
  auto r1 = residue_and_index({q1}, P1Point::at(Cx(0)));
  CHECK(r1.order == 2);
  CHECK(std::abs(*r1.res2 - Cx(0.375)) < 1e-12);
  CHECK(std::abs(*r1.theta - Cx(0.5)) < 1e-12);

  // q = -3/(2x^2): res2 = -3/2, theta = 2
  RationalFunction q2({Cx(-1.5)}, {Cx(0), Cx(0), Cx(1)});
  auto r2 = residue_and_index({q2}, P1Point::at(Cx(0)));
  CHECK(std::abs(*r2.res2 - Cx(-1.5)) < 1e-12);
  CHECK(std::abs(*r2.theta - Cx(2)) < 1e-12);

  // q = 1/x: res2 = 0, theta = 1
  RationalFunction q3({Cx(1)}, {Cx(0), Cx(1)});
  auto r3 = residue_and_index({q3}, P1Point::at(Cx(0)));
  CHECK(r3.order == 1);
  CHECK(std::abs(*r3.res2) < 1e-12);
  CHECK(std::abs(*r3.theta - Cx(1)) < 1e-12);

  // theta^2 + 2 res2 = 1
  for (int t = 0; t < 10; ++t) {
    RationalFunction q = RationalFunction::constant(rand_cx()) / (X * X) +
                         RationalFunction::constant(rand_cx()) / X;
    auto r = residue_and_index({q}, P1Point::at(Cx(0)));
    Cx th = *r.theta;
    CHECK(std::abs(th * th + Cx(2) * (*r.res2) - Cx(1)) < 1e-12);
  }

  CHECK_THROWS_AS(residue_and_index({q3}, P1Point::at(Cx(5))), NotAPole);
}

TEST_CASE("dimension bookkeeping") {
  CHECK(quadratic_space_dimension(0, {2, 2, 2}) == 3);
  CHECK(quadratic_space_dimension(2, {}) == 3);
  CHECK(quadratic_space_dimension(0, {5}) == 2);
  CHECK(marked_points_count(2) == 0);
  CHECK(marked_points_count(5) == 3);
  CHECK(marked_points_count(3) == 1);
}
