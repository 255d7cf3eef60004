#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pslab/riccati.hpp"

using namespace pslab;

namespace {

std::mt19937_64 rng(430217);

Cx rand_cx(double s = 1.0) {
  std::uniform_real_distribution<double> d(-s, s);
  return Cx(d(rng), d(rng));
}

RationalFunction rand_poly(int deg) {
  Poly p(static_cast<size_t>(deg) + 1);
  for (Cx& c : p) c = rand_cx();
  p.back() += Cx(1.5);
  return RationalFunction(p, {Cx(1)});
}

RiccatiEq rand_riccati() {
  return {rand_poly(2), rand_poly(1), rand_poly(2), false};
}

double riccati_distance(const RiccatiEq& A, const RiccatiEq& B) {
  return std::max({rf_probe_distance(A.alpha, B.alpha),
                   rf_probe_distance(A.beta, B.beta),
                   rf_probe_distance(A.gamma, B.gamma)});
}

const RationalFunction X = RationalFunction::x();
const RationalFunction One = RationalFunction::constant(Cx(1));

RiccatiEq oper_eq(const RationalFunction& q) {
  return {One, RationalFunction::zero(), q / RationalFunction::constant(Cx(2)), false};
}

MoebiusGauge inverse(const MoebiusGauge& G) {
  return {G.d, -G.b, -G.c, G.a};
}

}  // namespace

TEST_CASE("gauge examples") {
  RiccatiEq R{RationalFunction::constant(Cx(2)), RationalFunction::zero(), One, false};
  auto same = gauge_apply(R, MoebiusGauge::identity());
  CHECK(riccati_distance(R, same) < 1e-13);

  // y = (1/2) y~: (2,0,1) -> (1,0,2)
  auto scaled = gauge_apply(R, MoebiusGauge::scaling(RationalFunction::constant(Cx(0.5))));
  RiccatiEq expect{One, RationalFunction::zero(), RationalFunction::constant(Cx(2)), false};
  CHECK(riccati_distance(scaled, expect) < 1e-13);

  // translations leave the quadratic coefficient alone
  for (int t = 0; t < 5; ++t) {
    auto R2 = rand_riccati();
    auto moved = gauge_apply(R2, MoebiusGauge::translation(rand_poly(2)));
    CHECK(rf_probe_distance(moved.alpha, R2.alpha) < 1e-11);
  }

  MoebiusGauge bad{X, One, X, One};  // det = 0
  CHECK_THROWS_AS(gauge_apply(R, bad), DegenerateGauge);
}

TEST_CASE("gauge action composes") {
  for (int t = 0; t < 8; ++t) {
    auto R = rand_riccati();
    MoebiusGauge G{rand_poly(1), rand_poly(1), RationalFunction::zero(), One};
    MoebiusGauge H{rand_poly(1), rand_poly(0), rand_poly(1), rand_poly(1)};
    auto lhs = gauge_apply(gauge_apply(R, G), H);
    auto rhs = gauge_apply(R, compose(G, H));
    CHECK(riccati_distance(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("oper normal form") {
  // already normalized: unchanged
  RationalFunction q0 = rand_poly(3);
  auto r0 = oper_normal_form(oper_eq(q0), MoebiusGauge::identity());
  CHECK(rf_probe_distance(r0.form.q, q0) < 1e-11);

  // (2,0,1) with section {y=inf} -> q = 4
  RiccatiEq R{RationalFunction::constant(Cx(2)), RationalFunction::zero(), One, false};
  auto r1 = oper_normal_form(R, MoebiusGauge::identity());
  CHECK(rf_probe_distance(r1.form.q, RationalFunction::constant(Cx(4))) < 1e-13);

  // horizontal foliation with section graph(x^2) -> q = S(x^2) = -3/(2x^2)
  RiccatiEq H{RationalFunction::zero(), RationalFunction::zero(), RationalFunction::zero(), false};
  MoebiusGauge section{X * X, -One, One, RationalFunction::zero()};
  auto r2 = oper_normal_form(H, section);
  RationalFunction expect({Cx(-1.5)}, {Cx(0), Cx(0), Cx(1)});
  CHECK(rf_probe_distance(r2.form.q, expect) < 1e-12);

  // the horizontal foliation keeps {y=inf} as a leaf
  CHECK_THROWS_AS(oper_normal_form(H, MoebiusGauge::identity()), SectionInvariant);
}

TEST_CASE("oper q is gauge invariant") {
  for (int t = 0; t < 6; ++t) {
    RationalFunction q = rand_poly(2) / (X * X);
    auto R = oper_eq(q);
    MoebiusGauge G{rand_poly(1), rand_poly(1), rand_poly(0), rand_poly(1)};
    if (G.det().is_zero()) continue;
    auto R2 = gauge_apply(R, G);
    auto back = oper_normal_form(R2, inverse(G));
    CHECK(rf_probe_distance(back.form.q, q) < 1e-9);
  }
}

TEST_CASE("elementary transformation inverse pair") {
  for (int t = 0; t < 6; ++t) {
    auto R = rand_riccati();
    Cx x0 = rand_cx();
    auto down = elem_transform(R, ElemCenter{x0, true, Cx(0)});
    CHECK(down.delta == -1);
    auto back = elem_transform(down.eq, ElemCenter{x0, false, Cx(0)});
    CHECK(back.delta == +1);
    CHECK(riccati_distance(back.eq, R) < 1e-10);
  }
}

TEST_CASE("pole order minimization") {
  for (int n = 1; n <= 8; ++n) {
    Poly den(static_cast<size_t>(n) + 1, Cx(0));
    den.back() = Cx(1);
    RationalFunction q = RationalFunction(Poly{rand_cx() + Cx(2)}, den) + rand_poly(1);
    auto res = minimize_pole_order(q, P1Point::at(Cx(0)));
    CHECK(res.m == (n + 1) / 2);
    CHECK(static_cast<int>(res.gauge_log.size()) == n / 2);
    CHECK(riccati_pole_order(res.R, P1Point::at(Cx(0))) == res.m);
    // re-normalizing must recover q exactly, so the oper pole is n <= 2m
    auto rec = oper_normal_form(res.R, MoebiusGauge::identity());
    CHECK(rf_probe_distance(rec.form.q, q) < 1e-9);
  }

  // Airy at infinity: n=5, m=3
  RationalFunction airy = RationalFunction::constant(Cx(-2)) * X;
  auto res = minimize_pole_order(airy, P1Point::inf());
  CHECK(res.m == 3);
  CHECK(res.R.infinity_chart);
  CHECK(riccati_pole_order(res.R, P1Point::inf()) == 3);
  auto rec = oper_normal_form(res.R, MoebiusGauge::identity());
  CHECK(rf_probe_distance(rec.form.q, infinity_chart_quadratic(airy)) < 1e-10);

  CHECK_THROWS_AS(minimize_pole_order(rand_poly(1), P1Point::at(Cx(0))), NotAPole);
}

TEST_CASE("transversality restoration") {
  auto mk = [](int n) {
    Poly den(static_cast<size_t>(n) + 1, Cx(0));
    den.back() = Cx(1);
    return RationalFunction(Poly{Cx(1.3, 0.4)}, den);
  };
  CHECK(restore_transversality(oper_eq(mk(5)), P1Point::at(Cx(0))).l == 3);
  CHECK(restore_transversality(oper_eq(mk(4)), P1Point::at(Cx(0))).l == 2);
  CHECK(restore_transversality(oper_eq(mk(1)), P1Point::at(Cx(0))).l == 1);

  // after the move the quadratic coefficient carries the full pole l
  auto r = restore_transversality(oper_eq(mk(4)), P1Point::at(Cx(0)));
  CHECK(rf_pole_order(r.R.alpha, P1Point::at(Cx(0))) == r.l);

  CHECK_THROWS_AS(restore_transversality(oper_eq(rand_poly(1)), P1Point::at(Cx(0))),
                  AlreadyTransverse);
}

TEST_CASE("self intersection") {
  CHECK(self_intersection(0, 3) == -1);
  CHECK(self_intersection(1, 0) == 0);
  CHECK(self_intersection(2, 0) == -2);
  for (int g = 0; g <= 3; ++g)
    for (int d = 0; d <= 6; ++d) {
      int s = self_intersection(g, d);
      CHECK(((s % 2 + 2) % 2) == (d % 2));  // (-1)^{sigma.sigma} = (-1)^{deg D}
    }
}
