#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pslab/errors.hpp"
#include "pslab/lab.hpp"
#include "pslab/riccati.hpp"

using namespace pslab;

namespace {

const RationalFunction X = RationalFunction::x();
const RationalFunction One = RationalFunction::constant(Cx(1));

RationalFunction rc(Cx c) { return RationalFunction::constant(c); }

RationalFunction hypergeometric_q(double t0, double t1, double ti) {
  const Cx c((t0 * t0 + t1 * t1 - ti * ti - 1) / 2, 0);
  return rc(Cx((1 - t0 * t0) / 2)) / (X * X) +
         rc(Cx((1 - t1 * t1) / 2)) / ((X - One) * (X - One)) +
         rc(c) / (X * (X - One));
}

FamilyConfig::Pole pole(P1Point p, int order, Cx residue) {
  return FamilyConfig::Pole{p, order, residue};
}

// |formal residue| of q at p, compared modulo the sign ambiguity
double residue_gap(const RationalFunction& q, P1Point p, Cx target) {
  const auto pm = minimize_pole_order(q, p);
  const Cx got = riccati_formal_data(pm.R, p, pm.m + kFormalDefaultPad).residue;
  return std::min(std::abs(got - target), std::abs(got + target));
}

}  // namespace

TEST_CASE("moduli dimension bookkeeping") {
  using V = std::vector<int>;
  CHECK(moduli_dimension(0, V{2, 2, 2}, CountMode::ResiduesFixed) == 0);
  CHECK(moduli_dimension(0, V{2, 2, 2}, CountMode::ResiduesFree) == 3);
  CHECK(moduli_dimension(0, V{2, 2, 2, 2}, CountMode::ResiduesFixed) == 2);
  CHECK(moduli_dimension(0, V{5}, CountMode::ResiduesFixed) == 0);  // nu = 3/2
  CHECK(moduli_dimension(0, V{6}, CountMode::ResiduesFixed) == 0);
  CHECK(moduli_dimension(0, V{4, 2}, CountMode::ResiduesFixed) == 0);
  CHECK(moduli_dimension(1, V{2}, CountMode::ResiduesFixed) == 2);

  // the free/fixed difference counts exactly the integral-index poles, and
  // the fixed dimension is even and nonnegative, across {1..8}^d, d <= 4
  std::vector<V> tuples;
  for (int d = 1; d <= 4; ++d) {
    V o(d, 1);
    while (true) {
      tuples.push_back(o);
      int k = d - 1;
      while (k >= 0 && o[k] == 8) o[k--] = 1;
      if (k < 0) break;
      ++o[k];
    }
  }
  for (const V& o : tuples) {
    int integral = 0;
    for (int n : o)
      if (n <= 2 || n % 2 == 0) ++integral;
    try {
      const int fixed = moduli_dimension(0, o, CountMode::ResiduesFixed);
      CHECK(moduli_dimension(0, o, CountMode::ResiduesFree) - fixed == integral);
      CHECK(fixed >= 0);
      CHECK(fixed % 2 == 0);
    } catch (const HypothesisViolated&) {
      // too few marked points; both modes must agree on the refusal
      CHECK_THROWS_AS(moduli_dimension(0, o, CountMode::ResiduesFree),
                      HypothesisViolated);
    }
  }

  // marked-point hypothesis: 1 per regular pole, n-2 per irregular pole
  CHECK_THROWS_AS(moduli_dimension(0, V{2, 2}, CountMode::ResiduesFixed),
                  HypothesisViolated);
  CHECK_THROWS_AS(moduli_dimension(0, V{3}, CountMode::ResiduesFixed),
                  HypothesisViolated);
  CHECK_THROWS_AS(moduli_dimension(0, V{3, 3}, CountMode::ResiduesFixed),
                  HypothesisViolated);
  CHECK_THROWS_AS(moduli_dimension(0, V{}, CountMode::ResiduesFixed),
                  HypothesisViolated);
  CHECK_THROWS_AS(moduli_dimension(1, V{}, CountMode::ResiduesFixed),
                  HypothesisViolated);
  CHECK_THROWS_AS(moduli_dimension(0, V{0, 2, 2}, CountMode::ResiduesFixed),
                  BadInput);
}

TEST_CASE("rigid 3-pole family reproduces the 2F1 oper") {
  const double t0 = 1.0 / 3, t1 = 0.25, ti = 0.4;
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 2, Cx(t0 / 2)),
               pole(P1Point::at(Cx(1)), 2, Cx(t1 / 2)),
               pole(P1Point::inf(), 2, Cx(ti / 2))};
  const Family fam = build_family(cfg);
  CHECK(fam.dim == 0);
  const ProjectiveStructureP1 P = family_structure(fam, {});
  CHECK(rf_probe_distance(P.q, hypergeometric_q(t0, t1, ti)) < 1e-12);
}

TEST_CASE("4-pole family: residues prescribed, two parameters") {
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 2, Cx(0.15)),
               pole(P1Point::at(Cx(1)), 2, Cx(0.21)),
               pole(P1Point::at(Cx(1.3, 0.8)), 2, Cx(0.1, 0.05)),
               pole(P1Point::inf(), 2, Cx(0.27))};
  const Family fam = build_family(cfg);
  CHECK(fam.dim == 2);
  REQUIRE(fam.movable == std::vector<size_t>{2});

  const std::vector<Cx> params{Cx(0.3, -0.1), Cx(1.25, 0.85)};
  const ProjectiveStructureP1 P = family_structure(fam, params);
  CHECK(rf_pole_order(P.q, P1Point::at(Cx(0))) == 2);
  CHECK(rf_pole_order(P.q, P1Point::at(params[1])) == 2);
  CHECK(rf_pole_order(infinity_chart_quadratic(P.q), P1Point::at(Cx(0))) == 2);
  CHECK(residue_gap(P.q, P1Point::at(Cx(0)), Cx(0.15)) < 1e-9);
  CHECK(residue_gap(P.q, P1Point::at(Cx(1)), Cx(0.21)) < 1e-9);
  CHECK(residue_gap(P.q, P1Point::at(params[1]), Cx(0.1, 0.05)) < 1e-9);
  CHECK(residue_gap(P.q, P1Point::inf(), Cx(0.27)) < 1e-9);

  CHECK_THROWS_AS(family_structure(fam, {Cx(0)}), BadInput);
}

TEST_CASE("irregular pole residue via Newton correction") {
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 4, Cx(0.3)),
               pole(P1Point::at(Cx(1)), 2, Cx(0.2)),
               pole(P1Point::inf(), 2, Cx(0.15))};
  const Family fam = build_family(cfg);
  CHECK(fam.dim == 2);
  CHECK(fam.designated == std::vector<size_t>{0});

  const std::vector<Cx> params{Cx(0.4, 0.1), Cx(-0.2, 0.3)};
  const ProjectiveStructureP1 P = family_structure(fam, params);
  CHECK(rf_pole_order(P.q, P1Point::at(Cx(0))) == 4);
  CHECK(residue_gap(P.q, P1Point::at(Cx(0)), Cx(0.3)) < 1e-9);
  CHECK(residue_gap(P.q, P1Point::at(Cx(1)), Cx(0.2)) < 1e-9);
  CHECK(residue_gap(P.q, P1Point::inf(), Cx(0.15)) < 1e-9);
}

TEST_CASE("ramified pole: residue forced to zero") {
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 3, Cx(0)),
               pole(P1Point::at(Cx(1)), 2, Cx(0.25)),
               pole(P1Point::inf(), 2, Cx(0.3))};
  const Family fam = build_family(cfg);
  CHECK(fam.dim == 2);
  const std::vector<Cx> params{Cx(0.2), Cx(0.1, -0.3)};
  const ProjectiveStructureP1 P = family_structure(fam, params);
  CHECK(rf_pole_order(P.q, P1Point::at(Cx(0))) == 3);
  CHECK(residue_gap(P.q, P1Point::at(Cx(0)), Cx(0)) < 1e-8);
  CHECK(residue_gap(P.q, P1Point::at(Cx(1)), Cx(0.25)) < 1e-9);

  cfg.poles[0].residue = Cx(0.1);
  CHECK_THROWS_AS(build_family(cfg), BadInput);
}

TEST_CASE("pinned representative for few-pole rigid configs") {
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::inf(), 5, Cx(0))};
  cfg.pinned_q = rc(Cx(-2)) * X;  // Airy
  const Family fam = build_family(cfg);
  CHECK(fam.dim == 0);
  CHECK(rf_probe_distance(family_structure(fam, {}).q, cfg.pinned_q) == 0.0);

  FamilyConfig bad = cfg;
  bad.pinned_q = RationalFunction::zero();
  CHECK_THROWS_AS(build_family(bad), BadInput);
}

TEST_CASE("monodromy coordinates: base independence and sensitivity") {
  const double t0 = 1.0 / 3, t1 = 0.25, ti = 0.4;
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 2, Cx(t0 / 2)),
               pole(P1Point::at(Cx(1)), 2, Cx(t1 / 2)),
               pole(P1Point::inf(), 2, Cx(ti / 2))};
  const ProjectiveStructureP1 P{hypergeometric_q(t0, t1, ti)};
  const auto a = monodromy_coordinates(P, cfg, 1e-10);
  REQUIRE(a.values.size() == 6);  // 3 traces + 3 pair traces, no Stokes block

  // different base point conjugates every generator; traces cannot move
  const auto b = monodromy_coordinates(P, cfg, 1e-10, 0.9);
  double gap = 0;
  for (size_t i = 0; i < a.values.size(); ++i)
    gap = std::max(gap, std::abs(a.values[i] - b.values[i]));
  CHECK(gap < 1e-8);

  // local trace oracle: eigenvalues -exp(+-i pi theta), tr M = -2 cos(pi theta)
  CHECK(std::abs(a.values[0] + Cx(2 * std::cos(M_PI * t0))) < 1e-8);
  CHECK(std::abs(a.values[1] + Cx(2 * std::cos(M_PI * t1))) < 1e-8);
  CHECK(std::abs(a.values[2] + Cx(2 * std::cos(M_PI * ti))) < 1e-8);

  // changing one index moves the coordinates
  const ProjectiveStructureP1 Q{hypergeometric_q(t0, t1, 0.47)};
  const auto c = monodromy_coordinates(Q, cfg, 1e-10);
  double shift = 0;
  for (size_t i = 0; i < a.values.size(); ++i)
    shift = std::max(shift, std::abs(a.values[i] - c.values[i]));
  CHECK(shift > 1e-3);
}

TEST_CASE("jacobian rank: rigid family has rank 0") {
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 2, Cx(0.15)),
               pole(P1Point::at(Cx(1)), 2, Cx(0.12)),
               pole(P1Point::inf(), 2, Cx(0.2))};
  const auto rep = jacobian_rank(cfg, {}, 1e-6, 1e-4);
  CHECK(rep.rank == 0);
  CHECK(rep.singular_values.empty());
}

TEST_CASE("jacobian rank: 4 regular poles with fixed residues give rank 2") {
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 2, Cx(0.15)),
               pole(P1Point::at(Cx(1)), 2, Cx(0.21)),
               pole(P1Point::at(Cx(1.3, 0.8)), 2, Cx(0.1, 0.05)),
               pole(P1Point::inf(), 2, Cx(0.27))};
  const std::vector<Cx> at{Cx(0.3, -0.1), Cx(1.3, 0.8)};
  const auto rep = jacobian_rank(cfg, at, 1e-6, 1e-4);
  REQUIRE(rep.singular_values.size() >= 2);
  CHECK(rep.rank == 2);

  // step-halving stability of the retained singular values
  const auto rep2 = jacobian_rank(cfg, at, 2e-6, 1e-4);
  CHECK(rep2.rank == 2);
  for (int i = 0; i < 2; ++i) {
    const double rel = std::abs(rep.singular_values[i] - rep2.singular_values[i]) /
                       rep.singular_values[i];
    CHECK(rel < 0.05);
  }
}

TEST_CASE("local injectivity probe") {
  FamilyConfig cfg;
  cfg.poles = {pole(P1Point::at(Cx(0)), 2, Cx(0.15)),
               pole(P1Point::at(Cx(1)), 2, Cx(0.21)),
               pole(P1Point::at(Cx(1.3, 0.8)), 2, Cx(0.1, 0.05)),
               pole(P1Point::inf(), 2, Cx(0.27))};
  const std::vector<Cx> p0{Cx(0.3, -0.1), Cx(1.3, 0.8)};
  const std::vector<Cx> p1{Cx(0.32, -0.1), Cx(1.3, 0.8)};
  const auto far = local_injectivity_probe(cfg, p0, p1, 1e-8);
  CHECK(far.verdict == ProbeVerdict::Distinct);
  CHECK(far.distance > 1e-5);

  const auto same = local_injectivity_probe(cfg, p0, p0, 1e-8);
  CHECK(same.verdict == ProbeVerdict::Suspect);
  CHECK(same.distance < 1e-10);

  // parabolic local monodromy (theta = 0, i.e. residue 0) must not fool the
  // probe: nearby structures stay distinguishable
  FamilyConfig par = cfg;
  par.poles[0].residue = Cx(0);
  const auto pp = local_injectivity_probe(par, p0, p1, 1e-8);
  CHECK(pp.verdict == ProbeVerdict::Distinct);
}
