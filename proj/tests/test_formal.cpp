#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pslab/formal.hpp"

using namespace pslab;

namespace {

std::mt19937_64 rng(771203);

Cx rand_cx(double s = 1.0) {
  std::uniform_real_distribution<double> d(-s, s);
  return Cx(d(rng), d(rng));
}

const P1Point O = P1Point::at(Cx(0));

LaurentMatrix diag_system(Cx lp, Cx lm, int order, int trunc) {
  LaurentMatrix S = LaurentMatrix::zero(O, trunc);
  S.e[0][0] = LaurentSeries::monomial(O, order, lp, trunc);
  S.e[1][1] = LaurentSeries::monomial(O, order, lm, trunc);
  return S;
}

// I + P u^s with random entries
LaurentMatrix rand_shear(int s, int trunc) {
  LaurentMatrix G = LaurentMatrix::identity(O, trunc);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      G.e[i][j] = ls_add(G.e[i][j], LaurentSeries::monomial(O, s, rand_cx(0.4), trunc));
  return G;
}

double offdiag_tail(const LaurentMatrix& A, int lo, int hi) {
  double d = 0;
  for (int k = lo; k <= hi; ++k)
    d = std::max({d, std::abs(A.e[0][1].coeff(k)), std::abs(A.e[1][0].coeff(k))});
  return d;
}

}  // namespace

TEST_CASE("classification") {
  auto reg = diag_system(Cx(1.0 / 3), Cx(-1.0 / 3), -1, 10);
  CHECK(classify_singularity(reg).kind == FormalKind::RegularDiagonal);
  CHECK(classify_singularity(reg).m == 1);

  LaurentMatrix ram = LaurentMatrix::zero(O, 10);
  ram.e[0][1] = LaurentSeries::monomial(O, -2, Cx(1), 10);
  ram.e[1][0] = LaurentSeries::monomial(O, -1, Cx(1), 10);
  CHECK(classify_singularity(ram).kind == FormalKind::IrregularRamified);

  auto unram = diag_system(Cx(1), Cx(-1), -2, 10);
  unram.e[0][0] = ls_add(unram.e[0][0], LaurentSeries::constant(O, Cx(0.3), 10));
  CHECK(classify_singularity(unram).kind == FormalKind::IrregularUnramified);

  auto res = diag_system(Cx(0.75), Cx(-0.25), -1, 10);
  auto cls = classify_singularity(res);
  CHECK(cls.kind == FormalKind::RegularResonant);
  CHECK(cls.k == 1);

  CHECK_THROWS_AS(classify_singularity(LaurentMatrix::identity(O, 10)), ZeroLeadingTerm);
}

TEST_CASE("already normal input") {
  auto S = diag_system(Cx(0.3, 0.1), Cx(-0.2), -1, 12);
  auto r = formal_normal_form(S, 12);
  CHECK(r.data.cls.kind == FormalKind::RegularDiagonal);
  CHECK(std::abs(r.data.residue_plus - Cx(0.3, 0.1)) < 1e-12);
  CHECK(std::abs(r.data.residue_minus - Cx(-0.2)) < 1e-12);
  CHECK(r.data.nu_times_2 == 0);
  // gauge is the identity up to column normalization phases
  auto gauged = lm_gauge(S, r.G, 12);
  CHECK(offdiag_tail(gauged, -1, 10) < 1e-12);
}

TEST_CASE("shear round trip recovers a resonant-difference diagonal") {
  // diag(1/(2x), -1/(2x)) conjugated by [[1,x],[0,1]]; the eigenvalue gap is
  // the integer 1, but the obstruction vanishes on this gauge orbit
  int N = 12;
  auto S = diag_system(Cx(0.5), Cx(-0.5), -1, N);
  LaurentMatrix G0 = LaurentMatrix::identity(O, N);
  G0.e[0][1] = LaurentSeries::monomial(O, 1, Cx(1), N);
  auto conj = lm_gauge(S, G0, N);
  auto r = formal_normal_form(conj, N);
  CHECK(r.data.cls.kind == FormalKind::RegularDiagonal);
  double d = std::min(std::abs(r.data.residue_plus - Cx(0.5)),
                      std::abs(r.data.residue_plus - Cx(-0.5)));
  CHECK(d < 1e-10);
  CHECK(std::abs(r.data.residue_plus + r.data.residue_minus) < 1e-10);
}

TEST_CASE("regular round trip under random gauges") {
  int N = 12;
  for (int t = 0; t < 6; ++t) {
    Cx lp = rand_cx(), lm = rand_cx();
    if (std::abs(lp - lm) < 0.05) continue;
    auto S = diag_system(lp, lm, -1, N);
    auto F0 = formal_normal_form(S, N).data;
    auto gauged = lm_gauge(lm_gauge(S, rand_shear(1, N), N), rand_shear(2, N), N);
    auto F1 = formal_normal_form(gauged, N).data;
    CHECK(formal_data_distance(F0, F1) < 1e-8);
    // trace of the principal part is a formal invariant
    Cx tr0 = F0.residue_plus + F0.residue_minus;
    Cx tr1 = F1.residue_plus + F1.residue_minus;
    CHECK(std::abs(tr0 - tr1) < 1e-10);
  }
}

TEST_CASE("resonant normal form retains the obstruction") {
  int N = 12;
  auto S = diag_system(Cx(0.75), Cx(-0.25), -1, N);
  S.e[1][0] = LaurentSeries::monomial(O, 0, Cx(0.6, -0.2), N);  // already at order k-1
  // bury it under a generic holomorphic perturbation
  auto buried = lm_gauge(lm_gauge(S, rand_shear(1, N), N), rand_shear(3, N), N);
  auto r = formal_normal_form(buried, N);
  CHECK(r.data.cls.kind == FormalKind::RegularResonant);
  CHECK(r.data.cls.k == 1);
  // the retained coefficient is pinned only up to the constant diagonal
  // rescaling of the eigenframe, so compare magnitudes
  CHECK(std::abs(std::abs(r.data.resonant_coeff) - std::abs(Cx(0.6, -0.2))) < 1e-9);
  // the accumulated gauge really produces the retained form
  auto nf = lm_gauge(buried, r.G, N);
  CHECK(std::abs(nf.e[0][0].coeff(-1) - Cx(0.75)) < 1e-10);
  CHECK(std::abs(nf.e[1][0].coeff(0) - r.data.resonant_coeff) < 1e-10);
  CHECK(offdiag_tail(nf, -1, -1) < 1e-10);
  double diag_tail = 0;
  for (int k = 0; k <= N - 3; ++k)
    diag_tail = std::max({diag_tail, std::abs(nf.e[0][0].coeff(k)),
                          std::abs(nf.e[1][1].coeff(k))});
  CHECK(diag_tail < 1e-9);
}

TEST_CASE("jordan residue") {
  int N = 12;
  LaurentMatrix S = diag_system(Cx(0.25), Cx(0.25), -1, N);
  S.e[0][1] = LaurentSeries::monomial(O, -1, Cx(1), N);
  auto r = formal_normal_form(lm_gauge(S, rand_shear(1, N), N), N);
  CHECK(r.data.cls.kind == FormalKind::RegularResonant);
  CHECK(r.data.cls.k == 0);
  CHECK(std::abs(r.data.residue_plus - Cx(0.25)) < 1e-10);
  CHECK(std::abs(r.data.resonant_coeff - Cx(1)) < 1e-10);
}

TEST_CASE("unramified normal form") {
  int N = 14;
  auto S = diag_system(Cx(1, 0.3), Cx(-0.7), -2, N);
  S.e[0][0] = ls_add(S.e[0][0], LaurentSeries::monomial(O, -1, Cx(0.21), N));
  S.e[1][1] = ls_add(S.e[1][1], LaurentSeries::monomial(O, -1, Cx(-0.4, 0.1), N));
  auto F0 = formal_normal_form(S, N).data;
  CHECK(F0.cls.kind == FormalKind::IrregularUnramified);
  CHECK(F0.nu_times_2 == 2);

  auto gauged = lm_gauge(lm_gauge(S, rand_shear(1, N), N), rand_shear(2, N), N);
  auto r = formal_normal_form(gauged, N);
  CHECK(formal_data_distance(F0, r.data) < 1e-8);

  // the gauge diagonalizes through order N - m - 2 and strips the
  // holomorphic diagonal
  auto nf = lm_gauge(gauged, r.G, N);
  CHECK(offdiag_tail(nf, -2, N - 4) < 1e-8);
  double hol = 0;
  for (int k = 0; k <= N - 4; ++k)
    hol = std::max({hol, std::abs(nf.e[0][0].coeff(k)), std::abs(nf.e[1][1].coeff(k))});
  CHECK(hol < 1e-8);
}

TEST_CASE("ramified normal form") {
  int N = 14;
  Cx b(1.2, 0.5), c(0.8, -0.3);
  LaurentMatrix S = LaurentMatrix::zero(O, N);
  S.e[0][1] = LaurentSeries::monomial(O, -2, b, N);
  S.e[1][0] = LaurentSeries::monomial(O, -1, c, N);
  S.e[0][0] = LaurentSeries::monomial(O, 0, Cx(0.3), N);

  CHECK(check_genericity(S));
  auto r = formal_normal_form(S, N);
  CHECK(r.data.cls.kind == FormalKind::IrregularRamified);
  CHECK(r.data.ramified_z_variable);
  CHECK(r.data.nu_times_2 == 1);  // m=2 -> nu = 1/2

  // leading z-coefficient of lambda+- sits at order -(2m-2) = -2 and equals
  // +-2 sqrt(bc): the eigenvalues of the ramified pullback leading term
  Cx lead = r.data.lambda_plus.coeff(-2);
  Cx expect = Cx(2) * std::sqrt(b * c);
  double d = std::min(std::abs(lead - expect), std::abs(lead + expect));
  CHECK(d < 1e-9);
  CHECK(std::abs(r.data.lambda_plus.coeff(-2) + r.data.lambda_minus.coeff(-2)) < 1e-9);
  // z-residues agree, so the residue of the difference vanishes
  CHECK(std::abs(r.data.residue_plus - r.data.residue_minus) < 1e-8);

  // degenerate subleading data is flagged as non-generic
  LaurentMatrix bad = LaurentMatrix::zero(O, N);
  bad.e[0][1] = LaurentSeries::monomial(O, -2, b, N);
  bad.e[0][0] = LaurentSeries::monomial(O, 0, Cx(1), N);
  CHECK(!check_genericity(bad));
  CHECK_THROWS_AS(check_genericity(diag_system(Cx(1), Cx(-1), -2, N)), WrongClass);
}

TEST_CASE("riccati formal data") {
  // regular singularity of an oper: 4 lambda_{-1}^2 + 2 res2 = 1
  for (Cx res2 : {Cx(0.375), Cx(0.11, 0.21), Cx(-1.3)}) {
    RationalFunction q = RationalFunction::constant(res2) /
                         (RationalFunction::x() * RationalFunction::x());
    auto minr = minimize_pole_order(q, P1Point::at(Cx(0)));
    auto d = riccati_formal_data(minr.R, P1Point::at(Cx(0)), 12);
    CHECK(d.cls.m == 1);
    CHECK(d.nu_times_2 == 0);
    CHECK(std::abs(Cx(4) * d.residue * d.residue + Cx(2) * res2 - Cx(1)) < 1e-10);
  }

  // diagonal trace-free lift diag(a,-a)/x: the invariant equals a up to sign
  RiccatiEq R{RationalFunction::zero(),
              RationalFunction({Cx(0.7)}, {Cx(0), Cx(1)}),  // beta = 0.7/x
              RationalFunction::zero(), false};
  auto d = riccati_formal_data(R, P1Point::at(Cx(0)), 12);
  CHECK(std::abs(std::abs(d.residue) - 0.35) < 1e-12);

  // Airy: pole order 5 at infinity, ramified with nu = 3/2 and zero residue
  RationalFunction airy = RationalFunction::constant(Cx(-2)) * RationalFunction::x();
  auto mr = minimize_pole_order(airy, P1Point::inf());
  auto da = riccati_formal_data(mr.R, P1Point::inf(), 12);
  CHECK(da.cls.kind == FormalKind::IrregularRamified);
  CHECK(da.nu_times_2 == 3);
  CHECK(std::abs(da.residue) < 1e-8);
  CHECK(irregularity_index(5) == doctest::Approx(1.5));
}

TEST_CASE("irregularity index") {
  CHECK(irregularity_index(1) == 0.0);
  CHECK(irregularity_index(2) == 0.0);
  CHECK(irregularity_index(5) == 1.5);
  CHECK(irregularity_index(6) == 2.0);
  CHECK_THROWS_AS(irregularity_index(0), BadInput);
}

TEST_CASE("formal monodromy") {
  FormalData F;
  F.cls.kind = FormalKind::RegularDiagonal;
  F.residue_plus = Cx(0.25);
  F.residue_minus = Cx(-0.25);
  auto M = formal_monodromy(F);
  // continuation convention dY + Omega Y dx = 0: multiplier exp(-2 pi i L)
  CHECK(std::abs(M(0, 0) - Cx(0, -1)) < 1e-14);
  CHECK(std::abs(M(1, 1) - Cx(0, 1)) < 1e-14);

  F.residue_plus = F.residue_minus = Cx(0);
  CHECK((formal_monodromy(F) - Eigen::Matrix2cd::Identity()).norm() < 1e-14);

  // resonant: exp of the log form, checked against the closed formula
  FormalData R;
  R.cls.kind = FormalKind::RegularResonant;
  R.cls.k = 1;
  R.residue_plus = Cx(0.75);
  R.residue_minus = Cx(-0.25);
  R.resonant_coeff = Cx(0.6, -0.2);
  auto MR = formal_monodromy(R);
  Cx xi = std::exp(Cx(0, -2 * M_PI) * Cx(-0.25));
  CHECK(std::abs(MR(0, 0) - xi) < 1e-13);
  CHECK(std::abs(MR(1, 0) - xi * Cx(0, -2 * M_PI) * R.resonant_coeff) < 1e-13);
  CHECK(std::abs(MR(0, 1)) < 1e-14);

  FormalData Ram;
  Ram.cls.kind = FormalKind::IrregularRamified;
  Ram.residue_plus = Ram.residue_minus = Cx(0.5);
  CHECK_THROWS_AS(formal_monodromy(Ram), RamifiedConventionRequired);
  auto MS = formal_monodromy(Ram, RamifiedConvention::Swap);
  CHECK(std::abs(MS(0, 1) - std::exp(Cx(0, -M_PI / 2))) < 1e-14);
  CHECK(std::abs(MS(0, 0)) < 1e-14);
  auto MN = formal_monodromy(Ram, RamifiedConvention::SwapNegated);
  CHECK((MN + MS).norm() < 1e-14);
}

TEST_CASE("error paths") {
  auto S = diag_system(Cx(1), Cx(-1), -2, 12);
  CHECK_THROWS_AS(formal_normal_form(S, 4), TruncationTooSmall);
  CHECK_THROWS_AS(formal_normal_form(diag_system(Cx(1), Cx(-1), -1, 3), 8),
                  TruncationTooSmall);
  // integer eigenvalue gap larger than the truncation order
  auto big = diag_system(Cx(10), Cx(0), -1, 8);
  CHECK_THROWS_AS(formal_normal_form(big, 8), ResonanceOverflow);
}
