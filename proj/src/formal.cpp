#include "pslab/formal.hpp"

#include <cmath>

namespace pslab {

namespace {

Eigen::Matrix2cd coeff_mat(const LaurentMatrix& A, int k) {
  Eigen::Matrix2cd M;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) M(i, j) = A.e[i][j].coeff(k);
  return M;
}

LaurentMatrix const_matrix(P1Point base, const Eigen::Matrix2cd& C) {
  LaurentMatrix M = LaurentMatrix::zero(base, kExactTrunc);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      M.e[i][j] = LaurentSeries::constant(base, C(i, j));
  return M;
}

// lexicographic order on (Re, Im), used to fix the lambda+ slot
bool lex_ge(Cx a, Cx b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() >= b.imag();
}

// larger-norm column of M, as an eigenvector candidate
Eigen::Vector2cd pick_column(const Eigen::Matrix2cd& M) {
  return M.col(0).norm() >= M.col(1).norm() ? Eigen::Vector2cd(M.col(0))
                                            : Eigen::Vector2cd(M.col(1));
}

// orders <= -1 only
LaurentSeries principal_part(const LaurentSeries& a) {
  LaurentSeries r = LaurentSeries::zero(a.base, kExactTrunc);
  for (int k = a.min_order; k <= -1; ++k)
    if (std::abs(a.coeff(k)) > 0) r.set_coeff(k, a.coeff(k));
  return r;
}

LaurentSeries holomorphic_part(const LaurentSeries& a) {
  LaurentSeries r = LaurentSeries::zero(a.base, a.trunc);
  for (int k = std::max(0, a.min_order); k <= a.trunc; ++k)
    r.set_coeff(k, a.coeff(k));
  return r;
}

// substitution x = z^2 applied to a 1-form coefficient: a(x) dx pulls back to
// 2 z a(z^2) dz, so the x-order j lands at z-order 2j+1 with coefficient 2a_j
LaurentSeries pullback_form_z(const LaurentSeries& a) {
  LaurentSeries r;
  r.base = a.base;
  r.min_order = 2 * a.min_order + 1;
  r.trunc = a.trunc >= kExactTrunc ? kExactTrunc : 2 * a.trunc + 1;
  if (!a.coeffs.empty()) {
    r.coeffs.assign(2 * a.coeffs.size() - 1, Cx(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[2 * i] = Cx(2) * a.coeffs[i];
  }
  return r;
}

LaurentMatrix pullback_matrix_z(const LaurentMatrix& A) {
  LaurentMatrix r;
  r.base = A.base;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = pullback_form_z(A.e[i][j]);
  return r;
}

// diagonal gauge that strips the nonnegative-order diagonal part h:
// diag(exp(-int h_11), exp(-int h_22))
LaurentMatrix diag_exp_gauge(const LaurentSeries& h0, const LaurentSeries& h1, int N) {
  LaurentMatrix G = LaurentMatrix::zero(h0.base, N);
  G.e[0][0] = ls_exp(ls_scale(ls_integrate(h0), Cx(-1)), N);
  G.e[1][1] = ls_exp(ls_scale(ls_integrate(h1), Cx(-1)), N);
  return G;
}

struct CoreResult {
  LaurentSeries lp, lm;  // diagonal of the reduced matrix (full series)
  LaurentMatrix G;
  Cx resonant_c = Cx(0);
  int resonant_k = -1;
  bool resonant = false;
  bool ramified = false;
};

CoreResult reduce_core(const LaurentMatrix& S, int N);

// pole order at most 1: residue diagonalization plus order-by-order kills,
// with the single obstructed order retained in the (2,1) slot
CoreResult reduce_regular(const LaurentMatrix& S, int N) {
  P1Point base = S.base;
  Eigen::Matrix2cd L = coeff_mat(S, -1);
  Cx tr = L.trace(), det = L.determinant();
  Cx half = tr / 2.0;
  Cx disc = half * half - det;
  Cx sq = std::sqrt(disc);
  Cx la = half + sq, lb = half - sq;
  Cx lplus = lex_ge(la, lb) ? la : lb;
  Cx lminus = lex_ge(la, lb) ? lb : la;
  double scale = 1.0 + L.norm();

  CoreResult out;
  out.G = LaurentMatrix::identity(base);
  LaurentMatrix cur = S;
  int kres = -1;

  if (std::abs(lplus - lminus) <= 1e-9 * scale) {
    Eigen::Matrix2cd Nl = L - half * Eigen::Matrix2cd::Identity();
    if (Nl.norm() > 1e-9 * scale) {
      // Jordan residue: conjugate to half*I + E21
      Eigen::Vector2cd v =
          Nl.col(0).norm() >= Nl.col(1).norm() ? Eigen::Vector2cd::Unit(0) : Eigen::Vector2cd::Unit(1);
      Eigen::Matrix2cd C;
      C.col(0) = v;
      C.col(1) = Nl * v;
      LaurentMatrix Cm = const_matrix(base, C);
      cur = lm_gauge(cur, Cm, N);
      out.G = lm_mul(out.G, Cm);
      out.resonant = true;
      out.resonant_k = 0;
      out.resonant_c = Cx(1);
    }
    kres = -1;  // homological operator never obstructed past order -1
  } else {
    double kreal = (lplus - lminus).real();
    long kr = std::lround(kreal);
    if (kr >= 1 && std::abs(lplus - lminus - Cx(double(kr))) < 1e-9 * scale) {
      if (kr > N) throw ResonanceOverflow("resonance exponent exceeds truncation order");
      kres = static_cast<int>(kr);
    }
    Eigen::Matrix2cd C;
    C.col(0) = pick_column(L - lminus * Eigen::Matrix2cd::Identity()).normalized();
    C.col(1) = pick_column(L - lplus * Eigen::Matrix2cd::Identity()).normalized();
    if (std::abs(C.determinant()) < 1e-12)
      throw SingularLeadingTerm("residue eigenvectors are numerically dependent");
    LaurentMatrix Cm = const_matrix(base, C);
    cur = lm_gauge(cur, Cm, N);
    out.G = lm_mul(out.G, Cm);
  }

  Eigen::Matrix2cd Lred = coeff_mat(cur, -1);
  for (int j = 0; j <= N - 2; ++j) {
    Eigen::Matrix2cd Aj = coeff_mat(cur, j);
    if (Aj.norm() < 1e-15 * (1.0 + cur.max_abs())) continue;
    // solve (ad_L + (j+1)) P = -A_j, vec in column-major order
    Eigen::Matrix4cd M4 = Eigen::Matrix4cd::Zero();
    M4.block<2, 2>(0, 0) = Lred;
    M4.block<2, 2>(2, 2) = Lred;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        M4.block<2, 2>(2 * r, 2 * c) -= Lred(c, r) * Eigen::Matrix2cd::Identity();
    M4 += double(j + 1) * Eigen::Matrix4cd::Identity();
    Eigen::Vector4cd rhs;
    rhs << -Aj(0, 0), -Aj(1, 0), -Aj(0, 1), -Aj(1, 1);
    Eigen::Vector4cd p;
    if (j == kres - 1) {
      p = M4.completeOrthogonalDecomposition().solve(rhs);  // min-norm, rank 3
    } else {
      p = M4.partialPivLu().solve(rhs);
    }
    Eigen::Matrix2cd P;
    P << p(0), p(2), p(1), p(3);
    LaurentMatrix Gj = LaurentMatrix::identity(base);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        if (std::abs(P(r, c)) > 0)
          Gj.e[r][c] = ls_add(Gj.e[r][c], LaurentSeries::monomial(base, j + 1, P(r, c)));
    cur = lm_gauge(cur, Gj, N);
    out.G = lm_mul(out.G, Gj);
    if (j == kres - 1) {
      Cx c21 = cur.e[1][0].coeff(j);
      if (std::abs(c21) > 1e-9) {
        out.resonant = true;
        out.resonant_k = kres;
        out.resonant_c = c21;
      }
    }
  }
  out.lp = cur.e[0][0];
  out.lm = cur.e[1][1];
  return out;
}

// pole order m >= 2, leading term with distinct eigenvalues: constant
// diagonalization, off-diagonal kills, then strip the holomorphic diagonal
CoreResult reduce_unramified(const LaurentMatrix& S, int N, int m) {
  P1Point base = S.base;
  Eigen::Matrix2cd A = coeff_mat(S, -m);
  Cx half = A.trace() / 2.0;
  Cx sq = std::sqrt(half * half - A.determinant());
  Cx d1 = half + sq, d2 = half - sq;
  if (!lex_ge(d1, d2)) std::swap(d1, d2);

  Eigen::Matrix2cd C;
  C.col(0) = pick_column(A - d2 * Eigen::Matrix2cd::Identity()).normalized();
  C.col(1) = pick_column(A - d1 * Eigen::Matrix2cd::Identity()).normalized();
  if (std::abs(C.determinant()) < 1e-12)
    throw SingularLeadingTerm("leading eigenvectors are numerically dependent");

  CoreResult out;
  LaurentMatrix Cm = const_matrix(base, C);
  LaurentMatrix cur = lm_gauge(S, Cm, N);
  out.G = Cm;

  Cx delta = d1 - d2;
  for (int j = -m + 1; j <= N - m; ++j) {
    Cx o12 = cur.e[0][1].coeff(j), o21 = cur.e[1][0].coeff(j);
    if (std::abs(o12) + std::abs(o21) < 1e-15 * (1.0 + cur.max_abs())) continue;
    LaurentMatrix Gj = LaurentMatrix::identity(base);
    Gj.e[0][1] = LaurentSeries::monomial(base, j + m, -o12 / delta);
    Gj.e[1][0] = LaurentSeries::monomial(base, j + m, o21 / delta);
    cur = lm_gauge(cur, Gj, N);
    out.G = lm_mul(out.G, Gj);
  }

  LaurentMatrix Gd = diag_exp_gauge(holomorphic_part(cur.e[0][0]),
                                    holomorphic_part(cur.e[1][1]), N);
  cur = lm_gauge(cur, Gd, N);
  out.G = lm_mul(out.G, Gd);
  out.lp = cur.e[0][0];
  out.lm = cur.e[1][1];
  return out;
}

// pole order m >= 2, nilpotent nonzero leading term: normalize the leading
// term to E12, ramify x = z^2, shear by diag(1,z), and reduce in z
CoreResult reduce_ramified(const LaurentMatrix& S, int N, int m) {
  P1Point base = S.base;
  Eigen::Matrix2cd B = coeff_mat(S, -m);
  Eigen::Vector2cd v =
      B.col(0).norm() >= B.col(1).norm() ? Eigen::Vector2cd::Unit(0) : Eigen::Vector2cd::Unit(1);
  Eigen::Matrix2cd C;
  C.col(0) = B * v;
  C.col(1) = v;
  if (std::abs(C.determinant()) < 1e-14 * (1.0 + B.norm()))
    throw SingularLeadingTerm("could not normalize the nilpotent leading term");
  LaurentMatrix Cm = const_matrix(base, C);
  LaurentMatrix S1 = lm_gauge(S, Cm, N);

  Cx c = S1.e[1][0].coeff(-m + 1);
  if (std::abs(c) <= 1e-10 * (1.0 + coeff_mat(S1, -m + 1).norm()))
    throw SingularLeadingTerm(
        "degenerate ramified leading data; the pole order is likely not minimal");

  int Nz = 2 * N - 2;
  LaurentMatrix Sz = pullback_matrix_z(S1);
  LaurentMatrix D = LaurentMatrix::identity(base);
  D.e[1][1] = LaurentSeries::monomial(base, 1, Cx(1));
  LaurentMatrix S2 = lm_gauge(Sz, D, Nz);

  CoreResult rec = reduce_core(S2, Nz);
  CoreResult out = rec;
  out.G = lm_mul(lm_mul(const_matrix(base, C), D), rec.G);
  out.ramified = true;
  return out;
}

CoreResult reduce_core(const LaurentMatrix& S, int N) {
  P1Point base = S.base;
  int m = -S.min_valuation();
  if (m <= 1) return reduce_regular(S, N);

  Eigen::Matrix2cd A = coeff_mat(S, -m);
  Eigen::Matrix2cd B = A - (A.trace() / 2.0) * Eigen::Matrix2cd::Identity();
  double anorm = std::max(1.0, A.norm());

  if (B.norm() <= 1e-10 * anorm) {
    // scalar leading term: split off half the trace and recurse on the rest
    LaurentSeries tau = ls_scale(S.trace(), Cx(0.5));
    LaurentMatrix T = lm_sub(S, lm_scale_series(LaurentMatrix::identity(base), tau));
    CoreResult rec = reduce_core(T, N);
    LaurentSeries tau_use = rec.ramified ? pullback_form_z(tau) : tau;
    CoreResult out = rec;
    out.lp = ls_add(rec.lp, tau_use);
    out.lm = ls_add(rec.lm, tau_use);
    LaurentSeries h = holomorphic_part(tau_use);
    int Ng = rec.ramified ? 2 * N - 2 : N;
    out.G = lm_mul(rec.G, diag_exp_gauge(h, h, Ng));
    out.lp = ls_sub(out.lp, h);
    out.lm = ls_sub(out.lm, h);
    return out;
  }
  if (std::sqrt(std::abs(B.determinant())) > 1e-8 * B.norm())
    return reduce_unramified(S, N, m);
  return reduce_ramified(S, N, m);
}

int checked_pole_order(const LaurentMatrix& S) {
  int m = -S.min_valuation();
  if (m < 1) throw ZeroLeadingTerm("system matrix has no pole at the base point");
  return m;
}

}  // namespace

FormalClass classify_singularity(const LaurentMatrix& S) {
  int m = checked_pole_order(S);
  FormalClass cls;
  cls.m = m;
  Eigen::Matrix2cd A = coeff_mat(S, -m);
  if (A.norm() < 1e-14) throw ZeroLeadingTerm("vanishing leading coefficient");
  Cx half = A.trace() / 2.0;
  Eigen::Matrix2cd B = A - half * Eigen::Matrix2cd::Identity();
  if (m == 1) {
    // structural call: a resonant class here means the obstruction may be
    // present; formal_normal_form demotes to RegularDiagonal when it is not
    Cx sq = std::sqrt(half * half - A.determinant());
    Cx d = Cx(2) * sq;
    double scale = 1.0 + A.norm();
    if (std::abs(d) <= 1e-9 * scale) {
      bool jordan = B.norm() > 1e-9 * scale;
      cls.kind = jordan ? FormalKind::RegularResonant : FormalKind::RegularDiagonal;
      cls.k = 0;
      return cls;
    }
    Cx dl = lex_ge(half + sq, half - sq) ? d : -d;
    long k = std::lround(dl.real());
    if (k >= 1 && std::abs(dl - Cx(double(k))) < 1e-9 * scale) {
      cls.kind = FormalKind::RegularResonant;
      cls.k = static_cast<int>(k);
    } else {
      cls.kind = FormalKind::RegularDiagonal;
    }
    return cls;
  }
  if (B.norm() <= 1e-10 * std::max(1.0, A.norm()) ||
      std::sqrt(std::abs(B.determinant())) > 1e-8 * B.norm()) {
    cls.kind = FormalKind::IrregularUnramified;
  } else {
    cls.kind = FormalKind::IrregularRamified;
  }
  return cls;
}

FormalNFResult formal_normal_form(const LaurentMatrix& S, int N) {
  int m = checked_pole_order(S);
  // work with what the input actually carries, then insist on the minimum
  N = std::min(N, S.min_trunc());
  if (N < m + 4) throw TruncationTooSmall("need truncation order N >= m + 4");

  CoreResult core = reduce_core(S, N);

  FormalNFResult out;
  out.G = core.G;
  FormalData& F = out.data;
  F.cls.m = m;
  F.ramified_z_variable = core.ramified;
  F.lambda_plus = principal_part(core.lp);
  F.lambda_minus = principal_part(core.lm);
  F.residue_plus = F.lambda_plus.coeff(-1);
  F.residue_minus = F.lambda_minus.coeff(-1);
  F.resonant_coeff = core.resonant_c;
  if (core.ramified) {
    F.cls.kind = FormalKind::IrregularRamified;
    F.nu_times_2 = 2 * m - 3;
  } else if (m >= 2) {
    F.cls.kind = FormalKind::IrregularUnramified;
    F.nu_times_2 = 2 * (m - 1);
  } else if (core.resonant) {
    F.cls.kind = FormalKind::RegularResonant;
    F.cls.k = core.resonant_k;
    F.nu_times_2 = 0;
  } else {
    F.cls.kind = FormalKind::RegularDiagonal;
    F.nu_times_2 = 0;
  }
  return out;
}

LaurentMatrix expand_system(const LinearSystem& S, P1Point p, int N) {
  LaurentMatrix A;
  A.base = p;
  const RfMatrix2* M = &S.omega;
  RfMatrix2 chart;
  P1Point q = p;
  if (p.infinite) {
    chart = infinity_chart_system(S);
    M = &chart;
    q = P1Point::at(Cx(0));
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      A.e[i][j] = rf_expand(M->e[i][j], q, N);
      A.e[i][j].base = p;
    }
  return A;
}

RiccatiFormalData riccati_formal_data(const RiccatiEq& R, P1Point p, int N) {
  LinearSystem S = lift_riccati(R, RationalFunction::zero());
  LaurentMatrix A;
  if (R.infinity_chart) {
    // coefficients already live in the t chart, so expand at t = 0 directly
    A = expand_system(S, P1Point::at(Cx(0)), N);
    A.base = p;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A.e[i][j].base = p;
  } else {
    A = expand_system(S, p, N);
  }
  FormalNFResult F = formal_normal_form(A, N);
  RiccatiFormalData out;
  out.cls = F.data.cls;
  // the lift is trace free, so lambda- = -lambda+ and the invariant is the
  // half-difference (= -lambda+), the one obeying 4*lambda_{-1}^2 + 2 res2 = 1
  out.lambda = ls_scale(ls_sub(F.data.lambda_minus, F.data.lambda_plus), Cx(0.5));
  out.residue = out.lambda.coeff(-1);
  out.nu_times_2 = F.data.nu_times_2;
  return out;
}

double irregularity_index(int n) {
  if (n < 1) throw BadInput("pole order must be >= 1");
  return std::max(0.0, (n - 2) / 2.0);
}

bool check_genericity(const LaurentMatrix& S) {
  FormalClass cls = classify_singularity(S);
  if (cls.kind != FormalKind::IrregularRamified)
    throw WrongClass("genericity only applies to the ramified class");
  int m = cls.m;
  Eigen::Matrix2cd B = coeff_mat(S, -m);
  Eigen::Vector2cd v =
      B.col(0).norm() >= B.col(1).norm() ? Eigen::Vector2cd::Unit(0) : Eigen::Vector2cd::Unit(1);
  Eigen::Matrix2cd C;
  C.col(0) = B * v;
  C.col(1) = v;
  if (std::abs(C.determinant()) < 1e-14 * (1.0 + B.norm()))
    throw SingularLeadingTerm("could not normalize the nilpotent leading term");
  Eigen::Matrix2cd sub = C.inverse() * coeff_mat(S, -m + 1) * C;
  return std::abs(sub(1, 0)) > 1e-10 * std::max(1.0, sub.norm());
}

Eigen::Matrix2cd formal_monodromy(const FormalData& F, RamifiedConvention conv) {
  const Cx twopii(0.0, 2.0 * M_PI);
  if (F.cls.kind == FormalKind::IrregularRamified) {
    if (conv == RamifiedConvention::None)
      throw RamifiedConventionRequired("ramified monodromy needs a deck-swap convention");
    // one x-turn is a half z-turn followed by the deck swap z -> -z
    Cx ell = (F.residue_plus + F.residue_minus) / 2.0;
    Cx s = std::exp(-Cx(0.0, M_PI) * ell);
    Eigen::Matrix2cd P;
    P << Cx(0), Cx(1), Cx(1), Cx(0);
    if (conv == RamifiedConvention::SwapNegated) P = -P;
    return s * P;
  }
  // continuation convention for dY + Omega Y dx = 0: multiplier exp(-2 pi i L)
  if (F.cls.kind == FormalKind::RegularResonant) {
    Cx xi = std::exp(-twopii * F.residue_minus);
    Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity();
    M(1, 0) = -twopii * F.resonant_coeff;
    return xi * M;
  }
  Eigen::Matrix2cd M = Eigen::Matrix2cd::Zero();
  M(0, 0) = std::exp(-twopii * F.residue_plus);
  M(1, 1) = std::exp(-twopii * F.residue_minus);
  return M;
}

double formal_data_distance(const FormalData& A, const FormalData& B) {
  if (A.ramified_z_variable != B.ramified_z_variable) return 1e9;
  auto series_dist = [](const LaurentSeries& a, const LaurentSeries& b) {
    double d = 0;
    int lo = std::min(a.min_order, b.min_order);
    for (int k = lo; k <= -1; ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
    return d;
  };
  double direct = std::max({series_dist(A.lambda_plus, B.lambda_plus),
                            series_dist(A.lambda_minus, B.lambda_minus),
                            std::abs(A.residue_plus - B.residue_plus),
                            std::abs(A.residue_minus - B.residue_minus)});
  double swapped = std::max({series_dist(A.lambda_plus, B.lambda_minus),
                             series_dist(A.lambda_minus, B.lambda_plus),
                             std::abs(A.residue_plus - B.residue_minus),
                             std::abs(A.residue_minus - B.residue_plus)});
  return std::min(direct, swapped);
}

}  // namespace pslab
