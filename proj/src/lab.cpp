#include "pslab/lab.hpp"

#include <algorithm>
#include <cmath>

#include "pslab/linsys.hpp"
#include "pslab/riccati.hpp"

namespace pslab {

namespace {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// marked points of the associated bordered surface: a regular pole is one
// puncture, an irregular pole of order n carries n-2 boundary points
int marks(int n) { return n <= 2 ? 1 : n - 2; }

int two_nu(int n) { return n <= 2 ? 0 : n - 2; }
bool nu_integral(int n) { return n <= 2 || n % 2 == 0; }

}  // namespace

int moduli_dimension(int g, const std::vector<int>& orders, CountMode mode) {
  if (g < 0) throw BadInput("genus must be nonnegative");
  int mk = 0, sum = 0, integral = 0;
  for (int n : orders) {
    if (n < 1) throw BadInput("pole orders must be >= 1");
    mk += marks(n);
    sum += two_nu(n) + 3;
    if (nu_integral(n)) ++integral;
  }
  if (g == 0 && mk < 3) throw HypothesisViolated("need at least 3 marked points on P^1");
  if (g == 1 && mk < 1) throw HypothesisViolated("need a marked point in genus 1");
  int dim = 6 * g - 6 + sum;
  if (mode == CountMode::ResiduesFixed) dim -= integral;
  return dim;
}

namespace {

// column bookkeeping for the partial-fraction coefficients of q:
// (pole_index, k) is the (x - p_i)^{-k} coefficient, (-1, j) the x^j one
struct Column {
  int pole = -1;
  int k = 0;
};

struct Layout {
  std::vector<Column> cols;
  std::vector<size_t> finite;  // cfg indices of finite poles
  int inf_index = -1;          // cfg index of the pole at infinity, if any
  int n_inf = 0;
};

Layout make_layout(const FamilyConfig& cfg) {
  Layout L;
  for (size_t i = 0; i < cfg.poles.size(); ++i) {
    const auto& P = cfg.poles[i];
    if (P.order < 2) throw BadInput("family poles must have order >= 2");
    if (P.order >= 3 && P.order % 2 == 1 && std::abs(P.residue) > 1e-12)
      throw BadInput("ramified poles carry residue 0");
    if (P.position.infinite) {
      if (L.inf_index >= 0) throw BadInput("duplicate pole at infinity");
      L.inf_index = static_cast<int>(i);
      L.n_inf = P.order;
    } else {
      L.finite.push_back(i);
    }
  }
  for (size_t f = 0; f < L.finite.size(); ++f)
    for (int k = 1; k <= cfg.poles[L.finite[f]].order; ++k)
      L.cols.push_back({static_cast<int>(f), k});
  for (int j = 0; j <= L.n_inf - 4; ++j) L.cols.push_back({-1, j});
  return L;
}

Cx binom_pow(int r, int k, Cx p) {
  // coefficient of x^{-r} in (x-p)^{-k}: C(r-1, r-k) p^{r-k}, k <= r <= 3
  static const int C[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
  return double(C[r - 1][r - k]) * std::pow(p, r - k);
}

// residue-and-decay constraint rows; coefficients depend on the finite pole
// positions only, the designated irregular targets enter through the rhs
void assemble(const FamilyConfig& cfg, const Layout& L,
              const std::vector<Cx>& pos, const std::vector<Cx>& targets,
              MatrixXcd& C, VectorXcd& rhs) {
  std::vector<std::pair<std::vector<Cx>, Cx>> rows;
  const size_t A = L.cols.size();
  auto xr_row = [&](int r) {  // coefficient of x^{-r} in the finite part
    std::vector<Cx> row(A, Cx(0));
    for (size_t c = 0; c < A; ++c) {
      const Column& col = L.cols[c];
      if (col.pole >= 0 && col.k <= r) row[c] = binom_pow(r, col.k, pos[col.pole]);
    }
    return row;
  };
  auto unit_row = [&](int pole, int k) {
    std::vector<Cx> row(A, Cx(0));
    for (size_t c = 0; c < A; ++c)
      if (L.cols[c].pole == pole && L.cols[c].k == k) row[c] = Cx(1);
    return row;
  };
  auto res2 = [](Cx lambda) { return (Cx(1) - 4.0 * lambda * lambda) / 2.0; };

  size_t tpos = 0;
  if (L.n_inf == 0) {
    for (int r = 1; r <= 3; ++r) rows.push_back({xr_row(r), Cx(0)});
  } else if (L.n_inf == 2) {
    rows.push_back({xr_row(1), Cx(0)});
    rows.push_back({xr_row(2), res2(cfg.poles[L.inf_index].residue)});
  } else if (L.n_inf >= 4 && L.n_inf % 2 == 0) {
    const int m = L.n_inf / 2;
    rows.push_back({m == 2 ? xr_row(1) : unit_row(-1, m - 3), targets[tpos++]});
  }
  for (size_t f = 0; f < L.finite.size(); ++f) {
    const int n = cfg.poles[L.finite[f]].order;
    if (n == 2)
      rows.push_back({unit_row(int(f), 2), res2(cfg.poles[L.finite[f]].residue)});
    else if (n % 2 == 0)
      rows.push_back({unit_row(int(f), n / 2 + 1), targets[tpos++]});
  }

  C.resize(rows.size(), A);
  rhs.resize(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < A; ++c) C(r, c) = rows[r].first[c];
    rhs(r) = rows[r].second;
  }
}

std::vector<Cx> finite_positions(const Family& fam, const Layout& L,
                                 const std::vector<Cx>& params) {
  std::vector<Cx> pos(L.finite.size());
  for (size_t f = 0; f < L.finite.size(); ++f)
    pos[f] = fam.cfg.poles[L.finite[f]].position.value;
  const size_t off = params.size() - fam.movable.size();
  for (size_t m = 0; m < fam.movable.size(); ++m)
    for (size_t f = 0; f < L.finite.size(); ++f)
      if (L.finite[f] == fam.movable[m]) pos[f] = params[off + m];
  return pos;
}

RationalFunction build_q(const Layout& L, const std::vector<Cx>& pos,
                         const VectorXcd& u) {
  RationalFunction q;
  Poly poly;
  for (size_t c = 0; c < L.cols.size(); ++c) {
    const Column& col = L.cols[c];
    if (std::abs(u(c)) == 0.0) continue;
    if (col.pole < 0) {
      if (poly.size() <= size_t(col.k)) poly.resize(col.k + 1, Cx(0));
      poly[col.k] = u(c);
    } else {
      q += RationalFunction::constant(u(c)) *
           RationalFunction::monomial(pos[col.pole], -col.k);
    }
  }
  if (!poly.empty()) q += RationalFunction::poly(poly);
  return q;
}

// coefficient solve for fixed positions and designated targets, with the
// pivot/free split frozen in the Family
VectorXcd solve_coeffs(const Family& fam, const Layout& L,
                       const std::vector<Cx>& pos,
                       const std::vector<Cx>& targets,
                       const std::vector<Cx>& params) {
  MatrixXcd C;
  VectorXcd rhs;
  assemble(fam.cfg, L, pos, targets, C, rhs);
  const auto R = C.rows();
  VectorXcd u = VectorXcd::Zero(L.cols.size());
  for (size_t f = 0; f < fam.free_cols.size(); ++f) u(fam.free_cols[f]) = params[f];
  if (R > 0) {
    MatrixXcd Cp(R, R);
    for (Eigen::Index j = 0; j < R; ++j) Cp.col(j) = C.col(fam.pivot_cols[j]);
    VectorXcd b = rhs;
    for (int fc : fam.free_cols) b -= C.col(fc) * u(fc);
    const Eigen::PartialPivLU<MatrixXcd> lu(Cp);
    const VectorXcd xp = lu.solve(b);
    if (!xp.allFinite() || (Cp * xp - b).norm() > 1e-8 * (1.0 + b.norm()))
      throw ResidueUnreachable("degenerate pivot system for this configuration");
    for (Eigen::Index j = 0; j < R; ++j) u(fam.pivot_cols[j]) = xp(j);
  }
  return u;
}

// signed formal residue of q at p; sign fixed against a reference value
Cx extract_residue(const RationalFunction& q, P1Point p, Cx ref) {
  const auto pm = minimize_pole_order(q, p);
  const auto rd = riccati_formal_data(pm.R, p, pm.m + kFormalDefaultPad);
  return std::abs(rd.residue - ref) <= std::abs(-rd.residue - ref) ? rd.residue
                                                                   : -rd.residue;
}

// poles whose residue is reached through a Newton-corrected coefficient, in
// the same order assemble() consumes the targets: infinity first, then the
// finite poles in layout order; layout_f = -1 marks infinity
struct Designated {
  int layout_f = -1;
  size_t cfg_index = 0;
  Cx residue{0, 0};
};

std::vector<Designated> designated_list(const FamilyConfig& cfg, const Layout& L) {
  std::vector<Designated> out;
  if (L.n_inf >= 4 && L.n_inf % 2 == 0)
    out.push_back({-1, size_t(L.inf_index), cfg.poles[L.inf_index].residue});
  for (size_t f = 0; f < L.finite.size(); ++f) {
    const auto& P = cfg.poles[L.finite[f]];
    if (P.order >= 4 && P.order % 2 == 0)
      out.push_back({int(f), L.finite[f], P.residue});
  }
  return out;
}

}  // namespace

Family build_family(const FamilyConfig& cfg) {
  std::vector<int> orders;
  for (const auto& P : cfg.poles) orders.push_back(P.order);
  Family fam;
  fam.cfg = cfg;
  fam.dim = moduli_dimension(0, orders, CountMode::ResiduesFixed);

  if (cfg.poles.size() < 3) {
    // residual Moebius freedom is quotiented by an explicit representative
    if (fam.dim != 0)
      throw BadInput("families with fewer than 3 poles need dim 0 and a pinned q");
    if (cfg.pinned_q.is_zero())
      throw BadInput("pinned q required for fewer than 3 poles");
    for (const auto& P : cfg.poles)
      if (rf_pole_order(P.position.infinite
                            ? infinity_chart_quadratic(cfg.pinned_q)
                            : cfg.pinned_q,
                        P.position.infinite ? P1Point::at(Cx(0)) : P.position) !=
          P.order)
        throw BadInput("pinned q does not match the declared pole orders");
    return fam;
  }

  const Layout L = make_layout(cfg);
  int pinned = 0;
  for (size_t i = 0; i < cfg.poles.size(); ++i) {
    const auto& P = cfg.poles[i];
    const bool pin = P.position.infinite || std::abs(P.position.value) < 1e-9 ||
                     std::abs(P.position.value - Cx(1)) < 1e-9;
    if (pin)
      ++pinned;
    else
      fam.movable.push_back(i);
  }
  if (pinned != 3) throw BadInput("pin exactly three poles at 0, 1, infinity");
  for (const Designated& d : designated_list(cfg, L))
    fam.designated.push_back(d.cfg_index);

  // freeze the pivot choice at the base configuration
  std::vector<Cx> pos;
  for (size_t f : L.finite) pos.push_back(cfg.poles[f].position.value);
  std::vector<Cx> t0(fam.designated.size(), Cx(0));
  MatrixXcd C;
  VectorXcd rhs;
  assemble(cfg, L, pos, t0, C, rhs);
  if (C.rows() > Eigen::Index(L.cols.size()))
    throw BadInput("overdetermined residue constraints");
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(C);
  if (C.rows() > 0 && qr.rank() < C.rows())
    throw ResidueUnreachable("rank-deficient residue constraints");
  const auto& perm = qr.colsPermutation().indices();
  std::vector<int> piv(perm.data(), perm.data() + C.rows());
  std::sort(piv.begin(), piv.end());
  fam.pivot_cols = piv;
  for (int c = 0; c < int(L.cols.size()); ++c)
    if (!std::binary_search(piv.begin(), piv.end(), c)) fam.free_cols.push_back(c);

  const int expect = int(fam.free_cols.size() + fam.movable.size());
  if (expect != fam.dim)
    throw BadInput("parametrization does not match the moduli count");
  return fam;
}

ProjectiveStructureP1 family_structure(const Family& fam,
                                       const std::vector<Cx>& params) {
  if (int(params.size()) != fam.dim) throw BadInput("wrong parameter count");
  if (fam.cfg.poles.size() < 3) return ProjectiveStructureP1{fam.cfg.pinned_q};

  const Layout L = make_layout(fam.cfg);
  const std::vector<Cx> pos = finite_positions(fam, L, params);
  const std::vector<Designated> des = designated_list(fam.cfg, L);

  std::vector<Cx> coeffs(params.begin(),
                         params.begin() + long(fam.free_cols.size()));
  std::vector<Cx> t(des.size(), Cx(0));
  auto residuals = [&](const std::vector<Cx>& tv) {
    const RationalFunction q = build_q(L, pos, solve_coeffs(fam, L, pos, tv, coeffs));
    std::vector<Cx> f(des.size());
    for (size_t i = 0; i < des.size(); ++i) {
      const P1Point p = des[i].layout_f < 0 ? P1Point::inf()
                                            : P1Point::at(pos[des[i].layout_f]);
      f[i] = extract_residue(q, p, des[i].residue) - des[i].residue;
    }
    return f;
  };

  if (!des.empty()) {
    // Newton on the designated coefficients; the dependence is close to affine
    std::vector<Cx> f = residuals(t);
    for (int iter = 0; iter < 30; ++iter) {
      double worst = 0;
      for (const Cx& v : f) worst = std::max(worst, std::abs(v));
      if (worst < 1e-11) break;
      if (iter == 29) throw ResidueUnreachable("Newton stalled on the residues");
      MatrixXcd J(des.size(), des.size());
      for (size_t j = 0; j < des.size(); ++j) {
        const double dt = 1e-6 * (1.0 + std::abs(t[j]));
        std::vector<Cx> tp = t;
        tp[j] += dt;
        const std::vector<Cx> fp = residuals(tp);
        for (size_t i = 0; i < des.size(); ++i) J(i, j) = (fp[i] - f[i]) / dt;
      }
      VectorXcd fv(des.size());
      for (size_t i = 0; i < des.size(); ++i) fv(i) = f[i];
      const VectorXcd step = J.partialPivLu().solve(fv);
      if (!step.allFinite())
        throw ResidueUnreachable("singular residue Jacobian");
      for (size_t j = 0; j < des.size(); ++j) t[j] -= step(j);
      f = residuals(t);
    }
  }

  return ProjectiveStructureP1{build_q(L, pos, solve_coeffs(fam, L, pos, t, coeffs))};
}

namespace {

constexpr double kCoordTol = 1e-10;  // transport tolerance for coordinates

Cx auto_base(const std::vector<Cx>& fin, double angle) {
  Cx c(0);
  for (const Cx& p : fin) c += p;
  if (!fin.empty()) c /= double(fin.size());
  double rad = 0;
  for (const Cx& p : fin) rad = std::max(rad, std::abs(p - c));
  return c + (2.2 * rad + 1.5) * std::exp(Cx(0, angle));
}

}  // namespace

MonodromyCoordinates monodromy_coordinates(const ProjectiveStructureP1& P,
                                           const FamilyConfig& cfg, double tol,
                                           double base_angle) {
  if (cfg.poles.empty()) throw BadInput("empty pole configuration");
  Divisor div;
  std::vector<Cx> fin;
  for (const auto& p : cfg.poles) {
    div.entries.push_back({p.position, p.order});
    if (!p.position.infinite) fin.push_back(p.position.value);
  }
  const LinearSystem S = companion_system(P.q);
  const MonodromyData M =
      global_monodromy(S, div, auto_base(fin, base_angle), std::min(tol, kCoordTol));

  // generators remapped to the cfg pole order (global_monodromy sorts by
  // departure angle, which must not leak into the coordinate layout)
  std::vector<Matrix2cd> gen(cfg.poles.size());
  for (size_t i = 0; i < cfg.poles.size(); ++i) {
    bool found = false;
    for (const auto& [pt, m] : M.generators)
      if (same_point(pt, cfg.poles[i].position)) {
        gen[i] = m;
        found = true;
      }
    if (!found) throw BadInput("configuration pole missing from the monodromy data");
  }

  MonodromyCoordinates out;
  for (const auto& m : gen) out.values.push_back(m.trace());
  for (size_t i = 0; i < gen.size(); ++i)
    for (size_t j = i + 1; j < gen.size(); ++j)
      out.values.push_back((gen[i] * gen[j]).trace());

  for (const auto& p : cfg.poles) {
    if (p.order < 3) continue;
    const auto pm = minimize_pole_order(P.q, p.position);
    const LinearSystem lift = lift_riccati(pm.R, RationalFunction::zero());
    const Cx center = p.position.infinite ? Cx(0) : p.position.value;
    const int N = std::max(24, 2 * pm.m + kFormalDefaultPad);
    const auto F = formal_normal_form(expand_system(lift, P1Point::at(center), N), N);
    const StokesData D = compute_stokes(lift, center, F, tol);
    for (const Matrix2cd& s : D.stokes) {
      out.values.push_back(s(0, 1));
      out.values.push_back(s(1, 0));
    }
  }
  return out;
}

namespace {

FamilyConfig moved_config(const Family& fam, const std::vector<Cx>& params) {
  FamilyConfig cfg = fam.cfg;
  const size_t off = params.size() - fam.movable.size();
  for (size_t m = 0; m < fam.movable.size(); ++m)
    cfg.poles[fam.movable[m]].position = P1Point::at(params[off + m]);
  return cfg;
}

std::vector<Cx> coords_of(const Family& fam, const std::vector<Cx>& params,
                          double base_angle = -1.77) {
  return monodromy_coordinates(family_structure(fam, params),
                               moved_config(fam, params), kCoordTol, base_angle)
      .values;
}

}  // namespace

JacobianReport jacobian_rank(const FamilyConfig& cfg,
                             const std::vector<Cx>& params0, double h,
                             double tol) {
  const Family fam = build_family(cfg);
  if (int(params0.size()) != fam.dim) throw BadInput("wrong parameter count");
  JacobianReport rep;
  if (fam.dim == 0) return rep;

  MatrixXcd J;
  for (int k = 0; k < fam.dim; ++k) {
    std::vector<Cx> pp = params0, pm = params0;
    pp[k] += h;
    pm[k] -= h;
    const std::vector<Cx> fp = coords_of(fam, pp), fm = coords_of(fam, pm);
    if (fp.size() != fm.size()) throw ToleranceNotMet("coordinate layout changed");
    if (J.size() == 0) J.resize(fp.size(), fam.dim);
    for (size_t i = 0; i < fp.size(); ++i) J(i, k) = (fp[i] - fm[i]) / (2.0 * h);
  }
  const Eigen::JacobiSVD<MatrixXcd> svd(J);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    rep.singular_values.push_back(sv(i));
  for (double s : rep.singular_values)
    if (s > tol * rep.singular_values.front()) ++rep.rank;
  return rep;
}

ProbeReport local_injectivity_probe(const FamilyConfig& cfg,
                                    const std::vector<Cx>& params0,
                                    const std::vector<Cx>& params1, double tol) {
  const Family fam = build_family(cfg);
  const std::vector<Cx> a = coords_of(fam, params0), b = coords_of(fam, params1);
  if (a.size() != b.size()) throw ToleranceNotMet("coordinate layout changed");
  ProbeReport rep;
  for (size_t i = 0; i < a.size(); ++i)
    rep.distance = std::max(rep.distance, std::abs(a[i] - b[i]));
  rep.verdict = rep.distance > tol ? ProbeVerdict::Distinct : ProbeVerdict::Suspect;
  return rep;
}

}  // namespace pslab
