#include "pslab/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>

#include "pslab/errors.hpp"
#include "pslab/riccati.hpp"

namespace pslab {

namespace {

using Eigen::Matrix2cd;

Matrix2cd eval_omega(const LinearSystem& S, Cx x) {
  Matrix2cd M;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) M(i, j) = S.omega.e[i][j].eval(x);
  return M;
}

double mat_norm(const Matrix2cd& M) { return M.cwiseAbs().maxCoeff(); }

// Dormand-Prince 5(4) pair for the matrix ODE Y' = f(s) Y along one straight
// segment; returns the propagator from z0 to z1 applied on the left of Yin.
struct Transporter {
  const LinearSystem& S;
  Matrix2cd Y = Matrix2cd::Identity();
  Matrix2cd Racc = Matrix2cd::Identity();  // QR re-normalization backlog
  long accepted = 0;

  explicit Transporter(const LinearSystem& sys) : S(sys) {}

  Matrix2cd rhs(Cx x, Cx dz, const Matrix2cd& M) const {
    return -(eval_omega(S, x) * M) * dz;
  }

  void segment(Cx z0, Cx z1) {
    static const double kStepTol = 1e-12;
    const Cx dz = z1 - z0;
    if (std::abs(dz) == 0.0) return;
    double s = 0.0, h = 0.1;
    long tries = 0;
    while (s < 1.0) {
      if (++tries > 400000) throw ToleranceNotMet("step budget exhausted on a transport segment");
      h = std::min(h, 1.0 - s);
      if (h < 1e-14) throw ToleranceNotMet("step size collapsed; path too close to a singularity");
      auto at = [&](double u) { return z0 + (s + u * h) * dz; };
      const Matrix2cd k1 = rhs(at(0.0), dz, Y);
      const Matrix2cd k2 = rhs(at(0.2), dz, Y + h * (0.2 * k1));
      const Matrix2cd k3 = rhs(at(0.3), dz, Y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
      const Matrix2cd k4 = rhs(at(0.8), dz,
          Y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
      const Matrix2cd k5 = rhs(at(8.0 / 9), dz,
          Y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                   64448.0 / 6561 * k3 - 212.0 / 729 * k4));
      const Matrix2cd k6 = rhs(at(1.0), dz,
          Y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                   49.0 / 176 * k4 - 5103.0 / 18656 * k5));
      const Matrix2cd y5 = Y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 +
                                    125.0 / 192 * k4 - 2187.0 / 6784 * k5 +
                                    11.0 / 84 * k6);
      const Matrix2cd k7 = rhs(at(1.0), dz, y5);
      const Matrix2cd ediff =
          h * ((35.0 / 384 - 5179.0 / 57600) * k1 +
               (500.0 / 1113 - 7571.0 / 16695) * k3 +
               (125.0 / 192 - 393.0 / 640) * k4 +
               (-2187.0 / 6784 + 92097.0 / 339200) * k5 +
               (11.0 / 84 - 187.0 / 2100) * k6 - 1.0 / 40 * k7);
      const double err = mat_norm(ediff) / std::max(1.0, mat_norm(y5));
      if (err <= kStepTol) {
        s += h;
        Y = y5;
        if (++accepted % 50 == 0) renormalize();
      }
      const double safe = 0.9 * std::pow(kStepTol / std::max(err, 1e-300), 0.2);
      h *= std::clamp(safe, 0.2, 5.0);
    }
  }

  void renormalize() {
    Eigen::HouseholderQR<Matrix2cd> qr(Y);
    Matrix2cd Q = qr.householderQ();
    Racc = (Q.adjoint() * Y) * Racc;
    Y = Q;
  }

  Matrix2cd result() const { return Y * Racc; }
};

Matrix2cd transport_polyline(const LinearSystem& S, const std::vector<Cx>& v) {
  if (v.size() < 2)
    throw BadInput("path needs at least two vertices");
  Transporter T(S);
  for (size_t i = 0; i + 1 < v.size(); ++i) T.segment(v[i], v[i + 1]);
  return T.result();
}

double point_segment_distance(Cx p, Cx a, Cx b) {
  const Cx d = b - a;
  const double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(d)).real() / L2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

void append_arc(std::vector<Cx>& v, Cx center, double r, double th0, double th1,
                double max_step = M_PI / 24) {
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(th1 - th0) / max_step)));
  for (int k = 1; k <= n; ++k) {
    const double th = th0 + (th1 - th0) * k / n;
    v.push_back(center + std::polar(r, th));
  }
}

double nearest_gap(const std::vector<Cx>& poles, size_t i) {
  double g = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < poles.size(); ++j)
    if (j != i) g = std::min(g, std::abs(poles[i] - poles[j]));
  return std::isfinite(g) ? g : 1.0;
}

// evaluation of an asymptotic (possibly divergent) truncated series at the
// local coordinate w: sum up to the smallest retained term, which also serves
// as the error estimate
std::pair<Cx, double> eval_optimal(const LaurentSeries& a, Cx w) {
  if (a.coeffs.empty()) return {Cx(0), 0.0};
  const double aw = std::abs(w);
  int best = -1;
  double best_mag = std::numeric_limits<double>::infinity();
  double mag = std::pow(aw, a.min_order);
  for (size_t i = 0; i < a.coeffs.size(); ++i, mag *= aw) {
    const double t = std::abs(a.coeffs[i]) * mag;
    if (t > 0.0 && t < best_mag) { best_mag = t; best = static_cast<int>(i); }
  }
  if (best < 0) return {Cx(0), 0.0};
  int last_nz = best;
  for (size_t i = static_cast<size_t>(best) + 1; i < a.coeffs.size(); ++i)
    if (std::abs(a.coeffs[i]) > 0.0) last_nz = static_cast<int>(i);
  if (best == last_nz && a.trunc < kExactTrunc / 2) {
    // summed everything stored; the unknown tail starts beyond trunc
    const int gap = a.trunc + 1 - (a.min_order + best);
    best_mag *= std::pow(aw, std::max(gap, 1));
  } else if (best == last_nz) {
    best_mag = 0.0;
  }
  Cx sum = 0, wk = std::pow(w, a.min_order);
  for (int i = 0; i <= best; ++i, wk *= w) sum += a.coeffs[static_cast<size_t>(i)] * wk;
  return {sum, best_mag};
}

// primitive of the principal part minus its residue term: sum c_j w^{j+1}/(j+1)
Cx exponent_primitive(const LaurentSeries& lam, Cx w) {
  Cx s = 0;
  for (int j = lam.min_order; j <= -2; ++j) {
    const Cx c = lam.coeff(j);
    if (c != Cx(0)) s += c * std::pow(w, j + 1) / Cx(j + 1);
  }
  return s;
}

struct FrameSample {
  Matrix2cd C;
  double scatter = 0.0;
};

}  // namespace

std::vector<Cx> system_poles(const LinearSystem& S) {
  std::vector<Cx> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      for (const auto& [r, m] : poly_roots_clustered(S.omega.e[i][j].den())) {
        (void)m;
        bool dup = false;
        for (const Cx& p : out)
          if (std::abs(p - r) < 1e-8 * std::max(1.0, std::abs(r))) { dup = true; break; }
        if (!dup) out.push_back(r);
      }
    }
  std::sort(out.begin(), out.end(), [](Cx a, Cx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

Eigen::Matrix2cd continue_solution(const LinearSystem& S, const PathSpec& path,
                                   double tol) {
  if (path.kind == PathSpec::Kind::Loop &&
      (path.vertices.size() < 3 ||
       std::abs(path.vertices.front() - path.vertices.back()) > 1e-12))
    throw BadInput("loop paths must be closed");
  (void)tol;  // per-step tolerance is pinned; tol gates the callers' checks
  return transport_polyline(S, path.vertices);
}

PathSpec plan_loop(const std::vector<Cx>& poles, size_t index, Cx base) {
  if (index >= poles.size())
    throw BadInput("loop pole index out of range");
  const Cx p = poles[index];
  const double gap = nearest_gap(poles, index);
  const double r = 0.4 * gap;
  if (std::abs(base - p) < r + 0.1 * gap)
    throw PoleTooClose("base point inside the loop circle");
  const Cx u = (base - p) / std::abs(base - p);
  const Cx entry = p + r * u;
  // clear the spoke off the other poles by perpendicular detours; a radial
  // push is useless when the pole sits almost on the spoke line
  std::vector<Cx> spoke{base, entry};
  for (int sweep = 0;; ++sweep) {
    if (sweep > 8) throw PoleTooClose("spoke cannot clear a pole");
    bool changed = false;
    for (size_t j = 0; j < poles.size() && !changed; ++j) {
      if (j == index) continue;
      const double cj = 0.1 * nearest_gap(poles, j);
      for (size_t seg = 0; seg + 1 < spoke.size(); ++seg) {
        if (point_segment_distance(poles[j], spoke[seg], spoke[seg + 1]) >= cj)
          continue;
        const Cx d = spoke[seg + 1] - spoke[seg];
        const double L2 = std::norm(d);
        double t = L2 > 0 ? std::clamp(((poles[j] - spoke[seg]) * std::conj(d)).real() / L2,
                                       0.1, 0.9)
                          : 0.5;
        const Cx foot = spoke[seg] + t * d;
        Cx n = d * Cx(0, 1) / std::sqrt(std::max(L2, 1e-300));
        if (((foot - poles[j]) * std::conj(n)).real() < 0) n = -n;
        spoke.insert(spoke.begin() + static_cast<long>(seg) + 1, foot + 3.0 * cj * n);
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  PathSpec path;
  path.kind = PathSpec::Kind::Loop;
  path.vertices = spoke;
  const double th0 = std::arg(entry - p);
  append_arc(path.vertices, p, r, th0, th0 + 2 * M_PI);
  for (auto it = spoke.rbegin() + 1; it != spoke.rend(); ++it)
    path.vertices.push_back(*it);
  return path;
}

Eigen::Matrix2cd local_monodromy(const LinearSystem& S, Cx p,
                                 const std::vector<Cx>& other_poles, double tol) {
  double gap = 1.0;
  for (const Cx& q : other_poles)
    if (std::abs(q - p) > 1e-12) gap = std::min(gap, std::abs(q - p));
  const double r = 0.4 * gap;
  PathSpec path;
  path.kind = PathSpec::Kind::Loop;
  path.vertices.push_back(p + r);
  append_arc(path.vertices, p, r, 0.0, 2 * M_PI);
  return continue_solution(S, path, tol);
}

MonodromyData global_monodromy(const LinearSystem& S, const Divisor& poles,
                               Cx base, double tol) {
  std::vector<Cx> finite;
  bool has_inf = false;
  for (const auto& e : poles.entries) {
    if (e.point.infinite) has_inf = true;
    else finite.push_back(e.point.value);
  }
  std::vector<size_t> order(finite.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::arg(finite[a] - base) < std::arg(finite[b] - base);
  });

  MonodromyData out;
  out.base = base;
  for (size_t i : order) {
    const Matrix2cd M = continue_solution(S, plan_loop(finite, i, base), tol);
    out.generators.emplace_back(P1Point{false, finite[i]}, M);
  }
  if (has_inf) {
    // large clockwise circle through the base encloses every finite pole
    Cx c = 0;
    for (const Cx& p : finite) c += p;
    if (!finite.empty()) c /= static_cast<double>(finite.size());
    const double R = std::abs(base - c);
    for (size_t i = 0; i < finite.size(); ++i)
      if (std::abs(finite[i] - c) > R - 0.5 * nearest_gap(finite, i))
        throw PoleTooClose("base circle does not enclose the finite poles");
    PathSpec big;
    big.kind = PathSpec::Kind::Loop;
    const double th0 = std::arg(base - c);
    big.vertices.push_back(base);
    append_arc(big.vertices, c, R, th0, th0 - 2 * M_PI);
    out.generators.emplace_back(P1Point::inf(),
                                continue_solution(S, big, tol));
  }
  Matrix2cd P = Matrix2cd::Identity();
  for (const auto& [pt, M] : out.generators) {
    (void)pt;
    P = M * P;
  }
  out.product_residual = mat_norm(P - Matrix2cd::Identity());
  for (const auto& [pt, M] : out.generators) {
    LocalMonodromy lm;
    lm.pole = pt;
    const auto ev = M.eigenvalues();
    lm.eigenvalues = {ev(0), ev(1)};
    out.local.push_back(lm);
  }
  return out;
}

double local_eigenvalue_check(const ProjectiveStructureP1& P, P1Point p,
                              const Eigen::Matrix2cd& M_local, double tol) {
  const SingularityReport rep = residue_and_index(P, p);
  if (!rep.theta)
    throw NotRegularSingular("eigenvalue check needs a pole of order <= 2");
  const Cx theta = *rep.theta;
  const Cx ipi(0, M_PI);
  const std::array<Cx, 2> target{std::exp(ipi * (Cx(1) + theta)),
                                 std::exp(ipi * (Cx(1) - theta))};
  // eigenvalues via trace/determinant with discriminant clustering: when the
  // discriminant sits below the transport noise floor the matrix is defective
  // within accuracy and the honest spectrum is the double root tr/2
  const Cx half_tr = M_local.trace() / 2.0;
  const Cx disc = half_tr * half_tr - M_local.determinant();
  const double scale = std::max(1.0, M_local.cwiseAbs().maxCoeff());
  std::array<Cx, 2> got{half_tr, half_tr};
  if (std::abs(disc) > 10.0 * scale * scale * std::max(tol, 1e-12)) {
    const Cx root = std::sqrt(disc);
    got = {half_tr + root, half_tr - root};
  }
  double h = 0.0;
  for (const Cx& a : got) {
    double d = std::min(std::abs(a - target[0]), std::abs(a - target[1]));
    h = std::max(h, d);
  }
  for (const Cx& a : target) {
    double d = std::min(std::abs(a - got[0]), std::abs(a - got[1]));
    h = std::max(h, d);
  }
  return h;
}

Cx contour_integral(const RationalFunction& f, const PathSpec& path) {
  struct Simpson {
    const RationalFunction& f;
    Cx z0, dz;
    Cx g(double s) const { return f.eval(z0 + s * dz) * dz; }
    Cx run(double a, double b, Cx fa, Cx fm, Cx fb, Cx whole, int depth) const {
      const double m = 0.5 * (a + b);
      const Cx flm = g(0.5 * (a + m)), frm = g(0.5 * (m + b));
      const Cx left = (b - a) / 12.0 * (fa + 4.0 * flm + fm);
      const Cx right = (b - a) / 12.0 * (fm + 4.0 * frm + fb);
      if (depth > 40 || std::abs(left + right - whole) < 1e-13)
        return left + right + (left + right - whole) / 15.0;
      return run(a, m, fa, flm, fm, left, depth + 1) +
             run(m, b, fm, frm, fb, right, depth + 1);
    }
  };
  Cx total = 0;
  for (size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    Simpson s{f, path.vertices[i], path.vertices[i + 1] - path.vertices[i]};
    if (std::abs(s.dz) == 0.0) continue;
    const Cx fa = s.g(0), fm = s.g(0.5), fb = s.g(1);
    total += s.run(0, 1, fa, fm, fb, (fa + 4.0 * fm + fb) / 6.0, 0);
  }
  return total;
}

StokesData compute_stokes(const LinearSystem& S, Cx p, const FormalNFResult& F,
                          double tol) {
  const FormalData& FD = F.data;
  if (FD.cls.m < 2 || FD.nu_times_2 <= 0)
    throw NotIrregular("Stokes matrices need an irregular singularity");
  const bool ram = FD.ramified_z_variable;
  const int K = FD.nu_times_2;

  LaurentSeries dl = ls_sub(FD.lambda_plus, FD.lambda_minus);
  dl.normalize();
  const int v = dl.min_order;
  if (v >= -1 || std::abs(dl.coeff(v)) == 0.0)
    throw NotIrregular("exponent difference carries no exponential part");
  const Cx A = dl.coeff(v) / Cx(v + 1);  // leading coefficient of int(dl)

  // oscillation rays Re(A w^{v+1}) = 0, equally spaced by pi/|v+1| in the
  // w-plane; one full x-turn sweeps 2 pi (w = x - p) or pi (w^2 = x - p)
  const double step_w = M_PI / std::abs(static_cast<double>(v + 1));
  double phi0 = (M_PI / 2 - std::arg(A)) / static_cast<double>(v + 1);
  const double span_w = ram ? M_PI : 2 * M_PI;
  phi0 -= std::floor(phi0 / step_w) * step_w;
  if (static_cast<int>(std::lround(span_w / step_w)) != K)
    throw MatchingFailed("ray count disagrees with the irregularity index");
  const double xfac = ram ? 2.0 : 1.0;

  std::vector<Cx> others;
  for (const Cx& q : system_poles(S))
    if (std::abs(q - p) > 1e-9 * std::max(1.0, std::abs(p))) others.push_back(q);
  double cap = 1.0;
  for (const Cx& q : others) cap = std::min(cap, std::abs(q - p));

  auto series_budget = [&](double rho) {
    const double wr = ram ? std::sqrt(rho) : rho;
    double scale = 0.0, err = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto [val, e] = eval_optimal(F.G.e[i][j], Cx(wr));
        scale = std::max(scale, std::abs(val));
        err = std::max(err, e);
      }
    return err / std::max(scale, 1e-300);
  };
  auto dominance = [&](double rho) {
    const double wr = ram ? std::sqrt(rho) : rho;
    return std::abs(A) * std::pow(wr, v + 1);
  };

  // Two error sources pull the matching radius in opposite directions: the
  // optimal-truncation floor of the formal series (wants rho small) and the
  // dominant/recessive roundoff amplification exp(D) of the circle transport,
  // D = max |Re dq| (wants rho large). Take the largest radius whose series
  // error is below 1e-12 while D stays moderate; otherwise the best available.
  double rho = -1.0, rho_err = std::numeric_limits<double>::infinity();
  double fb_rho = -1.0, fb_err = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 120; ++i) {
    const double r = 0.45 * cap * std::pow(0.93, i);
    const double D = dominance(r);
    if (D > 26.0) break;
    const double e = series_budget(r);
    if (std::getenv("PSLAB_STOKES_DEBUG"))
      std::fprintf(stderr, "rho=%.4f series=%.3e dom=%.2f\n", r, e, D);
    if (e <= 1e-12) { rho = r; rho_err = e; break; }
    if (e < fb_err) { fb_err = e; fb_rho = r; }
  }
  if (rho < 0.0) { rho = fb_rho; rho_err = fb_err; }
  if (const char* ov = std::getenv("PSLAB_STOKES_RHO")) {
    rho = std::atof(ov);
    rho_err = series_budget(rho);
  }
  if (rho < 0.0 || rho_err > 1e-3)
    throw MatchingFailed("no matching radius reaches the accuracy budget");

  // formal solution Yhat(x) = G(w) diag(exp(-I+- - res+- log w)) with the
  // continuously tracked branch of log w
  auto yhat = [&](double r, double theta_x) {
    const double wr = ram ? std::sqrt(r) : r;
    const double wth = (ram ? 0.5 : 1.0) * theta_x;
    const Cx w = std::polar(wr, wth);
    const Cx Lw(std::log(wr), wth);
    Matrix2cd G;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) G(i, j) = eval_optimal(F.G.e[i][j], w).first;
    const Cx ep = std::exp(-exponent_primitive(FD.lambda_plus, w) -
                           FD.residue_plus * Lw);
    const Cx em = std::exp(-exponent_primitive(FD.lambda_minus, w) -
                           FD.residue_minus * Lw);
    Matrix2cd Y = G;
    Y.col(0) *= ep;
    Y.col(1) *= em;
    return Y;
  };

  const double th_first = xfac * phi0;
  Transporter arc(S);
  double th_cur = th_first;
  std::vector<FrameSample> frames;
  for (int j = 0; j <= K; ++j) {
    const double th_j = th_first + j * xfac * step_w;
    const int n = std::max(1, static_cast<int>(std::ceil((th_j - th_cur) / (M_PI / 40))));
    for (int k = 1; k <= n; ++k) {
      const double a = th_cur + (th_j - th_cur) * (k - 1) / n;
      const double b = th_cur + (th_j - th_cur) * k / n;
      arc.segment(p + std::polar(rho, a), p + std::polar(rho, b));
    }
    th_cur = th_j;
    const Matrix2cd T_arc = arc.result();
    Matrix2cd sum = Matrix2cd::Zero();
    std::vector<Matrix2cd> samples;
    for (int l = 0; l < 8; ++l) {
      const double r_l = rho * (0.79 + 0.03 * l);
      Transporter rad(S);
      rad.Y = Matrix2cd::Identity();
      rad.segment(p + std::polar(rho, th_j), p + std::polar(r_l, th_j));
      const Matrix2cd T = rad.result() * T_arc;
      const Matrix2cd C = T.partialPivLu().solve(yhat(r_l, th_j));
      samples.push_back(C);
      sum += C;
    }
    FrameSample fs;
    fs.C = sum / 8.0;
    const double sc = std::max(mat_norm(fs.C), 1e-300);
    for (const Matrix2cd& C : samples)
      fs.scatter = std::max(fs.scatter, mat_norm(C - fs.C) / sc);
    frames.push_back(fs);
  }

  StokesData out;
  out.radius = rho;
  out.C1 = frames.front().C;
  out.loop = arc.result();
  for (int j = 0; j < K; ++j) {
    out.stokes.push_back(
        frames[static_cast<size_t>(j)].C.partialPivLu().solve(
            frames[static_cast<size_t>(j) + 1].C));
    out.matching_error = std::max(out.matching_error,
                                  frames[static_cast<size_t>(j)].scatter);
  }
  out.matching_error = std::max(out.matching_error, frames.back().scatter);
  return out;
}

double stokes_product_check(const StokesData& D, const FormalData& F,
                            RamifiedConvention conv) {
  const Matrix2cd Mhat = formal_monodromy(F, conv);
  Matrix2cd Sprod = Matrix2cd::Identity();
  for (const Matrix2cd& s : D.stokes) Sprod = Sprod * s;
  const Matrix2cd lhs = D.C1 * Mhat * Sprod.inverse() * D.C1.inverse();
  return mat_norm(lhs - D.loop) / std::max(1.0, mat_norm(D.loop));
}

bool is_apparent(const ProjectiveStructureP1& P, P1Point p, double tol) {
  LinearSystem S = companion_system(P.q);
  Cx p0;
  if (p.infinite) {
    S.omega = infinity_chart_system(S);
    p0 = Cx(0);
    if (rf_pole_order(infinity_chart_quadratic(P.q), P1Point{false, Cx(0)}) <= 0)
      throw NotAPole("no singularity at the point");
  } else {
    p0 = p.value;
    if (rf_pole_order(P.q, p) <= 0)
      throw NotAPole("no singularity at the point");
  }
  std::vector<Cx> others;
  for (const Cx& q : system_poles(S))
    if (std::abs(q - p0) > 1e-9 * std::max(1.0, std::abs(p0))) others.push_back(q);
  const Matrix2cd M = local_monodromy(S, p0, others, tol);
  const Cx mu = M.trace() / 2.0;
  return mat_norm(M - mu * Matrix2cd::Identity()) <=
         tol * std::max(1.0, mat_norm(M));
}

}  // namespace pslab
