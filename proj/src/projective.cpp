#include "pslab/projective.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace pslab {

RationalFunction schwarzian(const RationalFunction& f) {
  if (f.is_constant()) throw ConstantInput("schwarzian of a constant map");
  RationalFunction f1 = rf_derivative(f);
  if (f1.is_zero()) throw ConstantInput("schwarzian of a constant map");
  RationalFunction h = rf_derivative(f1) / f1;  // f''/f'
  return rf_derivative(h) - h * h / RationalFunction::constant(Cx(2));
}

double schwarzian_cocycle_check(const RationalFunction& f, const RationalFunction& g) {
  // Probe S(f.g) = (S(f).g) g'^2 + S(g) at sample points. The left side is
  // evaluated through the chain rule on the (well-conditioned) derivatives of
  // f and g separately; forming f.g symbolically squares the degrees and
  // loses accuracy in the gcd cancellations.
  RationalFunction f1 = rf_derivative(f), g1 = rf_derivative(g);
  if (f1.is_zero() || g1.is_zero()) throw ConstantInput("cocycle check needs non-constant maps");
  RationalFunction f2 = rf_derivative(f1), f3 = rf_derivative(f2);
  RationalFunction g2 = rf_derivative(g1), g3 = rf_derivative(g2);
  RationalFunction Sf = schwarzian(f), Sg = schwarzian(g);

  double worst = 0.0;
  int used = 0;
  for (int k = 0; k < 60 && used < 20; ++k) {
    double ang = 0.61803398875 * (k + 1) * 2.0 * M_PI;
    Cx z = (0.35 + 0.04 * k) * Cx(std::cos(ang), std::sin(ang));
    Cx a = g.eval(z);
    Cx vg1 = g1.eval(z), vg2 = g2.eval(z), vg3 = g3.eval(z);
    Cx vf1 = f1.eval(a), vf2 = f2.eval(a), vf3 = f3.eval(a);
    double mags = std::max({std::abs(a), std::abs(vg1), std::abs(vg2), std::abs(vg3),
                            std::abs(vf1), std::abs(vf2), std::abs(vf3)});
    if (!(mags < 1e6) || std::abs(vg1) < 1e-6 || std::abs(vf1) < 1e-6) continue;
    Cx F1 = vf1 * vg1;
    Cx F2 = vf2 * vg1 * vg1 + vf1 * vg2;
    Cx F3 = vf3 * vg1 * vg1 * vg1 + Cx(3) * vf2 * vg1 * vg2 + vf1 * vg3;
    Cx r2 = F2 / F1;
    Cx t1 = F3 / F1, t2 = Cx(1.5) * r2 * r2;
    Cx lhs = t1 - t2;
    Cx t3 = Sf.eval(a) * vg1 * vg1, t4 = Sg.eval(z);
    Cx rhs = t3 + t4;
    // normalize by the size of the cancelling terms, not just the result
    double denom = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
    ++used;
  }
  return worst;
}

QuadraticDifferential structure_difference(const RationalFunction& chart1,
                                           const RationalFunction& chart2) {
  // difference of the structures defined by the two charts over the standard
  // one; S(chart2) - S(chart1) by the cocycle rule
  RationalFunction s2 = schwarzian(chart2);
  RationalFunction s1 = schwarzian(chart1);
  return QuadraticDifferential{s2 - s1};
}

std::vector<std::pair<Cx, int>> poly_roots_clustered(const Poly& p, double cluster_tol) {
  int d = poly_deg(p);
  std::vector<Cx> roots;
  if (d >= 1) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (i > 0) C(i, i - 1) = Cx(1);
      C(i, d - 1) = -p[static_cast<size_t>(i)] / p[static_cast<size_t>(d)];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
    for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
  }
  std::sort(roots.begin(), roots.end(), [](Cx a, Cx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<std::pair<Cx, int>> clusters;
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Cx sum = roots[i];
    int cnt = 1;
    used[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(roots[j] - sum / Cx(double(cnt))) <
          cluster_tol * (1.0 + std::abs(roots[i]))) {
        sum += roots[j];
        cnt += 1;
        used[j] = true;
      }
    }
    clusters.push_back({sum / Cx(double(cnt)), cnt});
  }
  return clusters;
}

Divisor polar_divisor(const QuadraticDifferential& phi) {
  if (phi.q.is_zero()) throw ZeroDifferential("polar divisor of zero");
  Divisor D;
  // the stored q is canonical, so each denominator root is a genuine pole and
  // its cluster multiplicity is the pole order; a double root perturbed by
  // coefficient noise splits wider than any Laurent valuation can tolerate, so
  // the cluster count is the reliable order estimate
  for (const auto& [root, mult] : poly_roots_clustered(phi.q.den()))
    D.entries.push_back({P1Point::at(root), mult});
  int n_inf = 4 + phi.q.deg_num() - phi.q.deg_den();
  if (n_inf > 0) D.entries.push_back({P1Point::inf(), n_inf});
  return D;
}

SingularityReport residue_and_index(const ProjectiveStructureP1& P, P1Point p) {
  RationalFunction local = p.infinite ? infinity_chart_quadratic(P.q) : P.q;
  P1Point chart_pt = p.infinite ? P1Point::at(Cx(0)) : p;
  int n = rf_pole_order(local, chart_pt);
  if (n == 0) throw NotAPole("no pole at the requested point");
  SingularityReport rep;
  rep.point = p;
  rep.order = n;
  if (n <= 2) {
    Cx res2 = rf_expand(local, chart_pt, 0).coeff(-2);
    rep.res2 = res2;
    rep.theta = std::sqrt(Cx(1) - Cx(2) * res2);
  }
  return rep;
}

int quadratic_space_dimension(int g, const std::vector<int>& orders) {
  int s = 0;
  for (int n : orders) s += n;
  return 3 * g - 3 + s;
}

int marked_points_count(int n) { return n <= 2 ? 0 : n - 2; }

}  // namespace pslab
