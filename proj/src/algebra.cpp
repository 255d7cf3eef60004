#include "pslab/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pslab {

namespace {
constexpr int kDegreeCap = 256;
constexpr double kCanonTol = 1e-12;

void check_cap(const Poly& p) {
  if (poly_deg(p) > kDegreeCap)
    throw DegreeCapExceeded("polynomial degree " + std::to_string(poly_deg(p)));
}
}  // namespace

// ---------------------------------------------------------------------------

double poly_norm(const Poly& p) {
  double m = 0.0;
  for (const Cx& c : p) m = std::max(m, std::abs(c));
  return m;
}

void poly_trim(Poly& p, double rel_tol) {
  double m = poly_norm(p);
  if (m == 0.0) {
    p.clear();
    return;
  }
  size_t n = p.size();
  while (n > 0 && std::abs(p[n - 1]) <= rel_tol * m) --n;
  p.resize(n);
}

int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Cx(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  poly_trim(r);
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Cx(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  poly_trim(r);
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Cx(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  poly_trim(r);
  check_cap(r);
  return r;
}

Poly poly_scale(const Poly& a, Cx s) {
  Poly r = a;
  for (Cx& c : r) c *= s;
  poly_trim(r);
  return r;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Cx(double(i));
  poly_trim(r);
  return r;
}

Cx poly_eval(const Poly& a, Cx x) {
  Cx r(0);
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

void poly_divmod(const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
  if (b.empty()) throw DivisionByZeroFunction("polynomial division by zero");
  rem = a;
  quo.clear();
  int db = poly_deg(b);
  int da = poly_deg(rem);
  if (da < db) return;
  quo.assign(da - db + 1, Cx(0));
  Cx lead = b[db];
  for (int k = da - db; k >= 0; --k) {
    if (static_cast<int>(rem.size()) <= db + k) continue;
    Cx q = rem[db + k] / lead;
    quo[k] = q;
    for (int j = 0; j <= db; ++j) rem[j + k] -= q * b[j];
  }
  rem.resize(db > 0 ? db : 0);
  // trimming relative to the inputs, not the (possibly tiny) remainder itself
  double scale = std::max(poly_norm(a), poly_norm(b));
  for (Cx& c : rem)
    if (std::abs(c) <= 1e-13 * scale) c = Cx(0);
  poly_trim(rem, 0.0);
}

Poly poly_shift(const Poly& p, Cx shift) {
  // Horner-style Taylor shift, O(d^2)
  Poly r = p;
  int d = poly_deg(p);
  for (int i = 0; i < d; ++i)
    for (int j = d - 1; j >= i; --j) r[j] += shift * r[j + 1];
  poly_trim(r);
  return r;
}

Poly poly_reverse(const Poly& p) {
  Poly r(p.rbegin(), p.rend());
  poly_trim(r);
  return r;
}

Poly poly_gcd(Poly a, Poly b, double tol) {
  poly_trim(a, tol);
  poly_trim(b, tol);
  if (a.empty()) return b.empty() ? Poly{Cx(1)} : b;
  if (b.empty()) return a;
  auto normalize = [](Poly& p) {
    double m = poly_norm(p);
    if (m > 0)
      for (Cx& c : p) c /= m;
  };
  normalize(a);
  normalize(b);
  if (poly_deg(a) < poly_deg(b)) std::swap(a, b);
  while (true) {
    Poly q, r;
    poly_divmod(a, b, q, r);
    poly_trim(r, 1e-10);
    if (r.empty()) {
      // make monic
      Cx lead = b.back();
      for (Cx& c : b) c /= lead;
      return b;
    }
    a = std::move(b);
    b = std::move(r);
    normalize(b);
    if (poly_deg(b) == 0) return Poly{Cx(1)};
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Cx> companion_roots(const Poly& p) {
  int d = poly_deg(p);
  std::vector<Cx> roots;
  if (d < 1) return roots;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (i > 0) C(i, i - 1) = Cx(1);
    C(i, d - 1) = -p[static_cast<size_t>(i)] / p[static_cast<size_t>(d)];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

// divide p by (x - r) in place; succeed only when the remainder is negligible
bool deflate_linear(Poly& p, Cx r, double tol) {
  int d = poly_deg(p);
  if (d < 1) return false;
  Poly q(static_cast<size_t>(d));
  Cx carry = p[static_cast<size_t>(d)];
  for (int j = d - 1; j >= 0; --j) {
    q[static_cast<size_t>(j)] = carry;
    carry = p[static_cast<size_t>(j)] + r * carry;
  }
  double scale = poly_norm(p) * std::pow(std::max(1.0, std::abs(r)), d);
  if (std::abs(carry) > tol * scale) return false;
  p = std::move(q);
  poly_trim(p);
  return true;
}

struct RootCluster {
  Cx center;
  int mult;
};

std::vector<RootCluster> cluster_roots(const std::vector<Cx>& roots, double tol) {
  std::vector<Cx> sorted = roots;
  std::sort(sorted.begin(), sorted.end(), [](Cx a, Cx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<RootCluster> out;
  std::vector<bool> used(sorted.size(), false);
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (used[i]) continue;
    Cx sum = sorted[i];
    int cnt = 1;
    used[i] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      Cx c = sum / Cx(double(cnt));
      for (size_t j = 0; j < sorted.size(); ++j) {
        if (used[j]) continue;
        if (std::abs(sorted[j] - c) < tol * (1.0 + std::abs(c))) {
          sum += sorted[j];
          cnt += 1;
          used[j] = true;
          grew = true;
        }
      }
    }
    out.push_back({sum / Cx(double(cnt)), cnt});
  }
  return out;
}

// A multiplicity-k root of p is a simple root of p^{(k-1)}, where Newton is
// well conditioned even though the root itself is only defined to noise^{1/k}
// through point evaluation of p.
Cx refine_multiple_root(const Poly& p, Cx r, int k) {
  Poly h = p;
  for (int i = 1; i < k; ++i) h = poly_derivative(h);
  Poly h1 = poly_derivative(h);
  for (int it = 0; it < 12; ++it) {
    Cx v = poly_eval(h, r), dv = poly_eval(h1, r);
    if (std::abs(dv) < 1e-300) break;
    Cx step = v / dv;
    r -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(r))) break;
  }
  return r;
}

// cancel numerically-common roots of num and den, multiplicity aware; only
// commits divisions whose remainders are at rounding level
void cancel_common_factors(Poly& num, Poly& den) {
  std::vector<RootCluster> cn = cluster_roots(companion_roots(num), 5e-3);
  std::vector<RootCluster> cd = cluster_roots(companion_roots(den), 5e-3);
  for (const RootCluster& d : cd) {
    int best = -1;
    double bd = 1e300;
    for (size_t i = 0; i < cn.size(); ++i) {
      if (cn[i].mult == 0) continue;
      double dist = std::abs(cn[i].center - d.center);
      if (dist < bd) {
        bd = dist;
        best = static_cast<int>(i);
      }
    }
    if (best < 0 || bd > 2e-3 * (1.0 + std::abs(d.center))) continue;
    RootCluster& n = cn[static_cast<size_t>(best)];
    int k = std::min(n.mult, d.mult);
    Cx rn = refine_multiple_root(num, n.center, n.mult);
    Cx rd = refine_multiple_root(den, d.center, d.mult);
    if (std::abs(rn - n.center) > 1e-4 * (1.0 + std::abs(n.center))) rn = n.center;
    if (std::abs(rd - d.center) > 1e-4 * (1.0 + std::abs(d.center))) rd = d.center;
    Poly n2 = num, d2 = den;
    bool ok = true;
    for (int c = 0; c < k && ok; ++c)
      ok = deflate_linear(n2, rn, 1e-9) && deflate_linear(d2, rd, 1e-9);
    if (!ok) continue;
    num = std::move(n2);
    den = std::move(d2);
    n.mult -= k;
    if (poly_deg(num) < 1 || poly_deg(den) < 1) break;
  }
}

}  // namespace

RationalFunction::RationalFunction(Poly num, Poly den)
    : num_(std::move(num)), den_(std::move(den)) {
  canonicalize();
}

void RationalFunction::canonicalize() {
  poly_trim(num_, kCanonTol);
  poly_trim(den_, kCanonTol);
  if (den_.empty()) throw DivisionByZeroFunction("zero denominator");
  if (num_.empty()) {
    den_ = {Cx(1)};
    return;
  }
  check_cap(num_);
  check_cap(den_);
  if (poly_deg(den_) > 0) {
    Poly g = poly_gcd(num_, den_, kCanonTol);
    if (poly_deg(g) >= 1) {
      Poly qn, rn, qd, rd;
      poly_divmod(num_, g, qn, rn);
      poly_divmod(den_, g, qd, rd);
      // only cancel when the division is genuinely exact
      double sn = poly_norm(num_), sd = poly_norm(den_);
      if (poly_norm(rn) <= 1e-9 * sn && poly_norm(rd) <= 1e-9 * sd) {
        num_ = std::move(qn);
        den_ = std::move(qd);
        poly_trim(num_, kCanonTol);
        poly_trim(den_, kCanonTol);
      }
    }
  }
  // Euclid misses common factors once rounding noise drowns the remainders
  // (typical after compositions); fall back to pairing numerator and
  // denominator roots and deflating verified matches
  if (poly_deg(num_) >= 1 && poly_deg(den_) >= 1 && poly_deg(num_) <= 96 &&
      poly_deg(den_) <= 96) {
    cancel_common_factors(num_, den_);
    if (num_.empty()) {
      den_ = {Cx(1)};
      return;
    }
    if (den_.empty()) throw DivisionByZeroFunction("zero denominator");
  }
  Cx lead = den_.back();
  for (Cx& c : den_) c /= lead;
  for (Cx& c : num_) c /= lead;
  if (num_.empty()) den_ = {Cx(1)};
}

RationalFunction RationalFunction::monomial(Cx p, int k) {
  Poly lin = {-p, Cx(1)};
  Poly pw = {Cx(1)};
  for (int i = 0; i < std::abs(k); ++i) pw = poly_mul(pw, lin);
  if (k >= 0) return RationalFunction(pw, {Cx(1)});
  return RationalFunction({Cx(1)}, pw);
}

Cx RationalFunction::eval(Cx x) const {
  return poly_eval(num_, x) / poly_eval(den_, x);
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(
      poly_add(poly_mul(a.num_, b.den_), poly_mul(b.num_, a.den_)),
      poly_mul(a.den_, b.den_));
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(
      poly_sub(poly_mul(a.num_, b.den_), poly_mul(b.num_, a.den_)),
      poly_mul(a.den_, b.den_));
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(poly_mul(a.num_, b.num_), poly_mul(a.den_, b.den_));
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw DivisionByZeroFunction("rational division by zero");
  return RationalFunction(poly_mul(a.num_, b.den_), poly_mul(a.den_, b.num_));
}

RationalFunction operator-(const RationalFunction& a) {
  return RationalFunction(poly_scale(a.num_, Cx(-1)), a.den_);
}

RationalFunction rf_derivative(const RationalFunction& f) {
  // (n'd - nd')/d^2
  Poly n = poly_sub(poly_mul(poly_derivative(f.num()), f.den()),
                    poly_mul(f.num(), poly_derivative(f.den())));
  return RationalFunction(n, poly_mul(f.den(), f.den()));
}

RationalFunction rf_compose(const RationalFunction& f, const RationalFunction& g) {
  // f = n/d of degree D; f(g) = sum n_i gn^i gd^(D-i) / sum d_i gn^i gd^(D-i)
  int D = std::max(f.deg_num(), f.deg_den());
  if (D < 0) return RationalFunction::zero();
  std::vector<Poly> gn_pow(D + 1), gd_pow(D + 1);
  gn_pow[0] = gd_pow[0] = {Cx(1)};
  for (int i = 1; i <= D; ++i) {
    gn_pow[i] = poly_mul(gn_pow[i - 1], g.num());
    gd_pow[i] = poly_mul(gd_pow[i - 1], g.den());
  }
  Poly num, den;
  for (int i = 0; i <= D; ++i) {
    Poly base = poly_mul(gn_pow[i], gd_pow[D - i]);
    if (i <= f.deg_num() && !f.num().empty())
      num = poly_add(num, poly_scale(base, f.num()[i]));
    if (i <= f.deg_den()) den = poly_add(den, poly_scale(base, f.den()[i]));
  }
  return RationalFunction(num, den);
}

RationalFunction rf_pow(const RationalFunction& f, int k) {
  RationalFunction r = RationalFunction::constant(Cx(1));
  RationalFunction b = k >= 0 ? f : RationalFunction::constant(Cx(1)) / f;
  for (int i = 0; i < std::abs(k); ++i) r = r * b;
  return r;
}

double rf_probe_distance(const RationalFunction& a, const RationalFunction& b) {
  // fixed probe grid away from small integers where test poles tend to sit
  double worst = 0.0;
  int finite = 0;
  for (int i = 0; i < 20; ++i) {
    double th = 0.37 + 0.31 * i;
    Cx x = Cx(1.7 * std::cos(th) + 0.11, 1.3 * std::sin(th) - 0.07);
    Cx va = a.eval(x), vb = b.eval(x);
    if (!std::isfinite(std::abs(va)) || !std::isfinite(std::abs(vb))) continue;
    double scale = 1.0 + std::max(std::abs(va), std::abs(vb));
    worst = std::max(worst, std::abs(va - vb) / scale);
    ++finite;
  }
  return finite > 0 ? worst : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

void LaurentSeries::set_coeff(int order, Cx v) {
  if (order > trunc && trunc != kExactTrunc) return;
  if (coeffs.empty()) {
    min_order = order;
    coeffs = {v};
    return;
  }
  if (order < min_order) {
    coeffs.insert(coeffs.begin(), static_cast<size_t>(min_order - order), Cx(0));
    min_order = order;
  } else if (order - min_order >= static_cast<int>(coeffs.size())) {
    coeffs.resize(static_cast<size_t>(order - min_order) + 1, Cx(0));
  }
  coeffs[static_cast<size_t>(order - min_order)] = v;
}

bool LaurentSeries::is_zero(double tol) const {
  for (const Cx& c : coeffs)
    if (std::abs(c) > tol) return false;
  return true;
}

double LaurentSeries::max_abs() const {
  double m = 0.0;
  for (const Cx& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

int LaurentSeries::valuation(double rel_cutoff) const {
  double m = max_abs();
  if (m == 0.0) return trunc + 1;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (std::abs(coeffs[i]) > rel_cutoff * m) return min_order + static_cast<int>(i);
  return trunc + 1;
}

void LaurentSeries::normalize(double rel_cutoff) {
  // Leading coefficients are noise only relative to their neighbours.
  // Comparing against the global max would drop a genuine small head when a
  // far tail is huge (formal gauge series routinely blow up at high order).
  size_t lead = 0;
  while (lead < coeffs.size()) {
    double wmax = 0.0;
    for (size_t j = lead + 1; j < coeffs.size() && j <= lead + 6; ++j)
      wmax = std::max(wmax, std::abs(coeffs[j]));
    if (std::abs(coeffs[lead]) > rel_cutoff * wmax) break;
    ++lead;
  }
  if (lead > 0) {
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(lead));
    min_order += static_cast<int>(lead);
  }
  if (coeffs.empty()) min_order = 0;
}

LaurentSeries LaurentSeries::zero(P1Point base, int trunc) {
  return LaurentSeries{base, 0, {}, trunc};
}

LaurentSeries LaurentSeries::constant(P1Point base, Cx c, int trunc) {
  LaurentSeries s{base, 0, {}, trunc};
  if (c != Cx(0)) s.coeffs = {c};
  return s;
}

LaurentSeries LaurentSeries::monomial(P1Point base, int k, Cx c, int trunc) {
  LaurentSeries s{base, k, {c}, trunc};
  return s;
}

Cx LaurentSeries::eval(Cx u) const {
  // Horner on the regular part, explicit powers on the principal part
  Cx r(0);
  for (size_t i = coeffs.size(); i-- > 0;) r = r * u + coeffs[i];
  return r * std::pow(u, Cx(double(min_order)));
}

LaurentSeries ls_add(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries r;
  r.base = a.base;
  r.trunc = std::min(a.trunc, b.trunc);
  if (a.coeffs.empty() && b.coeffs.empty()) {
    r.min_order = 0;
    return r;
  }
  int lo = std::min(a.coeffs.empty() ? b.min_order : a.min_order,
                    b.coeffs.empty() ? a.min_order : b.min_order);
  int hi = std::min(r.trunc, std::max(a.min_order + static_cast<int>(a.coeffs.size()),
                                      b.min_order + static_cast<int>(b.coeffs.size())) - 1);
  r.min_order = lo;
  if (hi >= lo) {
    r.coeffs.assign(static_cast<size_t>(hi - lo + 1), Cx(0));
    for (int k = lo; k <= hi; ++k)
      r.coeffs[static_cast<size_t>(k - lo)] = a.coeff(k) + b.coeff(k);
  }
  r.normalize();
  return r;
}

LaurentSeries ls_sub(const LaurentSeries& a, const LaurentSeries& b) {
  return ls_add(a, ls_scale(b, Cx(-1)));
}

LaurentSeries ls_scale(const LaurentSeries& a, Cx s) {
  LaurentSeries r = a;
  for (Cx& c : r.coeffs) c *= s;
  return r;
}

LaurentSeries ls_mul(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries r;
  r.base = a.base;
  if (a.coeffs.empty() || b.coeffs.empty()) {
    r.min_order = 0;
    r.trunc = std::min(a.trunc, b.trunc);
    if (a.coeffs.empty() && a.trunc != kExactTrunc)
      r.trunc = std::min(r.trunc, a.trunc + b.min_order);
    if (b.coeffs.empty() && b.trunc != kExactTrunc)
      r.trunc = std::min(r.trunc, b.trunc + a.min_order);
    return r;
  }
  long ta = (a.trunc == kExactTrunc) ? kExactTrunc : a.trunc + static_cast<long>(b.min_order);
  long tb = (b.trunc == kExactTrunc) ? kExactTrunc : b.trunc + static_cast<long>(a.min_order);
  long t = std::min(ta, tb);
  r.trunc = static_cast<int>(std::min<long>(t, kExactTrunc));
  r.min_order = a.min_order + b.min_order;
  long len = static_cast<long>(r.trunc) - r.min_order + 1;
  if (r.trunc == kExactTrunc)
    len = static_cast<long>(a.coeffs.size() + b.coeffs.size()) - 1;
  if (len <= 0) {
    r.coeffs.clear();
    return r;
  }
  len = std::min<long>(len, static_cast<long>(a.coeffs.size() + b.coeffs.size()) - 1);
  r.coeffs.assign(static_cast<size_t>(len), Cx(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    for (size_t j = 0; j < b.coeffs.size(); ++j)
      if (static_cast<long>(i + j) < len) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  r.normalize();
  return r;
}

LaurentSeries ls_inverse(const LaurentSeries& a, int out_trunc) {
  LaurentSeries w = a;
  w.normalize();
  if (w.coeffs.empty() || std::abs(w.coeffs[0]) == 0.0)
    throw SingularLeadingTerm("series inverse of zero leading term");
  int v = w.min_order;
  if (a.trunc != kExactTrunc && out_trunc > a.trunc - 2 * v)
    out_trunc = a.trunc - 2 * v;
  int len = out_trunc + v + 1;  // orders -v .. out_trunc
  LaurentSeries r;
  r.base = a.base;
  r.trunc = out_trunc;
  r.min_order = -v;
  if (len <= 0) return r;
  r.coeffs.assign(static_cast<size_t>(len), Cx(0));
  Cx lead = w.coeffs[0];
  r.coeffs[0] = Cx(1) / lead;
  for (int k = 1; k < len; ++k) {
    Cx s(0);
    for (int j = 1; j <= k; ++j) {
      Cx aj = (static_cast<size_t>(j) < w.coeffs.size()) ? w.coeffs[j] : Cx(0);
      s += aj * r.coeffs[static_cast<size_t>(k - j)];
    }
    r.coeffs[static_cast<size_t>(k)] = -s / lead;
  }
  return r;
}

LaurentSeries ls_derivative(const LaurentSeries& a) {
  LaurentSeries r;
  r.base = a.base;
  r.trunc = (a.trunc == kExactTrunc) ? kExactTrunc : a.trunc - 1;
  r.min_order = a.min_order - 1;
  r.coeffs.assign(a.coeffs.size(), Cx(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    r.coeffs[i] = a.coeffs[i] * Cx(double(a.min_order + static_cast<int>(i)));
  r.normalize();
  return r;
}

LaurentSeries ls_integrate(const LaurentSeries& a) {
  LaurentSeries r;
  r.base = a.base;
  r.trunc = (a.trunc == kExactTrunc) ? kExactTrunc : a.trunc + 1;
  r.min_order = a.min_order + 1;
  r.coeffs.assign(a.coeffs.size(), Cx(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    int k = a.min_order + static_cast<int>(i);
    if (k == -1) {
      if (std::abs(a.coeffs[i]) > 1e-12 * (1.0 + a.max_abs()))
        throw BadInput("series antiderivative of a u^-1 term");
      continue;
    }
    r.coeffs[i] = a.coeffs[i] / Cx(double(k + 1));
  }
  r.normalize();
  return r;
}

LaurentSeries ls_truncate(const LaurentSeries& a, int new_trunc) {
  LaurentSeries r = a;
  if (new_trunc < r.trunc) {
    r.trunc = new_trunc;
    long keep = static_cast<long>(new_trunc) - r.min_order + 1;
    if (keep < 0) keep = 0;
    if (static_cast<long>(r.coeffs.size()) > keep)
      r.coeffs.resize(static_cast<size_t>(keep));
  }
  return r;
}

LaurentSeries ls_exp(const LaurentSeries& a, int out_trunc) {
  if (!a.coeffs.empty() && a.valuation() < 0)
    throw BadInput("series exp of a principal part");
  if (a.trunc != kExactTrunc) out_trunc = std::min(out_trunc, a.trunc);
  // exp via the ODE r' = a' r, order by order
  LaurentSeries r = LaurentSeries::constant(a.base, Cx(1), out_trunc);
  r.coeffs.assign(static_cast<size_t>(out_trunc + 1), Cx(0));
  r.min_order = 0;
  r.coeffs[0] = std::exp(a.coeff(0));
  for (int k = 1; k <= out_trunc; ++k) {
    Cx s(0);
    for (int j = 1; j <= k; ++j) s += Cx(double(j)) * a.coeff(j) * r.coeffs[static_cast<size_t>(k - j)];
    r.coeffs[static_cast<size_t>(k)] = s / Cx(double(k));
  }
  r.normalize();
  return r;
}

// ---------------------------------------------------------------------------

LaurentSeries rf_expand(const RationalFunction& f, P1Point p, int N) {
  if (f.is_zero()) {
    LaurentSeries s = LaurentSeries::zero(p, N);
    return s;
  }
  Poly n, d;
  if (p.infinite) {
    // f(1/t) = t^(dd-dn) rev(num)(t)/rev(den)(t)
    n = poly_reverse(f.num());
    d = poly_reverse(f.den());
    int shift = f.deg_den() - f.deg_num();
    LaurentSeries s = rf_expand(RationalFunction(n, d), P1Point::at(Cx(0)),
                                N - shift);
    s.base = p;
    s.min_order += shift;
    s.trunc = N;
    if (N < s.min_order) throw TruncationTooSmall("N below valuation at infinity");
    return s;
  }
  n = poly_shift(f.num(), p.value);
  d = poly_shift(f.den(), p.value);
  double nn = poly_norm(n), nd = poly_norm(d);
  size_t vn = 0, vd = 0;
  while (vn < n.size() && std::abs(n[vn]) <= 1e-12 * nn) ++vn;
  while (vd < d.size() && std::abs(d[vd]) <= 1e-12 * nd) ++vd;
  int val = static_cast<int>(vn) - static_cast<int>(vd);
  if (N < val) throw TruncationTooSmall("N below valuation");
  int len = N - val + 1;
  LaurentSeries r;
  r.base = p;
  r.trunc = N;
  r.min_order = val;
  r.coeffs.assign(static_cast<size_t>(len), Cx(0));
  // power-series division of shifted num/u^vn by den/u^vd
  std::vector<Cx> ns(static_cast<size_t>(len), Cx(0)), ds(static_cast<size_t>(len), Cx(0));
  for (int i = 0; i < len; ++i) {
    if (vn + static_cast<size_t>(i) < n.size()) ns[static_cast<size_t>(i)] = n[vn + static_cast<size_t>(i)];
    if (vd + static_cast<size_t>(i) < d.size()) ds[static_cast<size_t>(i)] = d[vd + static_cast<size_t>(i)];
  }
  Cx lead = ds[0];
  for (int k = 0; k < len; ++k) {
    Cx s = ns[static_cast<size_t>(k)];
    for (int j = 1; j <= k; ++j)
      s -= ds[static_cast<size_t>(j)] * r.coeffs[static_cast<size_t>(k - j)];
    r.coeffs[static_cast<size_t>(k)] = s / lead;
  }
  r.normalize();
  return r;
}

int rf_pole_order(const RationalFunction& f, P1Point p) {
  if (f.is_zero()) return 0;
  LaurentSeries s = rf_expand(f, p, 2);
  int v = s.valuation();
  return v < 0 ? -v : 0;
}

Cx rf_residue_as_oneform(const RationalFunction& f, P1Point p) {
  if (p.infinite) {
    RationalFunction g = infinity_chart_oneform(f);
    return rf_expand(g, P1Point::at(Cx(0)), 1).coeff(-1);
  }
  return rf_expand(f, p, 1).coeff(-1);
}

RationalFunction infinity_chart_function(const RationalFunction& f) {
  int shift = f.deg_den() - f.deg_num();
  RationalFunction core(poly_reverse(f.num()), poly_reverse(f.den()));
  RationalFunction t_pow = rf_pow(RationalFunction::x(), std::abs(shift));
  return shift >= 0 ? core * t_pow : core / t_pow;
}

RationalFunction infinity_chart_oneform(const RationalFunction& f) {
  RationalFunction g = infinity_chart_function(f);
  return -(g / rf_pow(RationalFunction::x(), 2));
}

RationalFunction infinity_chart_quadratic(const RationalFunction& q) {
  RationalFunction g = infinity_chart_function(q);
  return g / rf_pow(RationalFunction::x(), 4);
}

// ---------------------------------------------------------------------------

LaurentMatrix LaurentMatrix::zero(P1Point base, int trunc) {
  LaurentMatrix m;
  m.base = base;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = LaurentSeries::zero(base, trunc);
  return m;
}

LaurentMatrix LaurentMatrix::identity(P1Point base, int trunc) {
  LaurentMatrix m = zero(base, trunc);
  m.e[0][0] = LaurentSeries::constant(base, Cx(1), trunc);
  m.e[1][1] = LaurentSeries::constant(base, Cx(1), trunc);
  return m;
}

int LaurentMatrix::min_valuation(double rel_cutoff) const {
  double scale = max_abs();
  int v = min_trunc() + 1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const LaurentSeries& s = e[i][j];
      for (size_t k = 0; k < s.coeffs.size(); ++k)
        if (std::abs(s.coeffs[k]) > rel_cutoff * scale) {
          v = std::min(v, s.min_order + static_cast<int>(k));
          break;
        }
    }
  return v;
}

int LaurentMatrix::min_trunc() const {
  int t = kExactTrunc;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t = std::min(t, e[i][j].trunc);
  return t;
}

LaurentSeries LaurentMatrix::trace() const { return ls_add(e[0][0], e[1][1]); }

double LaurentMatrix::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, e[i][j].max_abs());
  return m;
}

LaurentMatrix lm_add(const LaurentMatrix& A, const LaurentMatrix& B) {
  LaurentMatrix r;
  r.base = A.base;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = ls_add(A.e[i][j], B.e[i][j]);
  return r;
}

LaurentMatrix lm_sub(const LaurentMatrix& A, const LaurentMatrix& B) {
  LaurentMatrix r;
  r.base = A.base;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = ls_sub(A.e[i][j], B.e[i][j]);
  return r;
}

LaurentMatrix lm_mul(const LaurentMatrix& A, const LaurentMatrix& B) {
  LaurentMatrix r;
  r.base = A.base;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.e[i][j] = ls_add(ls_mul(A.e[i][0], B.e[0][j]), ls_mul(A.e[i][1], B.e[1][j]));
  return r;
}

LaurentMatrix lm_scale(const LaurentMatrix& A, Cx s) {
  LaurentMatrix r = A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = ls_scale(A.e[i][j], s);
  return r;
}

LaurentMatrix lm_scale_series(const LaurentMatrix& A, const LaurentSeries& s) {
  LaurentMatrix r = A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = ls_mul(A.e[i][j], s);
  return r;
}

LaurentMatrix lm_inverse(const LaurentMatrix& A, int out_trunc) {
  LaurentSeries det = ls_sub(ls_mul(A.e[0][0], A.e[1][1]), ls_mul(A.e[0][1], A.e[1][0]));
  LaurentSeries det_inv = ls_inverse(det, out_trunc + std::max(0, -det.valuation()) + 4);
  LaurentMatrix adj;
  adj.base = A.base;
  adj.e[0][0] = A.e[1][1];
  adj.e[1][1] = A.e[0][0];
  adj.e[0][1] = ls_scale(A.e[0][1], Cx(-1));
  adj.e[1][0] = ls_scale(A.e[1][0], Cx(-1));
  LaurentMatrix r = lm_scale_series(adj, det_inv);
  return lm_truncate(r, out_trunc);
}

LaurentMatrix lm_derivative(const LaurentMatrix& A) {
  LaurentMatrix r;
  r.base = A.base;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = ls_derivative(A.e[i][j]);
  return r;
}

LaurentMatrix lm_truncate(const LaurentMatrix& A, int new_trunc) {
  LaurentMatrix r = A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = ls_truncate(A.e[i][j], new_trunc);
  return r;
}

LaurentMatrix lm_gauge(const LaurentMatrix& A, const LaurentMatrix& G, int out_trunc) {
  LaurentMatrix Ginv = lm_inverse(G, out_trunc + 2 * std::max(0, -A.min_valuation()) + 4);
  LaurentMatrix r = lm_add(lm_mul(Ginv, lm_mul(A, G)), lm_mul(Ginv, lm_derivative(G)));
  return lm_truncate(r, out_trunc);
}

}  // namespace pslab
