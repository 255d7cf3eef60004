#pragma once

// Complex rational functions in one variable (double-precision coefficients,
// canonical form) and truncated Laurent series / 2x2 Laurent matrices.
// These are the substrate for the Schwarzian/Riccati/system calculus.

#include <complex>
#include <limits>
#include <vector>

#include "pslab/errors.hpp"

namespace pslab {

using Cx = std::complex<double>;

// Ascending coefficient list; empty vector means the zero polynomial.
using Poly = std::vector<Cx>;

// A point on P^1: finite value or infinity.
struct P1Point {
  bool infinite = false;
  Cx value{0.0, 0.0};

  static P1Point inf() { return P1Point{true, Cx(0)}; }
  static P1Point at(Cx z) { return P1Point{false, z}; }
};

inline bool same_point(const P1Point& a, const P1Point& b, double tol = 1e-9) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return std::abs(a.value - b.value) <= tol * (1.0 + std::abs(a.value));
}

// ---------------------------------------------------------------------------
// polynomial helpers

double poly_norm(const Poly& p);
void poly_trim(Poly& p, double rel_tol = 1e-12);
int poly_deg(const Poly& p);  // -1 for zero
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, Cx s);
Poly poly_derivative(const Poly& a);
Cx poly_eval(const Poly& a, Cx x);
// quotient and remainder of a / b, b nonzero
void poly_divmod(const Poly& a, const Poly& b, Poly& quo, Poly& rem);
// p(x + shift)
Poly poly_shift(const Poly& p, Cx shift);
// coefficients reversed (p viewed from infinity): rev(p)(t) = t^deg p(1/t)
Poly poly_reverse(const Poly& p);
// monic approximate gcd (Euclid with relative tolerance); {1} when coprime
Poly poly_gcd(Poly a, Poly b, double tol = 1e-12);

// ---------------------------------------------------------------------------

class RationalFunction {
 public:
  RationalFunction() : num_{}, den_{Cx(1)} {}
  RationalFunction(Poly num, Poly den);  // canonicalizes

  static RationalFunction zero() { return RationalFunction(); }
  static RationalFunction constant(Cx c) { return RationalFunction({c}, {Cx(1)}); }
  static RationalFunction x() { return RationalFunction({Cx(0), Cx(1)}, {Cx(1)}); }
  static RationalFunction poly(Poly p) { return RationalFunction(std::move(p), {Cx(1)}); }
  // (x - p)^k, k may be negative
  static RationalFunction monomial(Cx p, int k);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.empty(); }
  bool is_constant() const { return poly_deg(num_) <= 0 && poly_deg(den_) == 0; }
  int deg_num() const { return poly_deg(num_); }
  int deg_den() const { return poly_deg(den_); }

  Cx eval(Cx x) const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a);
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

 private:
  Poly num_, den_;
  void canonicalize();
};

RationalFunction rf_derivative(const RationalFunction& f);
// f(g)
RationalFunction rf_compose(const RationalFunction& f, const RationalFunction& g);
RationalFunction rf_pow(const RationalFunction& f, int k);

// max |a - b| over a fixed probe grid (shared by property tests)
double rf_probe_distance(const RationalFunction& a, const RationalFunction& b);

// ---------------------------------------------------------------------------
// Laurent series at a base point, truncated at order `trunc` (inclusive).
// coeff(k) is the coefficient of u^k where u is the local coordinate
// (u = x - p at a finite point, u = t = 1/x at infinity).

constexpr int kExactTrunc = std::numeric_limits<int>::max() / 4;

struct LaurentSeries {
  P1Point base;
  int min_order = 0;
  std::vector<Cx> coeffs;  // index i -> order min_order + i
  int trunc = 0;

  Cx coeff(int order) const {
    if (order < min_order) return Cx(0);
    size_t i = static_cast<size_t>(order - min_order);
    return i < coeffs.size() ? coeffs[i] : Cx(0);
  }
  void set_coeff(int order, Cx v);
  bool is_zero(double tol = 0.0) const;
  // valuation with relative cutoff; returns trunc+1 when zero up to truncation
  int valuation(double rel_cutoff = 1e-10) const;
  double max_abs() const;
  void normalize(double rel_cutoff = 1e-12);  // strips negligible leading coeffs

  static LaurentSeries zero(P1Point base, int trunc);
  static LaurentSeries constant(P1Point base, Cx c, int trunc = kExactTrunc);
  // c * u^k
  static LaurentSeries monomial(P1Point base, int k, Cx c, int trunc = kExactTrunc);

  Cx eval(Cx u) const;  // truncated evaluation at local coordinate u
};

LaurentSeries ls_add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries ls_sub(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries ls_mul(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries ls_scale(const LaurentSeries& a, Cx s);
// reciprocal computed through order out_trunc
LaurentSeries ls_inverse(const LaurentSeries& a, int out_trunc);
// d/du
LaurentSeries ls_derivative(const LaurentSeries& a);
// term-by-term antiderivative; the u^-1 term must be absent (caller's business)
LaurentSeries ls_integrate(const LaurentSeries& a);
LaurentSeries ls_truncate(const LaurentSeries& a, int new_trunc);
// exp of a series with valuation >= 0, through out_trunc
LaurentSeries ls_exp(const LaurentSeries& a, int out_trunc);

// Laurent expansion of f at p through order N.
LaurentSeries rf_expand(const RationalFunction& f, P1Point p, int N);

// pole order of f at p (0 if regular there)
int rf_pole_order(const RationalFunction& f, P1Point p);
// residue (coefficient of u^-1) of the 1-form f dx at p; at infinity this is
// the residue of the pulled-back form -f(1/t)/t^2 dt at t=0.
Cx rf_residue_as_oneform(const RationalFunction& f, P1Point p);

// chart transport to t = 1/x: function values, 1-forms (f dx), and quadratic
// differentials ((q/2) dx^2) each have their own law
RationalFunction infinity_chart_function(const RationalFunction& f);   // f(1/t)
RationalFunction infinity_chart_oneform(const RationalFunction& f);    // -f(1/t)/t^2
RationalFunction infinity_chart_quadratic(const RationalFunction& q);  // q(1/t)/t^4

// ---------------------------------------------------------------------------

struct LaurentMatrix {
  P1Point base;
  LaurentSeries e[2][2];

  static LaurentMatrix zero(P1Point base, int trunc);
  static LaurentMatrix identity(P1Point base, int trunc = kExactTrunc);

  int min_valuation(double rel_cutoff = 1e-10) const;
  int min_trunc() const;
  LaurentSeries trace() const;
  double max_abs() const;
};

LaurentMatrix lm_add(const LaurentMatrix& A, const LaurentMatrix& B);
LaurentMatrix lm_sub(const LaurentMatrix& A, const LaurentMatrix& B);
LaurentMatrix lm_mul(const LaurentMatrix& A, const LaurentMatrix& B);
LaurentMatrix lm_scale(const LaurentMatrix& A, Cx s);
LaurentMatrix lm_scale_series(const LaurentMatrix& A, const LaurentSeries& s);
LaurentMatrix lm_inverse(const LaurentMatrix& A, int out_trunc);
LaurentMatrix lm_derivative(const LaurentMatrix& A);
LaurentMatrix lm_truncate(const LaurentMatrix& A, int new_trunc);
// G^-1 A G + G^-1 dG truncated at out_trunc
LaurentMatrix lm_gauge(const LaurentMatrix& A, const LaurentMatrix& G, int out_trunc);

}  // namespace pslab
