#include "pslab/riccati.hpp"

namespace pslab {

MoebiusGauge MoebiusGauge::identity() {
  RationalFunction one = RationalFunction::constant(Cx(1));
  return {one, RationalFunction::zero(), RationalFunction::zero(), one};
}

MoebiusGauge MoebiusGauge::scaling(RationalFunction s) {
  RationalFunction one = RationalFunction::constant(Cx(1));
  return {std::move(s), RationalFunction::zero(), RationalFunction::zero(), one};
}

MoebiusGauge MoebiusGauge::translation(RationalFunction t) {
  RationalFunction one = RationalFunction::constant(Cx(1));
  return {one, std::move(t), RationalFunction::zero(), one};
}

RationalFunction MoebiusGauge::det() const { return a * d - b * c; }

MoebiusGauge compose(const MoebiusGauge& G, const MoebiusGauge& H) {
  return {G.a * H.a + G.b * H.c, G.a * H.b + G.b * H.d,
          G.c * H.a + G.d * H.c, G.c * H.b + G.d * H.d};
}

RiccatiEq gauge_apply(const RiccatiEq& R, const MoebiusGauge& G) {
  RationalFunction det = G.det();
  if (det.is_zero()) throw DegenerateGauge("gauge determinant vanishes identically");
  const RationalFunction &a = G.a, &b = G.b, &c = G.c, &d = G.d;
  RationalFunction a1 = rf_derivative(a), b1 = rf_derivative(b);
  RationalFunction c1 = rf_derivative(c), d1 = rf_derivative(d);
  const RationalFunction &al = R.alpha, &be = R.beta, &ga = R.gamma;
  RationalFunction two = RationalFunction::constant(Cx(2));
  RiccatiEq out;
  out.infinity_chart = R.infinity_chart;
  out.alpha = (a * a * al + a * c * be + c * c * ga + (a1 * c - a * c1)) / det;
  out.beta = (two * a * b * al + (a * d + b * c) * be + two * c * d * ga +
              (a1 * d - a * d1 + b1 * c - b * c1)) /
             det;
  out.gamma = (b * b * al + b * d * be + d * d * ga + (b1 * d - b * d1)) / det;
  return out;
}

OperNormalizeResult oper_normal_form(const RiccatiEq& R, const MoebiusGauge& section) {
  RiccatiEq R1 = gauge_apply(R, section);
  if (R1.alpha.is_zero())
    throw SectionInvariant("the designated section is a leaf of the foliation");
  // step 1: y = a y~ with a = 1/alpha normalizes the quadratic coefficient
  RationalFunction one = RationalFunction::constant(Cx(1));
  RationalFunction a = one / R1.alpha;
  RationalFunction beta2 = R1.beta + rf_derivative(a) / a;
  RationalFunction gamma2 = R1.gamma * R1.alpha;
  // step 2: y~ = w - beta2/2 kills the linear coefficient
  RationalFunction b = -beta2 / RationalFunction::constant(Cx(2));
  RationalFunction half_q = b * b + b * beta2 + gamma2 + rf_derivative(b);
  OperNormalizeResult res;
  res.form.q = RationalFunction::constant(Cx(2)) * half_q;
  res.gauge = compose(section, compose(MoebiusGauge::scaling(a), MoebiusGauge::translation(b)));
  return res;
}

ElemResult elem_transform(const RiccatiEq& R, const ElemCenter& center) {
  RationalFunction u = RationalFunction::x() - RationalFunction::constant(center.x0);
  ElemResult out;
  if (center.y_infinite) {
    // center on the section: y = y~ / (x - x0)
    out.eq = gauge_apply(R, MoebiusGauge::scaling(RationalFunction::constant(Cx(1)) / u));
    out.delta = -1;
  } else {
    // center off the section: y = (x - x0) y~ + y0
    MoebiusGauge G = MoebiusGauge::scaling(u);
    G.b = RationalFunction::constant(center.y0);
    out.eq = gauge_apply(R, G);
    out.delta = +1;
  }
  return out;
}

namespace {

// chart-local coordinate of p for an equation flagged with R-infinity-chart
Cx local_center(P1Point p, bool infinity_chart) {
  if (p.infinite != infinity_chart)
    throw BadInput("point chart does not match the equation chart");
  return p.infinite ? Cx(0) : p.value;
}

}  // namespace

PoleMinResult minimize_pole_order(const RationalFunction& q, P1Point p) {
  RationalFunction local_q = p.infinite ? infinity_chart_quadratic(q) : q;
  Cx u0 = p.infinite ? Cx(0) : p.value;
  int n = rf_pole_order(local_q, P1Point::at(u0));
  if (n == 0) throw NotAPole("q has no pole at the requested point");
  PoleMinResult res;
  res.R.alpha = RationalFunction::constant(Cx(1));
  res.R.beta = RationalFunction::zero();
  res.R.gamma = local_q / RationalFunction::constant(Cx(2));
  res.R.infinity_chart = p.infinite;
  int k = n / 2;
  for (int i = 0; i < k; ++i) {
    ElemCenter c{u0, true, Cx(0)};
    ElemResult step = elem_transform(res.R, c);
    res.R = std::move(step.eq);
    res.gauge_log.push_back({c, step.delta});
  }
  res.m = (n + 1) / 2;
  return res;
}

TransversalityResult restore_transversality(const RiccatiEq& R, P1Point p) {
  Cx u0 = local_center(p, R.infinity_chart);
  RationalFunction q = oper_normal_form(R, MoebiusGauge::identity()).form.q;
  int n = rf_pole_order(q, P1Point::at(u0));
  if (n == 0) throw AlreadyTransverse("no pole at the requested point");
  TransversalityResult res;
  res.l = (n + 1) / 2;  // (n+1)/2 for odd n, n/2 for even n
  res.R.alpha = RationalFunction::constant(Cx(1));
  res.R.beta = RationalFunction::zero();
  res.R.gamma = q / RationalFunction::constant(Cx(2));
  res.R.infinity_chart = R.infinity_chart;
  for (int i = 0; i < res.l; ++i)
    res.R = elem_transform(res.R, ElemCenter{u0, true, Cx(0)}).eq;
  return res;
}

int self_intersection(int g, int D_degree) { return 2 - 2 * g - D_degree; }

int riccati_pole_order(const RiccatiEq& R, P1Point p) {
  Cx u0 = local_center(p, R.infinity_chart);
  P1Point q = P1Point::at(u0);
  int m = 0;
  for (const RationalFunction* f : {&R.alpha, &R.beta, &R.gamma})
    if (!f->is_zero()) m = std::max(m, rf_pole_order(*f, q));
  return m;
}

}  // namespace pslab
