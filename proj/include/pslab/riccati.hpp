#pragma once

// Singular Riccati equations dy + (y^2 alpha + y beta + gamma) dx = 0 on a
// trivialized P^1-bundle chart, the Moebius gauge action, elementary
// transformations, the oper normal form dy + (y^2 + q/2) dx = 0 with section
// {y = infinity}, pole-order minimization and transversality restoration.

#include <vector>

#include "pslab/projective.hpp"

namespace pslab {

struct RiccatiEq {
  RationalFunction alpha, beta, gamma;
  bool infinity_chart = false;  // coefficients live in the t = 1/x chart
};

// y = (a y~ + b) / (c y~ + d), rational coefficients, det not identically 0
struct MoebiusGauge {
  RationalFunction a, b, c, d;

  static MoebiusGauge identity();
  static MoebiusGauge scaling(RationalFunction s);      // y = s y~
  static MoebiusGauge translation(RationalFunction t);  // y = y~ + t
  RationalFunction det() const;
};

// compose so that gauge_apply(R, compose(G, H)) == gauge_apply(gauge_apply(R, G), H)
MoebiusGauge compose(const MoebiusGauge& G, const MoebiusGauge& H);

struct OperChartForm {
  RationalFunction q;  // dy + (y^2 + q/2) dx = 0, section {y = infinity}
};

struct ElemCenter {
  Cx x0;
  bool y_infinite = false;  // center on the section {y = infinity}
  Cx y0 = Cx(0);
};

struct ElemRecord {
  ElemCenter center;
  int delta = 0;  // change of the section self-intersection
};

struct ElemResult {
  RiccatiEq eq;
  int delta = 0;
};

struct PoleMinResult {
  RiccatiEq R;
  int m = 0;
  std::vector<ElemRecord> gauge_log;
};

struct TransversalityResult {
  RiccatiEq R;
  int l = 0;
};

RiccatiEq gauge_apply(const RiccatiEq& R, const MoebiusGauge& G);

struct OperNormalizeResult {
  OperChartForm form;
  MoebiusGauge gauge;  // total gauge: y = gauge(y~) puts R into the form
};

// section given as the image of {y~ = infinity} under the gauge `section`
OperNormalizeResult oper_normal_form(const RiccatiEq& R, const MoebiusGauge& section);

ElemResult elem_transform(const RiccatiEq& R, const ElemCenter& center);

PoleMinResult minimize_pole_order(const RationalFunction& q, P1Point p);

TransversalityResult restore_transversality(const RiccatiEq& R, P1Point p);

int self_intersection(int g, int D_degree);

// pole order of the equation at p: max over the three coefficient 1-forms,
// computed in the chart R lives in
int riccati_pole_order(const RiccatiEq& R, P1Point p);

// needs numerical monodromy; defined alongside the monodromy code
bool is_apparent(const ProjectiveStructureP1& P, P1Point p, double tol);

}  // namespace pslab
