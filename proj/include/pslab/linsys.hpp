#pragma once

// Rank-2 meromorphic linear systems dY + Omega Y dx = 0 on P^1: companion
// systems, the gauge action, lifts of Riccati equations with prescribed trace,
// projectivization, twists, and the Fuchs relation bookkeeping.

#include "pslab/riccati.hpp"

namespace pslab {

struct RfMatrix2 {
  RationalFunction e[2][2];

  static RfMatrix2 identity();
  RationalFunction det() const;
  RationalFunction trace() const;
};

struct LinearSystem {
  RfMatrix2 omega;  // finite-chart connection matrix
};

struct TraceData {
  RationalFunction delta;  // trace 1-form coefficient
  std::vector<std::pair<P1Point, Cx>> residues;
  int degE = 0;
};

struct LiftParity {
  bool trace_free_ok = false;
  bool odd_trace_needed = false;
};

LinearSystem companion_system(const RationalFunction& q);
LinearSystem gauge_apply_linear(const LinearSystem& S, const RfMatrix2& G);
LinearSystem lift_riccati(const RiccatiEq& R, const RationalFunction& delta);
RiccatiEq projectivize(const LinearSystem& S);
LinearSystem twist(const LinearSystem& S, const RationalFunction& omega);

// |sum of residues of tr(Omega) over all poles (including infinity) + degE|;
// a chart-rational trace always has residue sum zero, so this vanishes only
// for degE = 0 - bundle contributions enter through check_fuchs_data
double check_fuchs(const LinearSystem& S, int degE);

// Fuchs residual from caller-asserted residues (the trace connection lives on
// a possibly nontrivial line bundle, so its residue list is bookkeeping the
// chart form alone cannot reproduce)
double check_fuchs_data(const TraceData& T);

LiftParity lift_parity_check(int D_degree, int g);

// infinity-chart matrix of the plain rank-2 system (trivial bundle):
// Omega~(t) = -Omega(1/t)/t^2
RfMatrix2 infinity_chart_system(const LinearSystem& S);

}  // namespace pslab
