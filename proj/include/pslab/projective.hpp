#pragma once

// Quadratic differentials on P^1, Schwarzian calculus, residues and indices
// at poles, and the divisor/dimension bookkeeping for meromorphic projective
// structures. Convention: phi = (q/2) dx⊗dx in the standard affine chart,
// with the infinity chart via q~(t) = q(1/t)/t^4.

#include <optional>
#include <vector>

#include "pslab/algebra.hpp"

namespace pslab {

struct Divisor {
  struct Entry {
    P1Point point;
    int mult;
  };
  std::vector<Entry> entries;

  int degree() const {
    int d = 0;
    for (const auto& e : entries) d += e.mult;
    return d;
  }
};

struct QuadraticDifferential {
  RationalFunction q;
};

struct ProjectiveStructureP1 {
  RationalFunction q;  // P = P0 + (q/2) dx^2
};

struct SingularityReport {
  P1Point point;
  int order = 0;
  std::optional<Cx> res2;   // present iff order <= 2
  std::optional<Cx> theta;  // principal branch of sqrt(1 - 2 res2); sign pair
};

RationalFunction schwarzian(const RationalFunction& f);
double schwarzian_cocycle_check(const RationalFunction& f, const RationalFunction& g);
QuadraticDifferential structure_difference(const RationalFunction& chart1,
                                           const RationalFunction& chart2);
Divisor polar_divisor(const QuadraticDifferential& phi);
SingularityReport residue_and_index(const ProjectiveStructureP1& P, P1Point p);
int quadratic_space_dimension(int g, const std::vector<int>& orders);
int marked_points_count(int n);

// roots of a polynomial (companion-matrix eigenvalues), clustered into
// (root, multiplicity) pairs
std::vector<std::pair<Cx, int>> poly_roots_clustered(const Poly& p,
                                                     double cluster_tol = 1e-2);

}  // namespace pslab
