#pragma once

// Numerical analytic continuation of rank-2 systems dY + Omega Y dx = 0 over
// P^1 minus the poles: transport along polylines, deterministic loop planning,
// global/local monodromy, the regular-singular eigenvalue check, and
// desk-scale Stokes matrices with an internal product-relation validation.
//
// Composition convention: transport along "gamma_1 then gamma_2" is
// M(gamma_2) * M(gamma_1) (matrices act on solution columns from the left).

#include <array>

#include <Eigen/Dense>

#include "pslab/formal.hpp"
#include "pslab/projective.hpp"

namespace pslab {

struct PathSpec {
  enum class Kind { Segment, Loop };
  Kind kind = Kind::Segment;
  std::vector<Cx> vertices;  // polyline; loops are closed (front == back)
};

struct LocalMonodromy {
  P1Point pole;
  std::array<Cx, 2> eigenvalues{Cx(0), Cx(0)};
};

struct MonodromyData {
  Cx base{0, 0};
  // finite poles ordered counterclockwise by spoke departure angle at the
  // base, the infinity generator (when present) listed last; applying the
  // generators in list order transports around the boundary of a disk, so
  // the left-to-right matrix product gen[d-1]*...*gen[0] is the identity
  std::vector<std::pair<P1Point, Eigen::Matrix2cd>> generators;
  double product_residual = 0.0;
  std::vector<LocalMonodromy> local;
};

// Sectorial connection data at one irregular point (finite chart).
struct StokesData {
  std::vector<Eigen::Matrix2cd> stokes;  // one per oscillation ray, 2*nu total
  Eigen::Matrix2cd C1;      // frame connection measured on the first ray
  Eigen::Matrix2cd loop;    // numeric transport once around the pole, ccw
  double matching_error = 0.0;  // worst frame scatter over the 8-point fits
  double radius = 0.0;          // matching radius rho*
};

Eigen::Matrix2cd continue_solution(const LinearSystem& S, const PathSpec& path,
                                   double tol);

// spoke + counterclockwise circle + spoke around poles[index], based at base;
// radius 0.4 and clearance 0.1 of the nearest-pole gap
PathSpec plan_loop(const std::vector<Cx>& poles, size_t index, Cx base);

// generators for every entry of the divisor (infinity via a large clockwise
// circle through the base) plus the g=0 product residual
MonodromyData global_monodromy(const LinearSystem& S, const Divisor& poles,
                               Cx base, double tol);

// transport around p along a small ccw circle (conjugacy-class data only)
Eigen::Matrix2cd local_monodromy(const LinearSystem& S, Cx p,
                                 const std::vector<Cx>& other_poles, double tol);

// Hausdorff distance between spectrum(M_local) and {exp(2 pi i (1 +- theta)/2)}
double local_eigenvalue_check(const ProjectiveStructureP1& P, P1Point p,
                              const Eigen::Matrix2cd& M_local, double tol);

// Stokes matrices of S at the finite irregular point p, matched against the
// optimally truncated formal solution G(w) exp(-int Lambda); F must have been
// computed from this very system (expand_system at p)
StokesData compute_stokes(const LinearSystem& S, Cx p, const FormalNFResult& F,
                          double tol);

// || C1 * M_formal(conv) * (S_1...S_k)^{-1} * C1^{-1} - M_loop || / ||M_loop||;
// the arbiter for the ramified formal-monodromy convention flag
double stokes_product_check(const StokesData& D, const FormalData& F,
                            RamifiedConvention conv);

// integral of f dx along the polyline (adaptive Simpson per segment)
Cx contour_integral(const RationalFunction& f, const PathSpec& path);

// finite pole positions of the system (clustered denominator roots)
std::vector<Cx> system_poles(const LinearSystem& S);

}  // namespace pslab
