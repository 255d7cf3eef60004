#pragma once

// Desk-scale verification that the residue-fixed monodromy map is a local
// immersion: dimension bookkeeping for residue-fixed/residue-free families,
// a concrete parametrization of P^1 families with prescribed pole orders and
// residues, conjugation-invariant monodromy coordinates (traces + Stokes
// entries), and the finite-difference Jacobian rank experiment.

#include <Eigen/Dense>

#include "pslab/monodromy.hpp"

namespace pslab {

enum class CountMode { ResiduesFixed, ResiduesFree };

// 6g-6+sum(2 nu_i+3) - #{nu_i in N} (fixed) or 6g-6+sum(2 nu_i+3) (free);
// hypothesis |M| >= 3 (g=0) resp. >= 1 (g=1) with the marked-point count
// 1 per regular pole and n-2 per irregular pole
int moduli_dimension(int g, const std::vector<int>& orders, CountMode mode);

struct FamilyConfig {
  struct Pole {
    P1Point position;
    int order = 2;
    Cx residue{0, 0};  // signed lambda_{-1}; must be 0 at ramified poles
  };
  std::vector<Pole> poles;
  // pinned representative for d < 3 rigid configs (residual Moebius freedom
  // is quotiented by fixing the structure outright, e.g. Airy q = -2x)
  RationalFunction pinned_q;
};

// Frozen parametrization of the residue-fixed family: partial-fraction
// coefficients of q are split into pivot columns (solved from the residue and
// infinity-decay constraints) and free columns (parameters), the pivot choice
// made once at build time; poles away from {0, 1, inf} move as parameters.
struct Family {
  FamilyConfig cfg;
  int dim = 0;
  std::vector<int> free_cols;     // parameter slots among the coefficients
  std::vector<int> pivot_cols;
  std::vector<size_t> movable;    // cfg pole indices whose position is a param
  std::vector<size_t> designated; // cfg pole indices needing a Newton target
};

Family build_family(const FamilyConfig& cfg);

// params = [free coefficients..., movable positions...], length Family::dim
ProjectiveStructureP1 family_structure(const Family& fam,
                                       const std::vector<Cx>& params);

struct MonodromyCoordinates {
  std::vector<Cx> values;  // tr(M_i), tr(M_i M_j) i<j, Stokes off-diagonals
};

// base_hint rotates the automatically chosen base point (for base-point
// independence checks); coordinates are conjugation invariant, so the
// default is fine for everything else
MonodromyCoordinates monodromy_coordinates(const ProjectiveStructureP1& P,
                                           const FamilyConfig& cfg, double tol,
                                           double base_angle = -1.77);

struct JacobianReport {
  int rank = 0;
  std::vector<double> singular_values;
};

// central differences with real step h on the complex parameters; rank counts
// singular values above tol * sigma_max
JacobianReport jacobian_rank(const FamilyConfig& cfg,
                             const std::vector<Cx>& params0, double h,
                             double tol);

enum class ProbeVerdict { Distinct, Suspect };

struct ProbeReport {
  ProbeVerdict verdict = ProbeVerdict::Suspect;
  double distance = 0.0;
};

ProbeReport local_injectivity_probe(const FamilyConfig& cfg,
                                    const std::vector<Cx>& params0,
                                    const std::vector<Cx>& params1, double tol);

}  // namespace pslab
