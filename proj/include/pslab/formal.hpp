#pragma once

// Formal classification of 2x2 systems at a singular point: order-by-order
// gauge reduction to diagonal / resonant-log / ramified normal forms,
// extraction of the basic formal data lambda+-, irregularity index,
// genericity check, and the formal monodromy matrix.

#include <Eigen/Dense>

#include "pslab/linsys.hpp"

namespace pslab {

enum class FormalKind {
  RegularDiagonal,
  RegularResonant,
  IrregularUnramified,
  IrregularRamified,
};

struct FormalClass {
  FormalKind kind = FormalKind::RegularDiagonal;
  int m = 1;  // minimal pole order (in x)
  int k = 0;  // resonance exponent, RegularResonant only
};

struct FormalData {
  FormalClass cls;
  // principal parts of the diagonal normal form, orders <= -1; the variable
  // is x for regular/unramified classes and z (x = z^2) for ramified ones
  LaurentSeries lambda_plus, lambda_minus;
  Cx residue_plus = Cx(0), residue_minus = Cx(0);
  Cx resonant_coeff = Cx(0);  // retained (2,1) obstruction, resonant case
  int nu_times_2 = 0;         // irregularity index nu, doubled to stay integral
  bool ramified_z_variable = false;
};

struct RiccatiFormalData {
  FormalClass cls;
  LaurentSeries lambda;  // (lambda^- - lambda^+)/2, defined up to sign
  Cx residue = Cx(0);    // its u^{-1} coefficient, up to sign
  int nu_times_2 = 0;
};

struct FormalNFResult {
  FormalData data;
  LaurentMatrix G;  // accumulated formal gauge (in z for the ramified class)
};

enum class RamifiedConvention { None, Swap, SwapNegated };

FormalClass classify_singularity(const LaurentMatrix& S);
FormalNFResult formal_normal_form(const LaurentMatrix& S, int N);
RiccatiFormalData riccati_formal_data(const RiccatiEq& R, P1Point p, int N);
double irregularity_index(int n);
bool check_genericity(const LaurentMatrix& S);
Eigen::Matrix2cd formal_monodromy(const FormalData& F,
                                  RamifiedConvention conv = RamifiedConvention::None);

// expansion of a rational system at a point (infinity handled through the
// 1-form chart change), truncated at order N
LaurentMatrix expand_system(const LinearSystem& S, P1Point p, int N);

// distance between two formal data records modulo the declared swap symmetry
double formal_data_distance(const FormalData& A, const FormalData& B);

constexpr int kFormalDefaultPad = 12;  // default truncation N = m + 12

}  // namespace pslab
