#pragma once

#include <complex>

#include "dipolatt/errors.hpp"

namespace dipolatt::angular {

// Angular momentum stored as doubled integers so half-integer values stay exact.
struct AngMom {
  int twice_j = 0;
  int twice_m = 0;

  AngMom() = default;
  AngMom(int tj, int tm) : twice_j(tj), twice_m(tm) { validate(); }

  void validate() const {
    if (twice_j < 0) throw DomainError("AngMom: twice_j must be >= 0");
    if (std::abs(twice_m) > twice_j) throw DomainError("AngMom: |m| > j");
    if (((twice_j ^ twice_m) & 1) != 0)
      throw DomainError("AngMom: j and m must have equal parity");
  }

  double j() const { return 0.5 * twice_j; }
  double m() const { return 0.5 * twice_m; }
};

// Nuclear spin plus the ground/excited fine-structure J of an alkali D2 line.
struct HyperfineContext {
  int twice_I;
  int twice_J_ground = 1;   // S_1/2
  int twice_J_excited = 3;  // P_3/2

  bool valid_ground_F(int twice_F) const {
    return twice_F >= std::abs(twice_I - twice_J_ground) &&
           twice_F <= twice_I + twice_J_ground &&
           ((twice_F ^ (twice_I + twice_J_ground)) & 1) == 0;
  }
  bool valid_excited_F(int twice_F) const {
    return twice_F >= std::abs(twice_I - twice_J_excited) &&
           twice_F <= twice_I + twice_J_excited &&
           ((twice_F ^ (twice_I + twice_J_excited)) & 1) == 0;
  }
};

// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention.  Selection-rule
// failures (M != m1+m2, triangle violation) give 0; malformed quantum
// numbers throw DomainError.  Exact integer-rational internals, accurate
// through j ~ 20.
double clebsch_gordan(const AngMom& j1, const AngMom& j2, const AngMom& J);

// {j1 j2 j3; j4 j5 j6}, arguments doubled.  Triangle-violating but physical
// inputs give 0; a triad with half-integer perimeter throws DomainError.
double wigner_6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6);

// Relative oscillator strength f_{F'F} of the hyperfine transition F -> F'
// within ctx's fine-structure line.  Normalised so that every excited
// sublevel carries total strength 1; a ground sublevel then sums to
// (2J'+1)/(2J+1) over F'.  Triangle-violating F' gives 0.
double oscillator_strength_factor(int twice_F_excited, int twice_F_ground,
                                  const HyperfineContext& ctx);

// Orthonormal Y_l^m with the Condon-Shortley phase; Y_0^0 = 1/sqrt(4 pi).
std::complex<double> spherical_harmonic(int l, int m, double theta, double phi);

}  // namespace dipolatt::angular
