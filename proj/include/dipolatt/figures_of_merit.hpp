#pragma once

#include <functional>
#include <variant>

#include "dipolatt/errors.hpp"

namespace dipolatt::figures_of_merit {

// Overlapping axially symmetric well; eta_perp = k_L x0, eta_par = k_L z0
// are single-particle Lamb-Dicke parameters.
struct CommonEllipsoid {
  double eta_perp;
  double eta_par;
};

// Two spherical wells separated along z; eta = k_L x0, zbar = dz / x0.
struct SeparatedSpheres {
  double eta;
  double zbar;
};

struct CommonSphere {
  double eta;
};

using TrapGeometry = std::variant<CommonEllipsoid, SeparatedSpheres, CommonSphere>;

enum class Method { analytic, quadrature };

// Ratio of the coherent dipole-dipole level shift to the total cooperative
// scattering rate.  Sign carries attractive (negative) vs repulsive.
struct FomValue {
  double value = 0.0;
  Method method = Method::analytic;
  bool includes_retardation = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  long max_evals = 2'000'000;
  bool include_retardation = false;
};

// F = -<f_qq> / (2 (1 + <g_qq>)) averaged over the relative-coordinate
// density of the trap ground state, by numerical quadrature.
FomValue fom_generic(const TrapGeometry& geometry, int q,
                     const QuadratureOptions& opts = {});

// Near-field closed form for the common ellipsoidal well (q = 0).
FomValue fom_ellipsoid_nearfield(double eta_perp, double eta_par);

// Near-field closed form for separated spherical wells (q = 0):
// F = -(3/4) [erf(z/2)/z^3 - e^{-z^2/4}(1/3 + 2/z^2)/(2 sqrt(pi))] / eta^3.
FomValue fom_separated_spheres(double zbar, double eta);

// P(r < a) for the separated-well relative-coordinate Gaussian,
// abar = a / x0.
double close_approach_probability(double abar, double zbar);

struct SqrtSwapFom {
  FomValue fom;             // -(1/4) <f_00> on the doubly occupied stretched state
  double z_variant_gain;    // rate gain of the z-oscillation encoding
};

// Figure of merit of the exchange gate on circular vibrational logical
// states in a common spherical well, evaluated through the two-particle
// oscillator machinery.
SqrtSwapFom fom_sqrt_swap(double eta, bool near_field = true);

struct OptimizeResult {
  double argmax = 0.0;
  double value = 0.0;
  bool interior = false;  // false: maximum reported on a bracket boundary
};

// Deterministic 1D maximisation (golden section + parabolic refinement).
OptimizeResult optimize_geometry(const std::function<double(double)>& objective,
                                 double lo, double hi, double tol = 1e-10);

}  // namespace dipolatt::figures_of_merit
