#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "dipolatt/errors.hpp"

namespace dipolatt::dipole_tensor {

// Dimensionless separation x = k_L r.  All tensor evaluation runs on this
// scaled coordinate; the library never stores absolute lengths.
struct ScaledSeparation {
  Eigen::Vector3d x;

  static ScaledSeparation from_cartesian(const Eigen::Vector3d& v);
  static ScaledSeparation from_spherical(double r, double theta, double phi);

  double r() const { return x.norm(); }
  Eigen::Vector3d r_hat() const;
  double theta() const;
  double phi() const;
};

// T = f + i g evaluated at one scaled separation.  f carries the coherent
// level shift, g the cooperative-emission interference.  Both 3x3 real
// symmetric in the Cartesian basis.
struct InteractionTensor {
  Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();

  // e_q^dagger . (f, g) . e_q' in the spherical basis, q, q' in {-1,0,1}.
  std::pair<std::complex<double>, std::complex<double>> spherical(int q, int qp) const;
};

// j_m and n_m (spherical Bessel / Neumann), m in {0, 2}, x > 0.
std::pair<double, double> radial_functions(int m, double x);

// Retarded tensor in Cartesian form.  Limits: g -> identity as x -> 0 and
// x^3 f -> (3/2)(3 rhat rhat - 1).  Throws DomainError at r = 0.
InteractionTensor tensor_cartesian(const ScaledSeparation& sep);

// Spherical components directly from the Bessel/Neumann + Y_2 form.  The
// delta_{qq'} radiation terms (n_0, j_0) are dropped when include_radiation
// is false; callers evaluating the near-field contact interaction use that.
std::pair<std::complex<double>, std::complex<double>> tensor_spherical(
    int q, int qp, const ScaledSeparation& sep, bool include_radiation = true);

// Spherical basis vector e_q as a complex column.
Eigen::Vector3cd spherical_basis_vector(int q);

}  // namespace dipolatt::dipole_tensor
