#include "dipolatt/dipole_tensor.hpp"

#include <cmath>

#include "dipolatt/angular.hpp"

namespace dipolatt::dipole_tensor {

ScaledSeparation ScaledSeparation::from_cartesian(const Eigen::Vector3d& v) {
  return ScaledSeparation{v};
}

ScaledSeparation ScaledSeparation::from_spherical(double r, double theta, double phi) {
  return ScaledSeparation{
      {r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
       r * std::cos(theta)}};
}

Eigen::Vector3d ScaledSeparation::r_hat() const {
  const double n = x.norm();
  if (n <= 0.0) throw DomainError("ScaledSeparation: zero separation has no direction");
  return x / n;
}

double ScaledSeparation::theta() const { return std::acos(r_hat().z()); }

double ScaledSeparation::phi() const {
  const Eigen::Vector3d u = r_hat();
  if (u.x() == 0.0 && u.y() == 0.0) return 0.0;
  return std::atan2(u.y(), u.x());
}

std::pair<double, double> radial_functions(int m, double x) {
  if (x <= 0.0) throw DomainError("radial_functions: x must be > 0");
  if (m == 0) return {std::sin(x) / x, -std::cos(x) / x};
  if (m != 2) throw DomainError("radial_functions: order must be 0 or 2");
  const double n2 = (1.0 / x - 3.0 / (x * x * x)) * std::cos(x) -
                    3.0 * std::sin(x) / (x * x);
  double j2;
  if (x < 0.5) {
    // series j_2 = x^2/15 (1 - u/7 + u^2/126 - u^3/4158 + ...), u = x^2/2
    const double u = 0.5 * x * x;
    j2 = x * x / 15.0 *
         (1.0 - u / 7.0 + u * u / 126.0 - u * u * u / 4158.0 +
          u * u * u * u / 216216.0 - u * u * u * u * u / 16216200.0);
  } else {
    j2 = (3.0 / (x * x * x) - 1.0 / x) * std::sin(x) - 3.0 * std::cos(x) / (x * x);
  }
  return {j2, n2};
}

InteractionTensor tensor_cartesian(const ScaledSeparation& sep) {
  const double x = sep.r();
  if (x <= 0.0)
    throw DomainError("tensor_cartesian: singular at zero separation");
  const Eigen::Vector3d u = sep.r_hat();
  const Eigen::Matrix3d rr = u * u.transpose();
  const Eigen::Matrix3d one = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d transverse = one - rr;       // 1 - rhat rhat
  const Eigen::Matrix3d longitudinal = one - 3.0 * rr;

  const double cx = std::cos(x), sx = std::sin(x);
  InteractionTensor t;
  t.f = 1.5 * (transverse * (cx / x) -
               longitudinal * (sx / (x * x) + cx / (x * x * x)));
  t.g = 1.5 * (transverse * (sx / x) +
               longitudinal * (cx / (x * x) - sx / (x * x * x)));
  return t;
}

Eigen::Vector3cd spherical_basis_vector(int q) {
  using C = std::complex<double>;
  const double s = 1.0 / std::sqrt(2.0);
  switch (q) {
    case 1:
      return Eigen::Vector3cd(C(-s, 0), C(0, -s), C(0, 0));
    case 0:
      return Eigen::Vector3cd(C(0, 0), C(0, 0), C(1, 0));
    case -1:
      return Eigen::Vector3cd(C(s, 0), C(0, -s), C(0, 0));
    default:
      throw DomainError("spherical_basis_vector: q must be -1, 0 or 1");
  }
}

std::pair<std::complex<double>, std::complex<double>> InteractionTensor::spherical(
    int q, int qp) const {
  const Eigen::Vector3cd eq = spherical_basis_vector(q);
  const Eigen::Vector3cd eqp = spherical_basis_vector(qp);
  const std::complex<double> fs = eq.adjoint() * f.cast<std::complex<double>>() * eqp;
  const std::complex<double> gs = eq.adjoint() * g.cast<std::complex<double>>() * eqp;
  return {fs, gs};
}

std::pair<std::complex<double>, std::complex<double>> tensor_spherical(
    int q, int qp, const ScaledSeparation& sep, bool include_radiation) {
  if (q < -1 || q > 1 || qp < -1 || qp > 1)
    throw DomainError("tensor_spherical: q must be -1, 0 or 1");
  const double x = sep.r();
  if (x <= 0.0) throw DomainError("tensor_spherical: singular at zero separation");

  const auto [j0, n0] = radial_functions(0, x);
  const auto [j2, n2] = radial_functions(2, x);

  using angular::AngMom;
  const double cg =
      angular::clebsch_gordan(AngMom(2, -2 * q), AngMom(2, 2 * qp), AngMom(4, 2 * (qp - q)));
  const std::complex<double> y2 =
      angular::spherical_harmonic(2, qp - q, sep.theta(), sep.phi());
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;  // (-1)^q
  const std::complex<double> coupling =
      sign * std::sqrt(6.0 * M_PI / 5.0) * y2 * cg;

  std::complex<double> fs = -n2 * coupling;
  std::complex<double> gs = j2 * coupling;
  if (include_radiation && q == qp) {
    fs += -n0;
    gs += j0;
  }
  return {fs, gs};
}

}  // namespace dipolatt::dipole_tensor
