#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dipolatt/dipole_tensor.hpp"

using namespace dipolatt;
using dipole_tensor::ScaledSeparation;

namespace {

// high-order series oracle for j_2
double j2_series(double x) {
  double term = x * x / 15.0;
  double sum = term;
  for (int k = 1; k <= 12; ++k) {
    term *= -0.5 * x * x / (k * (2.0 * 2 + 2 * k + 1));
    sum += term;
  }
  return sum;
}

ScaledSeparation random_sep(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = {u(rng), u(rng), u(rng)};
  } while (v.norm() < 0.1);
  return ScaledSeparation::from_cartesian(v * 4.0);
}

}  // namespace

TEST_CASE("radial functions") {
  CHECK(dipole_tensor::radial_functions(0, M_PI).first ==
        doctest::Approx(0.0).epsilon(1e-12));
  // n_2 -> -3/x^3 leading order
  for (double x : {1e-3, 1e-4}) {
    const double n2 = dipole_tensor::radial_functions(2, x).second;
    CHECK(n2 * x * x * x == doctest::Approx(-3.0).epsilon(2e-6));
  }
  CHECK(dipole_tensor::radial_functions(2, 0.1).first ==
        doctest::Approx(j2_series(0.1)).epsilon(1e-14));
  // series branch agrees with the closed form inside its domain
  for (double x : {0.15, 0.3, 0.49}) {
    const double closed =
        (3.0 / (x * x * x) - 1.0 / x) * std::sin(x) - 3.0 * std::cos(x) / (x * x);
    CHECK(dipole_tensor::radial_functions(2, x).first ==
          doctest::Approx(closed).epsilon(1e-9));
  }
  CHECK_THROWS_AS(dipole_tensor::radial_functions(2, 0.0), DomainError);
  CHECK_THROWS_AS(dipole_tensor::radial_functions(1, 1.0), DomainError);
}

TEST_CASE("near-field limits of the cartesian tensor") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Vector3d dir(u(rng), u(rng), u(rng));
    dir.normalize();
    for (double x : {1e-3, 1e-4}) {
      const auto t = dipole_tensor::tensor_cartesian(
          ScaledSeparation::from_cartesian(dir * x));
      // g -> identity
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.g);
      for (int i = 0; i < 3; ++i)
        CHECK(es.eigenvalues()(i) == doctest::Approx(1.0).epsilon(1e-5));
      // x^3 f -> (3/2)(3 rhat rhat - 1)
      const Eigen::Matrix3d expect =
          1.5 * (3.0 * dir * dir.transpose() - Eigen::Matrix3d::Identity());
      CHECK(((t.f * x * x * x) - expect).norm() < 2e-6 * expect.norm());
    }
  }
  CHECK_THROWS_AS(
      dipole_tensor::tensor_cartesian(ScaledSeparation::from_cartesian({0, 0, 0})),
      DomainError);
}

TEST_CASE("f_zz along z against an independent reimplementation") {
  // second route: f_zz = -n_0 - n_2 and g_zz = j_0 + j_2 when rhat = zhat
  const double x = M_PI;
  const auto t =
      dipole_tensor::tensor_cartesian(ScaledSeparation::from_cartesian({0, 0, x}));
  const auto [j0, n0] = dipole_tensor::radial_functions(0, x);
  const auto [j2, n2] = dipole_tensor::radial_functions(2, x);
  CHECK(t.f(2, 2) == doctest::Approx(-n0 - n2).epsilon(1e-12));
  CHECK(t.g(2, 2) == doctest::Approx(j0 + j2).epsilon(1e-12));
}

TEST_CASE("spherical components match the cartesian contraction") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sep = random_sep(rng);
    const auto t = dipole_tensor::tensor_cartesian(sep);
    for (int q = -1; q <= 1; ++q)
      for (int qp = -1; qp <= 1; ++qp) {
        const auto [fc, gc] = t.spherical(q, qp);
        const auto [fs, gs] = dipole_tensor::tensor_spherical(q, qp, sep);
        CHECK(std::abs(fc - fs) < 1e-10 * (1.0 + std::abs(fc)));
        CHECK(std::abs(gc - gs) < 1e-10 * (1.0 + std::abs(gc)));
      }
  }
}

TEST_CASE("cartesian tensor rebuilt from spherical components") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sep = random_sep(rng);
    const auto t = dipole_tensor::tensor_cartesian(sep);
    Eigen::Matrix3cd f = Eigen::Matrix3cd::Zero(), g = Eigen::Matrix3cd::Zero();
    for (int q = -1; q <= 1; ++q)
      for (int qp = -1; qp <= 1; ++qp) {
        const auto [fs, gs] = dipole_tensor::tensor_spherical(q, qp, sep);
        const auto eq = dipole_tensor::spherical_basis_vector(q);
        const auto eqp = dipole_tensor::spherical_basis_vector(qp);
        f += fs * eq * eqp.adjoint();
        g += gs * eq * eqp.adjoint();
      }
    CHECK((f.real() - t.f).norm() < 1e-10 * (1.0 + t.f.norm()));
    CHECK(f.imag().norm() < 1e-10);
    CHECK((g.real() - t.g).norm() < 1e-10 * (1.0 + t.g.norm()));
  }
}

TEST_CASE("hermiticity and retardation consistency") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sep = random_sep(rng);
    double t2_direct = 0.0, t2_parts = 0.0;
    for (int q = -1; q <= 1; ++q)
      for (int qp = -1; qp <= 1; ++qp) {
        const auto [f, g] = dipole_tensor::tensor_spherical(q, qp, sep);
        const auto [fT, gT] = dipole_tensor::tensor_spherical(qp, q, sep);
        CHECK(std::abs(f - std::conj(fT)) < 1e-12 * (1.0 + std::abs(f)));
        CHECK(std::abs(g - std::conj(gT)) < 1e-12 * (1.0 + std::abs(g)));
        t2_direct += std::norm(f + std::complex<double>(0, 1) * g);
        t2_parts += std::norm(f) + std::norm(g);
      }
    CHECK(t2_direct == doctest::Approx(t2_parts).epsilon(1e-11));
  }
}

TEST_CASE("spherical values in special configurations") {
  // g_qq'(x -> 0) -> delta_qq'
  const auto sep_small = ScaledSeparation::from_cartesian({1e-5, 2e-5, 0.5e-5});
  for (int q = -1; q <= 1; ++q)
    for (int qp = -1; qp <= 1; ++qp) {
      const auto [f, g] = dipole_tensor::tensor_spherical(q, qp, sep_small);
      (void)f;
      CHECK(std::abs(g - (q == qp ? 1.0 : 0.0)) < 1e-8);
    }

  // f_00 with rhat = zhat equals the cartesian f_zz
  const auto sep_z = ScaledSeparation::from_cartesian({0, 0, 2.0});
  const auto [f00, g00] = dipole_tensor::tensor_spherical(0, 0, sep_z);
  const auto t = dipole_tensor::tensor_cartesian(sep_z);
  CHECK(f00.real() == doctest::Approx(t.f(2, 2)).epsilon(1e-12));
  CHECK(std::abs(f00.imag()) < 1e-14);
  CHECK(g00.real() == doctest::Approx(t.g(2, 2)).epsilon(1e-12));

  // in-plane separation: the n_2 part of f_00 carries Y_2^0(pi/2) = -(1/2) sqrt(5/4pi)
  const double x = 1.7;
  const auto sep_xy = ScaledSeparation::from_cartesian({x, 0, 0});
  const auto [fp, gp] = dipole_tensor::tensor_spherical(0, 0, sep_xy, false);
  (void)gp;
  const double n2 = dipole_tensor::radial_functions(2, x).second;
  CHECK(fp.real() == doctest::Approx(0.5 * n2).epsilon(1e-12));

  CHECK_THROWS_AS(dipole_tensor::tensor_spherical(2, 0, sep_z), DomainError);
}

TEST_CASE("near-field f_00 matches the quasi-static P_2 form") {
  for (double theta : {0.2, 1.0, 2.3}) {
    const auto sep = ScaledSeparation::from_spherical(1e-4, theta, 0.4);
    const auto [f00, g00] = dipole_tensor::tensor_spherical(0, 0, sep, false);
    (void)g00;
    const double p2 = 0.5 * (3.0 * std::cos(theta) * std::cos(theta) - 1.0);
    CHECK(f00.real() * 1e-12 == doctest::Approx(3.0 * p2).epsilon(1e-6));
  }
}
