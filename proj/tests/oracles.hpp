// Test-side oracles, independent of the library's oscillator machinery:
// explicit Laguerre-form wavefunctions, Gauss-Hermite grids, and direct
// quadrature of the two-particle matrix elements in relative/CM coordinates.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dipolatt/angular.hpp"
#include "dipolatt/oscillator_basis.hpp"

namespace oracles {

using dipolatt::oscillator_basis::OscState;
using Complex = std::complex<double>;

// R_nl(r) = N r^l L_n^{l+1/2}(r^2) e^{-r^2/2}, positive at the origin
inline double radial_wavefunction(int n, int l, double r) {
  const double alpha = l + 0.5;
  double lag = 0.0;
  for (int k = 0; k <= n; ++k) {
    double c = std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(alpha + k + 1.0) -
                        std::lgamma(double(n - k + 1)) - std::lgamma(double(k + 1)));
    if (k % 2 == 1) c = -c;
    lag += c * std::pow(r * r, k);
  }
  const double norm =
      std::sqrt(2.0 * std::exp(std::lgamma(double(n + 1)) - std::lgamma(n + l + 1.5)));
  return norm * std::pow(r, l) * lag * std::exp(-0.5 * r * r);
}

inline Complex wavefunction(const OscState& s, const Eigen::Vector3d& v) {
  const double r = v.norm();
  if (r == 0.0)
    return s.l == 0
               ? Complex(radial_wavefunction(s.n, 0, 0.0) / std::sqrt(4.0 * M_PI))
               : Complex(0.0, 0.0);
  const double theta = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
  const double phi = std::atan2(v.y(), v.x());
  return radial_wavefunction(s.n, s.l, r) *
         dipolatt::angular::spherical_harmonic(s.l, s.m, theta, phi);
}

struct GaussHermite {
  std::vector<double> x, w;  // weight e^{-x^2}
  explicit GaussHermite(int n) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z;
      if (i == 0)
        z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
      else if (i == 1)
        z = x[n - 1] - 1.14 * std::pow(double(n), 0.426) / x[n - 1];
      else if (i == 2)
        z = 1.86 * x[n - 1 - 1] - 0.86 * x[n - 1];
      else
        z = 2.0 * x[n - i] - x[n - i + 1];
      double pp = 0.0;
      for (int it = 0; it < 200; ++it) {
        double p1 = std::pow(M_PI, -0.25), p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
               std::sqrt(double(j) / (j + 1.0)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const double dz = p1 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[n - 1 - i] = z;
      x[i] = -z;
      w[n - 1 - i] = 2.0 / (pp * pp);
      w[i] = w[n - 1 - i];
    }
  }
};

struct GaussLegendre {
  std::vector<double> x, w;  // on [-1, 1]
  explicit GaussLegendre(int n) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 200; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

// integral over [a, b] with an n-point Gauss-Legendre rule
inline double gl_segment(const std::function<double(double)>& f, double a, double b,
                         const GaussLegendre& gl) {
  double sum = 0.0;
  for (std::size_t i = 0; i < gl.x.size(); ++i)
    sum += gl.w[i] * f(0.5 * (b - a) * gl.x[i] + 0.5 * (a + b));
  return 0.5 * (b - a) * sum;
}

// radial integral over [0, cut] tolerant of integrable power behaviour at 0:
// r = u^2 on the first segment, plain panels beyond
inline double radial_integral(const std::function<double(double)>& f, double cut,
                              int order) {
  const GaussLegendre gl(order);
  const double split = 0.5;
  double total = gl_segment(
      [&](double u) { return 2.0 * u * f(u * u); }, 0.0, std::sqrt(split), gl);
  const int panels = 4;
  for (int p = 0; p < panels; ++p) {
    const double a = split + (cut - split) * p / panels;
    const double b = split + (cut - split) * (p + 1) / panels;
    total += gl_segment(f, a, b, gl);
  }
  return total;
}

// <n l, N L; lam mu | n1 l1, n2 l2; lam mu> by full 6D Gauss-Hermite with
// explicitly built wavefunctions; exact for polynomial integrands.
inline double bracket_6d(int n, int l, int N, int L, int n1, int l1, int n2,
                         int l2, int lam, int mu, int nodes = 7) {
  using dipolatt::angular::AngMom;
  using dipolatt::angular::clebsch_gordan;
  const GaussHermite gh(nodes);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  Complex total(0.0, 0.0);
  for (int m = -l; m <= l; ++m) {
    const int M = mu - m;
    if (std::abs(M) > L) continue;
    const double c_relcm = clebsch_gordan(AngMom(2 * l, 2 * m), AngMom(2 * L, 2 * M),
                                          AngMom(2 * lam, 2 * mu));
    if (c_relcm == 0.0) continue;
    for (int m1 = -l1; m1 <= l1; ++m1) {
      const int m2 = mu - m1;
      if (std::abs(m2) > l2) continue;
      const double c_12 = clebsch_gordan(AngMom(2 * l1, 2 * m1),
                                         AngMom(2 * l2, 2 * m2),
                                         AngMom(2 * lam, 2 * mu));
      if (c_12 == 0.0) continue;

      Complex integral(0.0, 0.0);
      for (int a = 0; a < nodes; ++a)
        for (int b = 0; b < nodes; ++b)
          for (int c = 0; c < nodes; ++c) {
            const Eigen::Vector3d rr(gh.x[a], gh.x[b], gh.x[c]);
            const double wr = gh.w[a] * gh.w[b] * gh.w[c];
            // strip e^{-(r^2+R^2)} = product of all four Gaussian factors
            const Complex rel = std::conj(wavefunction(OscState(n, l, m), rr)) *
                                std::exp(0.5 * rr.squaredNorm());
            for (int d = 0; d < nodes; ++d)
              for (int e = 0; e < nodes; ++e)
                for (int f = 0; f < nodes; ++f) {
                  const Eigen::Vector3d RR(gh.x[d], gh.x[e], gh.x[f]);
                  const Eigen::Vector3d p1 = (RR + rr) * inv_sqrt2;
                  const Eigen::Vector3d p2 = (RR - rr) * inv_sqrt2;
                  const Complex val =
                      rel * std::conj(wavefunction(OscState(N, L, M), RR)) *
                      wavefunction(OscState(n1, l1, m1), p1) *
                      wavefunction(OscState(n2, l2, m2), p2) *
                      std::exp(0.5 * RR.squaredNorm() +
                               0.5 * (p1.squaredNorm() + p2.squaredNorm()));
                  integral += wr * gh.w[d] * gh.w[e] * gh.w[f] * val;
                }
          }
      total += c_relcm * c_12 * integral;
    }
  }
  return total.real();
}

// <b1 b2 | V(rbar) Y_K^{mr} | k1 k2> by direct quadrature: exact
// Gauss-Hermite over the CM, exact angular product grid, power-aware radial
// rule with node doubling.
inline double tensor_element_quadrature(const OscState& b1, const OscState& b2,
                                        const OscState& k1, const OscState& k2,
                                        int K, int mr,
                                        const std::function<double(double)>& V,
                                        int gh_nodes = 7, int n_theta = 16,
                                        int n_phi = 16, int radial_order = 48) {
  const GaussHermite gh(gh_nodes);
  const GaussLegendre gl(n_theta);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  // Int d^3R of the four-wavefunction product at fixed relative position;
  // includes the natural e^{-r^2} falloff of the relative coordinate
  auto cm_reduced = [&](const Eigen::Vector3d& rr) {
    Complex sum(0.0, 0.0);
    for (int d = 0; d < gh_nodes; ++d)
      for (int e = 0; e < gh_nodes; ++e)
        for (int f = 0; f < gh_nodes; ++f) {
          const Eigen::Vector3d RR(gh.x[d], gh.x[e], gh.x[f]);
          const Eigen::Vector3d p1 = (RR + rr) * inv_sqrt2;
          const Eigen::Vector3d p2 = (RR - rr) * inv_sqrt2;
          const Complex val = std::conj(wavefunction(b1, p1)) *
                              std::conj(wavefunction(b2, p2)) *
                              wavefunction(k1, p1) * wavefunction(k2, p2);
          sum += gh.w[d] * gh.w[e] * gh.w[f] * val *
                 std::exp(RR.squaredNorm());
        }
    return sum;
  };

  auto angular_reduced = [&](double r) {
    Complex sum(0.0, 0.0);
    for (int i = 0; i < n_theta; ++i) {
      const double ct = gl.x[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double theta = std::acos(std::clamp(ct, -1.0, 1.0));
      for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * M_PI * j / n_phi;
        const Eigen::Vector3d rr(r * st * std::cos(phi), r * st * std::sin(phi),
                                 r * ct);
        sum += gl.w[i] * (2.0 * M_PI / n_phi) * cm_reduced(rr) *
               dipolatt::angular::spherical_harmonic(K, mr, theta, phi);
      }
    }
    return sum;
  };

  auto h_re = [&](double r) { return (r * r * V(r) * angular_reduced(r)).real(); };
  auto h_im = [&](double r) { return (r * r * V(r) * angular_reduced(r)).imag(); };
  const double cut = 7.5;
  const double re = radial_integral(h_re, cut, radial_order);
  const double im = radial_integral(h_im, cut, radial_order);
  if (std::abs(im) > 1e-8 * (1.0 + std::abs(re)))
    throw std::runtime_error("oracle: unexpectedly complex matrix element");
  return re;
}

}  // namespace oracles
