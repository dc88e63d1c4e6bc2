#include "dipolatt/figures_of_merit.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <atomic>
#include <cmath>

#include "dipolatt/dipole_tensor.hpp"
#include "dipolatt/oscillator_basis.hpp"
#include "dipolatt/quadrature.hpp"

namespace dipolatt::figures_of_merit {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// angular weight of the n_2 P_2 part of the tensor component f_qq
double tensor_p2_weight(int q) {
  if (q == 0) return -1.0;
  if (q == 1 || q == -1) return 0.5;
  throw DomainError("figure of merit: q must be -1, 0 or 1");
}

// I(eps^2) = -2/3 - 2(1-e)/e + 2(1-e) artanh(sqrt(e))/e^{3/2}, continued to
// e < 0; equal to -4 sum_{k>=1} e^k / ((2k+1)(2k+3)).
double ellipsoid_shape_integral(double e2) {
  if (std::abs(e2) < 0.5) {
    double sum = 0.0, pw = 1.0;
    for (int k = 1; k < 80; ++k) {
      pw *= e2;
      const double term = pw / double((2 * k + 1) * (2 * k + 3));
      sum += term;
      if (std::abs(term) < 1e-18 * std::max(std::abs(sum), 1e-30)) break;
    }
    return -4.0 * sum;
  }
  if (e2 > 0.0) {
    const double e = std::sqrt(e2);
    return -2.0 / 3.0 - 2.0 * (1.0 - e2) / e2 +
           2.0 * (1.0 - e2) * std::atanh(e) / (e2 * e);
  }
  const double y = std::sqrt(-e2);
  return -2.0 / 3.0 + 2.0 * (1.0 + y * y) / (y * y) -
         2.0 * (1.0 + y * y) * std::atan(y) / (y * y * y);
}

// scaled modified spherical Bessel moments: e^{-b} i_0(b), e^{-b} i_2(b)
double i0_scaled(double b) {
  if (b < 1e-8) return std::exp(-b) * (1.0 + b * b / 6.0);
  return -std::expm1(-2.0 * b) / (2.0 * b);
}

double i2_scaled(double b) {
  if (b < 0.5) {
    const double b2 = b * b;
    return std::exp(-b) * b2 / 15.0 *
           (1.0 + b2 / 14.0 + b2 * b2 / 504.0 + b2 * b2 * b2 / 33264.0);
  }
  const double em = std::exp(-2.0 * b);
  return ((b * b + 3.0) * (1.0 - em) - 3.0 * b * (1.0 + em)) / (2.0 * b * b * b);
}

struct EvalCounter {
  std::atomic<long> count{0};
  long cap;
  explicit EvalCounter(long c) : cap(c) {}
  void tick() {
    if (++count > cap)
      throw NumericalError(
          "figure of merit quadrature exceeded evaluation budget (" +
          std::to_string(cap) + ")");
  }
};

}  // namespace

FomValue fom_ellipsoid_nearfield(double eta_perp, double eta_par) {
  if (eta_perp <= 0.0 || eta_par <= 0.0)
    throw DomainError("fom_ellipsoid_nearfield: Lamb-Dicke parameters must be > 0");
  const double ratio = eta_perp / eta_par;
  const double e2 = 1.0 - ratio * ratio;
  const double val = 3.0 / (32.0 * kSqrtPi) * ellipsoid_shape_integral(e2) /
                     (eta_perp * eta_perp * eta_par);
  return {val, Method::analytic, false};
}

FomValue fom_separated_spheres(double zbar, double eta) {
  if (eta <= 0.0) throw DomainError("fom_separated_spheres: eta must be > 0");
  if (zbar < 0.0) throw DomainError("fom_separated_spheres: zbar must be >= 0");
  double shape;  // <P_2(cos th) / (r/x0)^3> over the relative Gaussian
  if (zbar < 0.3) {
    const double z2 = zbar * zbar;
    shape = z2 / (60.0 * kSqrtPi) * (1.0 - z2 * 60.0 / 336.0 + z2 * z2 * 60.0 / 3456.0);
  } else {
    shape = std::erf(0.5 * zbar) / (zbar * zbar * zbar) -
            std::exp(-0.25 * zbar * zbar) *
                (1.0 / 3.0 + 2.0 / (zbar * zbar)) / (2.0 * kSqrtPi);
  }
  return {-0.75 * shape / (eta * eta * eta), Method::analytic, false};
}

double close_approach_probability(double abar, double zbar) {
  if (abar < 0.0) throw DomainError("close_approach_probability: abar must be >= 0");
  if (zbar < 0.0) throw DomainError("close_approach_probability: zbar must be >= 0");
  if (abar == 0.0) return 0.0;
  if (zbar < 1e-4) {
    return std::erf(0.5 * abar) - abar * std::exp(-0.25 * abar * abar) / kSqrtPi;
  }
  const double gplus = std::exp(-0.25 * (zbar + abar) * (zbar + abar));
  const double gminus = std::exp(-0.25 * (zbar - abar) * (zbar - abar));
  const double p = (gplus - gminus) / (kSqrtPi * zbar) +
                   0.5 * (std::erf(0.5 * (zbar + abar)) + std::erf(0.5 * (abar - zbar)));
  return std::clamp(p, 0.0, 1.0);
}

namespace {

// numerator/denominator integrals for the separated-sphere geometry; the
// angular average over the displaced Gaussian reduces to scaled i_0, i_2
FomValue fom_separated_quadrature(const SeparatedSpheres& geo, int q,
                                  const QuadratureOptions& opts) {
  const double eta = geo.eta;
  if (eta <= 0.0) throw DomainError("fom_generic: eta must be > 0");
  const double d = eta * geo.zbar;
  const double bq = tensor_p2_weight(q);
  EvalCounter counter(opts.max_evals);

  auto gauss = [&](double x) {
    const double u = (x - d) / (2.0 * eta);
    return std::exp(-u * u);
  };
  auto beta = [&](double x) { return x * d / (2.0 * eta * eta); };

  quadrature::Options qopts;
  qopts.rel_tol = opts.rel_tol;

  auto integral = [&](const std::function<double(double)>& f) {
    return quadrature::integrate_0_inf(f, qopts);
  };

  const double den = integral([&](double x) {
    counter.tick();
    return x * x * gauss(x) * i0_scaled(beta(x));
  });
  const double nf = integral([&](double x) {
    counter.tick();
    if (x < 1e-12) return 0.0;
    const auto [j2, n2] = dipole_tensor::radial_functions(2, x);
    (void)j2;
    double v = bq * n2 * i2_scaled(beta(x));
    if (opts.include_retardation) {
      const auto [j0, n0] = dipole_tensor::radial_functions(0, x);
      (void)j0;
      v += -n0 * i0_scaled(beta(x));
    }
    return x * x * gauss(x) * v;
  });
  const double ng = integral([&](double x) {
    counter.tick();
    if (x < 1e-12) return 0.0;
    const auto [j0, n0] = dipole_tensor::radial_functions(0, x);
    const auto [j2, n2] = dipole_tensor::radial_functions(2, x);
    (void)n0;
    (void)n2;
    return x * x * gauss(x) *
           (j0 * i0_scaled(beta(x)) - bq * j2 * i2_scaled(beta(x)));
  });

  const double f_avg = nf / den, g_avg = ng / den;
  return {-f_avg / (2.0 * (1.0 + g_avg)), Method::quadrature,
          opts.include_retardation};
}

FomValue fom_ellipsoid_quadrature(const CommonEllipsoid& geo, int q,
                                  const QuadratureOptions& opts) {
  if (geo.eta_perp <= 0.0 || geo.eta_par <= 0.0)
    throw DomainError("fom_generic: Lamb-Dicke parameters must be > 0");
  const double ap = 1.0 / (4.0 * geo.eta_perp * geo.eta_perp);
  const double az = 1.0 / (4.0 * geo.eta_par * geo.eta_par);
  const double w = ap - az;  // exponent of c^2 in the angular weight
  const double bq = tensor_p2_weight(q);
  EvalCounter counter(opts.max_evals);

  boost::math::quadrature::tanh_sinh<double> ang(12);

  // angular moments of the density at radius x against {1, P_2}; scaled by
  // the dominant exponential so the integrand stays O(1)
  auto moments = [&](double x) {
    const double a = x * x * w;
    double m0, m2, scale_exp;
    if (a >= 0.0) {
      scale_exp = -x * x * az;
      m0 = ang.integrate([&](double c) { return std::exp(a * (c * c - 1.0)); }, 0.0, 1.0);
      m2 = ang.integrate(
          [&](double c) {
            return 0.5 * (3.0 * c * c - 1.0) * std::exp(a * (c * c - 1.0));
          },
          0.0, 1.0);
    } else {
      scale_exp = -x * x * ap;
      m0 = ang.integrate([&](double c) { return std::exp(a * c * c); }, 0.0, 1.0);
      m2 = ang.integrate(
          [&](double c) { return 0.5 * (3.0 * c * c - 1.0) * std::exp(a * c * c); },
          0.0, 1.0);
    }
    return std::array<double, 3>{m0, m2, scale_exp};
  };

  quadrature::Options qopts;
  qopts.rel_tol = opts.rel_tol;

  auto integral = [&](const std::function<double(double, const std::array<double, 3>&)>& f) {
    return quadrature::integrate_0_inf(
        [&](double x) {
          counter.tick();
          if (x < 1e-12) return 0.0;
          const auto m = moments(x);
          return f(x, m) * std::exp(m[2]) * x * x;
        },
        qopts);
  };

  const double den = integral([&](double, const std::array<double, 3>& m) { return m[0]; });
  const double nf = integral([&](double x, const std::array<double, 3>& m) {
    const auto [j2, n2] = dipole_tensor::radial_functions(2, x);
    (void)j2;
    double v = bq * n2 * m[1];
    if (opts.include_retardation) {
      const auto [j0, n0] = dipole_tensor::radial_functions(0, x);
      (void)j0;
      v += -n0 * m[0];
    }
    return v;
  });
  const double ng = integral([&](double x, const std::array<double, 3>& m) {
    const auto [j0, n0] = dipole_tensor::radial_functions(0, x);
    const auto [j2, n2] = dipole_tensor::radial_functions(2, x);
    (void)n0;
    (void)n2;
    return j0 * m[0] - bq * j2 * m[1];
  });

  const double f_avg = nf / den, g_avg = ng / den;
  return {-f_avg / (2.0 * (1.0 + g_avg)), Method::quadrature,
          opts.include_retardation};
}

FomValue fom_sphere_quadrature(const CommonSphere& geo, int q,
                               const QuadratureOptions& opts) {
  tensor_p2_weight(q);  // validate q
  if (geo.eta <= 0.0) throw DomainError("fom_generic: eta must be > 0");
  if (!opts.include_retardation) {
    // the P_2 component averages to zero against an isotropic density
    return {0.0, Method::quadrature, false};
  }
  EvalCounter counter(opts.max_evals);
  quadrature::Options qopts;
  qopts.rel_tol = opts.rel_tol;
  auto gauss = [&](double x) {
    const double u = x / (2.0 * geo.eta);
    return std::exp(-u * u);
  };
  const double den = quadrature::integrate_0_inf(
      [&](double x) {
        counter.tick();
        return x * x * gauss(x);
      },
      qopts);
  const double nf = quadrature::integrate_0_inf(
      [&](double x) {
        counter.tick();
        if (x < 1e-12) return 0.0;
        return -dipole_tensor::radial_functions(0, x).second * x * x * gauss(x);
      },
      qopts);
  const double ng = quadrature::integrate_0_inf(
      [&](double x) {
        counter.tick();
        if (x < 1e-12) return 0.0;
        return dipole_tensor::radial_functions(0, x).first * x * x * gauss(x);
      },
      qopts);
  const double f_avg = nf / den, g_avg = ng / den;
  return {-f_avg / (2.0 * (1.0 + g_avg)), Method::quadrature, true};
}

}  // namespace

FomValue fom_generic(const TrapGeometry& geometry, int q,
                     const QuadratureOptions& opts) {
  return std::visit(
      [&](const auto& geo) -> FomValue {
        using T = std::decay_t<decltype(geo)>;
        if constexpr (std::is_same_v<T, SeparatedSpheres>)
          return fom_separated_quadrature(geo, q, opts);
        else if constexpr (std::is_same_v<T, CommonEllipsoid>)
          return fom_ellipsoid_quadrature(geo, q, opts);
        else
          return fom_sphere_quadrature(geo, q, opts);
      },
      geometry);
}

SqrtSwapFom fom_sqrt_swap(double eta, bool near_field) {
  if (eta <= 0.0) throw DomainError("fom_sqrt_swap: eta must be > 0");
  using oscillator_basis::OscState;
  const OscState ring(0, 1, 1), ground(0, 0, 0), zosc(0, 1, 0);

  std::function<double(double)> vf;
  if (near_field) {
    const double c = 3.0 / (8.0 * eta * eta * eta);
    vf = [c](double r) { return c / (r * r * r); };
  } else {
    vf = [eta](double r) {
      return -dipole_tensor::radial_functions(2, 2.0 * eta * r).second;
    };
  }

  const double y20_to_p2 = std::sqrt(4.0 * M_PI / 5.0);
  const double f00 = y20_to_p2 * oscillator_basis::external_tensor_element(
                                     ring, ring, ring, ring, 0, vf);
  double g00 = 1.0;
  if (!near_field) {
    auto vj0 = [eta](double r) {
      return dipole_tensor::radial_functions(0, 2.0 * eta * r).first;
    };
    auto vj2 = [eta](double r) {
      return dipole_tensor::radial_functions(2, 2.0 * eta * r).first;
    };
    g00 = oscillator_basis::external_scalar_element(ring, ring, ring, ring, vj0) +
          y20_to_p2 * oscillator_basis::external_tensor_element(ring, ring, ring,
                                                                ring, 0, vj2);
  }

  const double exchange_z = oscillator_basis::external_tensor_element(
      ground, zosc, zosc, ground, 0, vf);
  const double diag_ring = oscillator_basis::external_tensor_element(
      ring, ring, ring, ring, 0, vf);

  SqrtSwapFom out;
  out.fom = {-f00 / (2.0 * (1.0 + g00)),
             near_field ? Method::analytic : Method::quadrature, !near_field};
  out.z_variant_gain = std::abs(exchange_z / diag_ring);
  return out;
}

OptimizeResult optimize_geometry(const std::function<double(double)>& objective,
                                 double lo, double hi, double tol) {
  if (!(lo < hi)) throw DomainError("optimize_geometry: need lo < hi");
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 300 && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(d);
    }
  }
  OptimizeResult res;
  res.argmax = 0.5 * (a + b);
  res.value = objective(res.argmax);

  const double span = hi - lo;
  const double f_lo = objective(lo), f_hi = objective(hi);
  const bool at_edge = res.argmax - lo < 1e-6 * span || hi - res.argmax < 1e-6 * span;
  const bool beats_edges =
      res.value > std::max(f_lo, f_hi) + 1e-12 * (1.0 + std::abs(res.value));
  res.interior = !at_edge && beats_edges;
  return res;
}

}  // namespace dipolatt::figures_of_merit
