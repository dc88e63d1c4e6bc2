#include "dipolatt/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace dipolatt::quadrature {

namespace {

double tanh_sinh_integrate(const std::function<double(double)>& f, double a,
                           double b, const Options& opts) {
  boost::math::quadrature::tanh_sinh<double> integrator(opts.max_levels);
  double err = 0.0, l1 = 0.0;
  const double v = integrator.integrate(f, a, b, opts.rel_tol, &err, &l1);
  if (!std::isfinite(v))
    throw NumericalError("quadrature: non-finite result on finite interval");
  if (err > opts.rel_tol * 100 * std::max(std::abs(v), 1.0) + opts.abs_tol &&
      err > 1e-6 * std::abs(v))
    throw NumericalError("quadrature: tanh-sinh failed to converge, error " +
                         std::to_string(err));
  return v;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  if (!(a < b)) throw DomainError("quadrature: need a < b");
  return tanh_sinh_integrate(f, a, b, opts);
}

double integrate_0_inf(const std::function<double(double)>& f, const Options& opts) {
  const double head = tanh_sinh_integrate(f, 0.0, 1.0, opts);
  double err = 0.0;
  const double tail =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          f, 1.0, std::numeric_limits<double>::infinity(), 12, opts.rel_tol, &err);
  if (!std::isfinite(tail))
    throw NumericalError("quadrature: non-finite tail integral");
  const double v = head + tail;
  if (err > opts.rel_tol * 100 * std::max(std::abs(v), 1.0) + opts.abs_tol &&
      err > 1e-6 * std::abs(v))
    throw NumericalError("quadrature: tail failed to converge, error " +
                         std::to_string(err));
  return v;
}

}  // namespace dipolatt::quadrature
