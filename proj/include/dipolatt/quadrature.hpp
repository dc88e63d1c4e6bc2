#pragma once

#include <functional>

#include "dipolatt/errors.hpp"

namespace dipolatt::quadrature {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_levels = 15;
};

// Adaptive integral over [a, b]; endpoint singularities of integrable type
// are handled (tanh-sinh).  Throws NumericalError on non-convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

// Integral over [0, inf): tanh-sinh on the unit interval, Gauss-Kronrod tail.
double integrate_0_inf(const std::function<double(double)>& f,
                       const Options& opts = {});

}  // namespace dipolatt::quadrature
