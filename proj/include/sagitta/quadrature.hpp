#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

#include "sagitta/error.hpp"

namespace sagitta {

struct QuadratureTolerance {
  double absolute = 1e-12;
  double relative = 1e-10;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Throws NumericalDomain when the
/// error estimate misses both tolerances after the maximum refinement depth.
template <class F>
double integrate(F&& f, double a, double b, QuadratureTolerance tol = {}) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 20, tol.relative * 0.1, &error);
  if (!std::isfinite(value) ||
      error > std::max(tol.absolute, tol.relative * std::abs(value))) {
    fail(ErrorKind::NumericalDomain,
         "quadrature did not converge on [" + std::to_string(a) + ", " +
             std::to_string(b) + "], error estimate " + std::to_string(error));
  }
  return value;
}

}  // namespace sagitta
