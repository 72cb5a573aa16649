#include "regkit/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

namespace regkit {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  if (std::isfinite(a) && std::isfinite(b)) {
    // Double-exponential nodes cluster at the ends, where piecewise integrands keep their kinks.
    thread_local boost::math::quadrature::tanh_sinh<double> ts(10);
    return ts.integrate(f, a, b, std::sqrt(rel_tol));
  }
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol);
}

double integrate_line(const std::function<double(double)>& f, double rel_tol) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return integrate(f, -inf, 0.0, rel_tol) + integrate(f, 0.0, inf, rel_tol);
}

}  // namespace regkit
