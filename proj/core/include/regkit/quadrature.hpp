#pragma once

#include <functional>

namespace regkit {

/// Integral of f over [a, b]: tanh-sinh on finite ranges, adaptive 61-point Gauss-Kronrod when
/// either end is infinite.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

/// Integral over the real line, split at 0.
double integrate_line(const std::function<double(double)>& f, double rel_tol = 1e-13);

}  // namespace regkit
