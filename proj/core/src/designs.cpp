#include "regkit/designs.hpp"

#include <cmath>
#include <numbers>

#include "regkit/basis.hpp"
#include "regkit/quadrature.hpp"

namespace regkit {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

EmpiricalSample draw_normal(std::size_t n, CounterRng& rng) {
  std::vector<double> z(n);
  for (auto& v : z) v = rng.normal();
  return EmpiricalSample(std::move(z));
}

double CuspDensity::pdf(double x) const {
  const double a = std::abs(x);
  return a > 1.0 ? 0.0 : normalizer() * (1.0 - std::pow(a, gamma));
}

double CuspDensity::l2_squared() const {
  const double c = normalizer();
  return 2.0 * c * c * (1.0 - 2.0 / (gamma + 1.0) + 1.0 / (2.0 * gamma + 1.0));
}

UnivariateDensity CuspDensity::density() const {
  UnivariateDensity d;
  const double g = gamma, c = normalizer();
  d.pdf = [g, c](double x) {
    const double a = std::abs(x);
    return a > 1.0 ? 0.0 : c * (1.0 - std::pow(a, g));
  };
  d.lo = -1.0;
  d.hi = 1.0;
  d.breakpoints = {0.0};
  return d;
}

EmpiricalSample CuspDensity::draw(std::size_t n, CounterRng& rng) const {
  std::vector<double> z;
  z.reserve(n);
  while (z.size() < n) {
    const double x = 2.0 * rng.uniform() - 1.0;
    if (rng.uniform() < 1.0 - std::pow(std::abs(x), gamma)) z.push_back(x);
  }
  return EmpiricalSample(std::move(z));
}

double NpivDesign::h(double w) const { return basis_values(BasisFamily::Cosine, static_cast<std::size_t>(theta.size()), w).dot(theta); }

EmpiricalSample NpivDesign::draw(std::size_t n, CounterRng& rng) const {
  std::vector<double> rows;
  rows.reserve(3 * n);
  const double s = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = rng.normal(), eta = rng.normal(), eps = rng.normal();
    const double x = normal_cdf(xi);
    const double w = normal_cdf(rho * xi + s * eta);
    rows.push_back(h(w) + endogeneity * eta + noise * eps);
    rows.push_back(w);
    rows.push_back(x);
  }
  return EmpiricalSample(std::move(rows), 3);
}

double NpivDesign::functional(const std::function<double(double)>& pi) const {
  return integrate([&](double w) { return pi(w) * h(w); }, 0.0, 1.0);
}

double NpivDesign::outcome_variance() const {
  // W = Φ(V) with V ~ N(0,1) and E[η | V] = √(1-ρ²) V.
  const double s = std::sqrt(1.0 - rho * rho);
  const double cov = s * integrate_line([&](double v) {
    return h(normal_cdf(v)) * v * std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
  });
  return theta.tail(theta.size() - 1).squaredNorm() + endogeneity * endogeneity + noise * noise +
         2.0 * endogeneity * cov;
}

double RegressionDesign::f(double x) const {
  return basis_values(BasisFamily::Cosine, static_cast<std::size_t>(beta.size()), x).dot(beta);
}

EmpiricalSample RegressionDesign::draw(std::size_t n, CounterRng& rng) const {
  std::vector<double> rows;
  rows.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    rows.push_back(f(x) + noise * rng.normal());
    rows.push_back(x);
  }
  return EmpiricalSample(std::move(rows), 2);
}

}  // namespace regkit
