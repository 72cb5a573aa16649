#pragma once

#include <Eigen/Dense>
#include <functional>

#include "regkit/isd.hpp"
#include "regkit/rng.hpp"

namespace regkit {

/// n iid N(0,1) draws.
EmpiricalSample draw_normal(std::size_t n, CounterRng& rng);

/// p(x) = c (1 - |x|^γ) on [-1, 1], c = (γ+1)/(2γ). Hölder of order γ at 0.
struct CuspDensity {
  double gamma = 0.3;

  double normalizer() const { return (gamma + 1.0) / (2.0 * gamma); }
  double pdf(double x) const;
  /// ∫p² in closed form.
  double l2_squared() const;
  UnivariateDensity density() const;
  /// Rejection sampling from the uniform proposal on [-1, 1].
  EmpiricalSample draw(std::size_t n, CounterRng& rng) const;
};

/**
 * NPIV design with uniform marginals: X = Φ(ξ), W = Φ(ρξ + √(1-ρ²)η),
 * Y = h(W) + cη + σε with ξ, η, ε iid N(0,1). W is endogenous through η and
 * E[Y - h(W) | X] = 0. h = Σ θ_l v_l in the cosine basis.
 */
struct NpivDesign {
  double rho = 0.7;
  double endogeneity = 0.5;  // c
  double noise = 0.5;        // σ
  Eigen::VectorXd theta = (Eigen::VectorXd(3) << 1.0, 0.5, -0.3).finished();

  double h(double w) const;
  /// Rows (Y, W, X).
  EmpiricalSample draw(std::size_t n, CounterRng& rng) const;
  /// ∫π h over [0, 1].
  double functional(const std::function<double(double)>& pi) const;
  /// Var(Y) = Σ_{l ≥ 1} θ_l² + c² + σ² + 2c Cov(h(W), η).
  double outcome_variance() const;
};

/// Y = f(X) + σε, X ~ U(0,1), f = Σ β_j κ_j in the cosine basis.
struct RegressionDesign {
  double noise = 1.0;
  Eigen::VectorXd beta = (Eigen::VectorXd(5) << 0.5, 1.0, -0.7, 0.4, 0.2).finished();

  double f(double x) const;
  /// Rows (Y, X).
  EmpiricalSample draw(std::size_t n, CounterRng& rng) const;
};

double normal_cdf(double x);

}  // namespace regkit
