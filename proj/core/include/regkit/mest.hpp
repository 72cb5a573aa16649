#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "regkit/basis.hpp"
#include "regkit/sample.hpp"

namespace regkit {

// M-estimation samples are two-column EmpiricalSamples with rows (Y, X), X in [0, 1].

enum class LossKind { Squared, Logistic, Zero };

std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

/// Loss φ(y, θ) with analytic θ-derivatives.
struct Loss {
  LossKind kind = LossKind::Squared;
  double value(double y, double theta) const;
  double d1(double y, double theta) const;
  double d2(double y, double theta) const;
};

/**
 * argmin_c  E_P φ(Y, κ^k(X)ᵀc) + λ cᵀ G c  over a linear sieve κ^k.
 * G is the Lebesgue Gram matrix of the basis (the identity for the built-in
 * orthonormal families), so the penalty is ‖θ‖²_{L²}.
 */
struct LossSpec {
  Loss loss{};
  double lambda = 0.0;
};

struct MestFit {
  BasisFamily family = BasisFamily::Cosine;
  std::size_t k = 1;
  LossSpec spec{};
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd gram;    // G
  Eigen::MatrixXd Delta;   // E φ''κκᵀ + 2λG
  Eigen::MatrixXd Sigma;   // weighted covariance of the scores
  Eigen::MatrixXd scores;  // n × k, row i = φ'(Y_i, θ(X_i)) κ^k(X_i)ᵀ, uncentered
  int iterations = 0;
  double gradient_norm = 0.0;

  double operator()(double x) const;
  Eigen::VectorXd features(double x) const { return basis_values(family, k, x); }
  /// Mean score plus penalty gradient 2λGc at the fitted coefficients.
  Eigen::VectorXd first_order_condition(const EmpiricalSample& sample) const;
};

/// Newton iterations to ‖gradient‖ ≤ 1e-10; NumericalError after 200 iterations.
MestFit mest_fit(const EmpiricalSample& sample, BasisFamily family, std::size_t k, const LossSpec& spec);

/// Penalized empirical criterion at coefficients c.
double mest_criterion(const EmpiricalSample& sample, BasisFamily family, std::size_t k, const LossSpec& spec,
                      const Eigen::VectorXd& c);

/// Derivative of the fitted coefficients along (1-t)P + tQ at t = 0:
/// -Δ⁻¹ (E_Q - E_P)[∇(Z)].
Eigen::VectorXd mest_derivative(const MestFit& fit, const EmpiricalSample& p, const EmpiricalSample& q);

/// Influence coefficient vectors -Δ⁻¹(∇_i - ∇̄), one row per observation.
Eigen::MatrixXd mest_influence(const MestFit& fit, const EmpiricalSample& sample);

struct SigmaProfile {
  std::vector<double> sigma;
  bool degenerate = false;  // Σ̂ numerically zero
};
/// σ̂_k(z) = √(κ(z)ᵀΔ̂⁻¹Σ̂Δ̂⁻¹κ(z)) on the evaluation grid.
SigmaProfile mest_sigma_profile(const MestFit& fit, const std::vector<double>& grid);

enum class BandNorm { Sup, L2 };

struct BandResult {
  std::vector<double> grid;
  std::vector<double> center;
  std::vector<double> sigma;
  std::vector<double> lower;
  std::vector<double> upper;
  double quantile = 0.0;
  std::vector<double> simulated;  // sorted sup (or L2) statistics
  bool degenerate = false;
};

/**
 * Simulates 𝒵 ~ N(0, Δ̂⁻¹Σ̂Δ̂⁻¹), takes the (1-α) order-statistic quantile q
 * of ‖κᵀ𝒵/σ̂‖ over the grid and returns ψ̂ ± qσ̂/√n. Simulation s uses the
 * stream hash(seed, s). The L2 norm uses trapezoid weights over the grid.
 */
BandResult mest_uniform_band(const MestFit& fit, std::size_t n, const std::vector<double>& grid, double alpha,
                             std::size_t n_sims, std::uint64_t seed, BandNorm norm = BandNorm::Sup);

/**
 * Γ_k(s) = inf_{s' ≥ s} min_{‖θ - ψ_k‖ = s'} [Q(θ) - Q(ψ_k)] / s'. The
 * sphere minimum is searched over 64 seeded random directions followed by a
 * coordinate polish, so values are upper estimates of the exact minimum.
 */
std::vector<double> mest_gamma_modulus(const MestFit& fit, const EmpiricalSample& sample,
                                       const std::vector<double>& s_grid, std::uint64_t seed,
                                       std::size_t directions = 64);

}  // namespace regkit
