#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "regkit/basis.hpp"
#include "regkit/isd.hpp"

namespace regkit {

// NPIV samples are three-column EmpiricalSamples with rows (Y, W, X):
// outcome, endogenous regressor, instrument. W and X live in [0, 1].

enum class NpivMethod { Sieve, Tikhonov };

struct TikhonovSpec {
  double k = 10.0;       // inverse bandwidth of κ_k
  double lambda = 1e-3;  // penalty λ_k > 0
  KernelSpec kernel{};
  std::size_t grid_size = 201;
};

/**
 * ψ_k represented by coefficients in a basis of functions on [0, 1]:
 * v^L for the sieve, piecewise-linear hat functions on the uniform grid
 * for Tikhonov (coefficients are then the grid values).
 *
 * Sieve: Q̂_uv = Ê[u(X) v(W)ᵀ] (J×L), moment = Ê[u(X) Y], system = Q̂_uvᵀ Q̂_uv.
 * Tikhonov: Q̂_uv = T̂ (m×m), moment = r̂, system = T̂ᵀΩT̂ + λΩ.
 * Q_uu is the Lebesgue Gram of an orthonormal basis, i.e. the identity.
 */
struct NpivFit {
  NpivMethod method = NpivMethod::Sieve;
  double k = 0.0;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd Quv;
  Eigen::VectorXd moment;
  Eigen::MatrixXd system;
  SieveBasis basis{};
  TikhonovSpec tikhonov{};
  Eigen::VectorXd grid;     // Tikhonov only
  Eigen::VectorXd weights;  // trapezoid weights, Tikhonov only

  /// ψ_k(w).
  double operator()(double w) const;
};

/// Series two-stage least squares. Throws IllPosedError when the smallest
/// eigenvalue of Q̂_uvᵀ Q̂_uv is below 1e-10.
NpivFit npiv_sieve_fit(const EmpiricalSample& sample, const SieveBasis& basis);

/// Stand-in for ψ(P) - ψ_k(P) in the second influence term.
struct BiasProxy {
  enum class Kind { MomentResidual, Analytic, LargerFit };
  Kind kind = Kind::MomentResidual;
  std::function<double(double)> truth;   // Analytic: the structural function h
  std::optional<NpivFit> larger;         // LargerFit: ψ_K(P_n)

  static BiasProxy moment_residual() { return {}; }
  static BiasProxy analytic(std::function<double(double)> h) { return {Kind::Analytic, std::move(h), std::nullopt}; }
  static BiasProxy larger_fit(NpivFit fit) { return {Kind::LargerFit, {}, std::move(fit)}; }
};

/// Per-observation raw (uncentered) influence of γ_k = Σ pi_l c_l evaluated at
/// the rows of `at`, with population moments taken under `sample`.
Eigen::VectorXd npiv_sieve_influence_raw(const NpivFit& fit, const EmpiricalSample& sample,
                                         const Eigen::VectorXd& pi_coeffs, const BiasProxy& proxy,
                                         const EmpiricalSample& at);
InfluenceEvaluation npiv_sieve_influence(const NpivFit& fit, const EmpiricalSample& sample,
                                         const Eigen::VectorXd& pi_coeffs,
                                         const BiasProxy& proxy = BiasProxy::moment_residual());

/// Discretized Tikhonov fit on the uniform grid with trapezoid weights.
NpivFit npiv_tikhonov_fit(const EmpiricalSample& sample, const TikhonovSpec& spec);

Eigen::VectorXd npiv_tikhonov_influence_raw(const NpivFit& fit, const EmpiricalSample& sample,
                                            const Eigen::VectorXd& pi_on_grid, const BiasProxy& proxy,
                                            const EmpiricalSample& at);
InfluenceEvaluation npiv_tikhonov_influence(const NpivFit& fit, const EmpiricalSample& sample,
                                            const Eigen::VectorXd& pi_on_grid,
                                            const BiasProxy& proxy = BiasProxy::moment_residual());

/// Separate values of the two influence terms (uncentered), for diagnostics.
struct InfluenceTerms {
  Eigen::VectorXd term1;
  Eigen::VectorXd term2;
};
InfluenceTerms npiv_tikhonov_influence_terms(const NpivFit& fit, const EmpiricalSample& sample,
                                             const Eigen::VectorXd& pi_on_grid, const BiasProxy& proxy,
                                             const EmpiricalSample& at);
InfluenceTerms npiv_sieve_influence_terms(const NpivFit& fit, const EmpiricalSample& sample,
                                          const Eigen::VectorXd& pi_coeffs, const BiasProxy& proxy,
                                          const EmpiricalSample& at);

/// γ̂ = ∫π ψ̂_k: pi_coeffs·coefficients (sieve) or trapezoid quadrature of π·ψ̂ (Tikhonov).
double npiv_gamma(const NpivFit& fit, const Eigen::VectorXd& pi);

struct FunctionalEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  InfluenceEvaluation influence;
};
/// γ̂ with standard error ‖φ‖_emp / √n.
FunctionalEstimate npiv_functional(const NpivFit& fit, const EmpiricalSample& sample, const Eigen::VectorXd& pi,
                                   const BiasProxy& proxy = BiasProxy::moment_residual());

/// π sampled on a Tikhonov fit's grid.
Eigen::VectorXd pi_on_grid(const NpivFit& fit, const std::function<double(double)>& pi);

/// γ_k(P_n) as a scalar family, k = L for the sieve (J = j_ratio·L) or the
/// inverse bandwidth for Tikhonov (λ_k from the schedule).
class NpivSieveFamily final : public Regularization {
 public:
  NpivSieveFamily(BasisFamily family, std::function<double(double)> pi, std::size_t j_ratio = 2)
      : family_(family), pi_(std::move(pi)), j_ratio_(j_ratio) {}
  ParameterValue evaluate(double k, const EmpiricalSample& sample) const override;
  std::optional<InfluenceEvaluation> influence(double k, const EmpiricalSample& sample) const override;

 private:
  SieveBasis basis_for(double k) const;
  BasisFamily family_;
  std::function<double(double)> pi_;
  std::size_t j_ratio_;
};

}  // namespace regkit
