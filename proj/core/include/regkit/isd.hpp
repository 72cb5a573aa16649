#pragma once

#include <functional>
#include <limits>
#include <span>

#include "regkit/regularization.hpp"

namespace regkit {

enum class BaseKernel { Gaussian, Epanechnikov };

/**
 * κ = ρ + λ(ρ - ρ⋆ρ) for a symmetric base density ρ.
 *   λ = 0  : ρ
 *   λ = -1 : ρ⋆ρ
 *   λ = +1 : 2ρ - ρ⋆ρ (twicing)
 * With leave_one_out the pair sums drop i = j terms, i.e. κ(0) is treated as 0.
 */
struct KernelSpec {
  BaseKernel base = BaseKernel::Gaussian;
  int lambda = 0;
  bool leave_one_out = false;

  double rho(double t) const;
  double rho_conv(double t) const;  // (ρ⋆ρ)(t), closed form
  double kappa(double t) const;
  double kappa_k(double k, double t) const { return k * kappa(k * t); }
  /// κ(0), or 0 under leave-one-out.
  double kappa_zero() const;
  /// Half-width of supp κ (infinite for Gaussian).
  double support_radius() const;
  /// ∫|κ| by quadrature.
  double l1_norm() const;
};

std::string to_string(BaseKernel b);

/// A known density on the line, for population (oracle) quantities.
struct UnivariateDensity {
  std::function<double(double)> pdf;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> breakpoints;  // kinks inside (lo, hi), to help quadrature
};

UnivariateDensity standard_normal_density();

/// Σ_{i,j} w_i w_j κ_k(Z_i - Z_j), skipping i = j under leave-one-out.
/// With uniform weights this is n^{-2} times the pair sum.
double isd_estimate(const KernelSpec& kernel, double k, const EmpiricalSample& sample);

/// C k^{-2ϱ} ∫|κ(u)||u|^{2ϱ} du, ϱ ∈ (0, 1/2).
double isd_bias_bound(double k, double holder_exponent, double holder_scale, const KernelSpec& kernel);
/// ∫|κ(u)||u|^{p} du.
double kernel_abs_moment(const KernelSpec& kernel, double p);

/// (κ_k⋆P_n)(Z_i) for every observation (diagonal dropped under leave-one-out).
std::vector<double> isd_smoothed_at_sample(const KernelSpec& kernel, double k, const EmpiricalSample& sample);

/// Plug-in influence 2{(κ_k⋆P_n)(Z_i) - E_{P_n}[(κ_k⋆P_n)(Z)]}.
InfluenceEvaluation isd_influence(const KernelSpec& kernel, double k, const EmpiricalSample& sample);

/// Dψ_k(P)[Δ] = 2 Σ_a Δ_a (κ_k⋆P)(Z_a) for a signed direction Δ over the sample's points.
double isd_derivative(const KernelSpec& kernel, double k, const EmpiricalSample& sample,
                      std::span<const double> direction);
/// Σ_{a,b} Δ_a Δ_b κ_k(Z_a - Z_b): the exact second-order term of the V-form.
double isd_quadratic_term(const KernelSpec& kernel, double k, const EmpiricalSample& sample,
                          std::span<const double> direction);

/// ψ_k(P) = ∫(κ_k⋆P) dP by nested quadrature.
double isd_population(const KernelSpec& kernel, double k, const UnivariateDensity& p);
/// (κ_k⋆P)(z) by quadrature.
double isd_population_smoothed(const KernelSpec& kernel, double k, const UnivariateDensity& p, double z);
/// ‖φ_k(P)‖_{L²(P)} by nested quadrature.
double isd_population_influence_norm(const KernelSpec& kernel, double k, const UnivariateDensity& p);

/// Closed forms for the Gaussian base kernel and P = N(0,1).
double isd_gaussian_population(const KernelSpec& kernel, double k);
double isd_gaussian_influence_norm(const KernelSpec& kernel, double k);
/// (κ_k⋆P)(z) for the Gaussian base kernel and P = N(0,1).
double isd_gaussian_smoothed(const KernelSpec& kernel, double k, double z);

struct PointwiseDensity {
  double value = 0.0;
  InfluenceEvaluation influence;
};
/// Σ_i w_i κ_k(z - Z_i) with influence κ_k(z - Z_i) - value.
PointwiseDensity pointwise_density(const KernelSpec& kernel, double k, const EmpiricalSample& sample, double z);

struct GineNicklOptions {
  double a = 2.0;
  double delta = 0.5;
  double slow_factor = 0.0;  // l_n; 0 selects default_slow_factor(n)
};
/// Inverse-bandwidth grid k = 1/h from h0 = n^{-(1-δ)}, h1 = log n / n,
/// h2 = 1/(l_n n), h_{j+1} = h_j / a, clipped to [(log n)^4/n², n^{-(1-δ)}].
TuningGrid gine_nickl_grid(std::size_t n, const GineNicklOptions& opt = {});

struct HolderClass {
  double exponent = 0.25;  // ϱ ∈ (0, 1/2)
  double scale = 1.0;      // C
};
struct IsdEnvelopeOptions {
  double log_power = 3.0;  // exponent on log n in both envelopes
  double m = 0.0;          // smoothness offset in the drift exponent
};
/// δ̄_{1,k} = (log n)^3 (k κ(0) + √k)/√n, δ̄_{2,k} = (log n)^3 k^{-(m+ϱ)}, bias = isd_bias_bound.
RateEnvelope isd_envelopes(const HolderClass& holder, const KernelSpec& kernel, const IsdEnvelopeOptions& opt = {});

/// ψ_k(P_n) as a scalar-valued Regularization.
class IsdFamily final : public Regularization {
 public:
  explicit IsdFamily(KernelSpec kernel) : kernel_(kernel) {}
  ParameterValue evaluate(double k, const EmpiricalSample& sample) const override;
  std::optional<InfluenceEvaluation> influence(double k, const EmpiricalSample& sample) const override;
  const KernelSpec& kernel() const noexcept { return kernel_; }

 private:
  KernelSpec kernel_;
};

}  // namespace regkit
