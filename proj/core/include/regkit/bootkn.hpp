#pragma once

#include <cstdint>

#include "regkit/selector.hpp"

namespace regkit {

/// √k (max{resample_mean, 0} - max{sample_mean, 0}).
double boot_statistic(double resample_mean, double sample_mean, double k);

struct BootstrapLaw {
  std::vector<double> draws;  // sorted
  std::uint64_t seed = 0;
  std::size_t k = 0;

  std::size_t B() const noexcept { return draws.size(); }
  DiscreteLaw law() const { return DiscreteLaw::uniform_over(draws); }
};

/**
 * B draws of T_k, each from a k-out-of-n resample with replacement. Draw b
 * uses the stream hash(seed, k, b), so laws for different k are independent
 * and any subset of draws can be reproduced on its own.
 */
BootstrapLaw boot_law(const EmpiricalSample& sample, std::size_t k, std::size_t B, std::uint64_t seed);

struct BootEnvelopeOptions {
  double third_moment = 0.0;  // bound on E_P|Z|³
  double slow_factor = 0.0;   // l_n; 0 selects default_slow_factor(n)
};
/// δ̄_k = 2√k l_n / √n, B̄_k = 6 M3 / √k.
RateEnvelope boot_envelopes(const BootEnvelopeOptions& opt);

/// The boundary term 1{E Z > 0} 2Φ(-√k E Z) left out of B̄_k; diagnostic only.
double boot_boundary_bias_term(double k, double mean);

/// Plug-in E_{P_n}|Z|³. Sample-dependent, so envelopes built from it are not fixed majorants.
double empirical_third_moment(const EmpiricalSample& sample);

/// k ↦ law of T_k with bounded-Lipschitz distance.
class BootFamily final : public Regularization {
 public:
  BootFamily(std::size_t B, std::uint64_t seed) : B_(B), seed_(seed) {}
  ParameterValue evaluate(double k, const EmpiricalSample& sample) const override;

 private:
  std::size_t B_;
  std::uint64_t seed_;
};

/// Lepski choice of the resample size with boot_envelopes and bl_distance.
SelectionResult boot_select(const EmpiricalSample& sample, const TuningGrid& grid, std::size_t B, std::uint64_t seed,
                            double slow_factor = 0.0);

}  // namespace regkit
