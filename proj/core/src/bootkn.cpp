#include "regkit/bootkn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regkit/rng.hpp"

namespace regkit {

double boot_statistic(double resample_mean, double sample_mean, double k) {
  if (!(k >= 1.0)) throw std::domain_error("boot_statistic: k must be >= 1");
  return std::sqrt(k) * (std::max(resample_mean, 0.0) - std::max(sample_mean, 0.0));
}

BootstrapLaw boot_law(const EmpiricalSample& sample, std::size_t k, std::size_t B, std::uint64_t seed) {
  if (k < 1 || B < 1) throw std::domain_error("boot_law: need k >= 1 and B >= 1");
  const auto z = sample.values();
  const std::size_t n = z.size();
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(n);

  BootstrapLaw law;
  law.seed = seed;
  law.k = k;
  law.draws.resize(B);
  const std::uint64_t key_k = hash_combine(seed, k);
  const double kd = static_cast<double>(k);
  for (std::size_t b = 0; b < B; ++b) {
    CounterRng rng(hash_combine(key_k, b));
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += z[rng.below(n)];
    law.draws[b] = boot_statistic(s / kd, mean, kd);
  }
  std::sort(law.draws.begin(), law.draws.end());
  return law;
}

RateEnvelope boot_envelopes(const BootEnvelopeOptions& opt) {
  if (!(opt.third_moment >= 0.0)) throw std::domain_error("boot_envelopes: third moment must be >= 0");
  const double m3 = opt.third_moment, ln_fixed = opt.slow_factor;
  auto ln = [ln_fixed](std::size_t n) { return ln_fixed > 0.0 ? ln_fixed : default_slow_factor(n); };
  RateEnvelope env;
  env.sampling = [ln](double k, std::size_t n) {
    return 2.0 * std::sqrt(k) * ln(n) / std::sqrt(static_cast<double>(n));
  };
  env.bias = [m3](double k) { return 6.0 * m3 / std::sqrt(k); };
  env.rate_inverse = [ln](std::size_t n) { return ln(n) / std::sqrt(static_cast<double>(n)); };
  return env;
}

double boot_boundary_bias_term(double k, double mean) {
  if (!(mean > 0.0)) return 0.0;
  return std::erfc(std::sqrt(k) * mean / std::sqrt(2.0));
}

double empirical_third_moment(const EmpiricalSample& sample) {
  const auto z = sample.values();
  double m = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) m += sample.weights()[i] * std::abs(z[i] * z[i] * z[i]);
  return m;
}

ParameterValue BootFamily::evaluate(double k, const EmpiricalSample& sample) const {
  return boot_law(sample, static_cast<std::size_t>(std::llround(k)), B_, seed_).law();
}

SelectionResult boot_select(const EmpiricalSample& sample, const TuningGrid& grid, std::size_t B, std::uint64_t seed,
                            double slow_factor) {
  for (double k : grid)
    if (k != std::round(k) || k > static_cast<double>(sample.size()))
      throw std::domain_error("boot_select: grid must consist of integers in [1, n]");
  BootFamily family(B, seed);
  BootEnvelopeOptions opt;
  opt.slow_factor = slow_factor;
  return lepski_select(family, sample, grid, boot_envelopes(opt), sample.size());
}

}  // namespace regkit
