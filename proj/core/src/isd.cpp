#include "regkit/isd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "regkit/errors.hpp"
#include "regkit/quadrature.hpp"

namespace regkit {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

double normal_pdf(double x, double var) { return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var); }

// Integral over [a, b] split at the sorted interior points.
double integrate_pieces(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts,
                        double rel_tol = 1e-13) {
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0, lo = a;
  for (double c : cuts) {
    if (c <= lo || c >= b) continue;
    total += integrate(f, lo, c, rel_tol);
    lo = c;
  }
  return total + integrate(f, lo, b, rel_tol);
}

std::vector<double> kernel_kinks(const KernelSpec& kernel) {
  if (kernel.base == BaseKernel::Gaussian) return {0.0};
  return {-2.0, -1.0, 0.0, 1.0, 2.0};
}

double kernel_radius_for_quadrature(const KernelSpec& kernel) {
  return std::isfinite(kernel.support_radius()) ? kernel.support_radius() : 40.0;
}

}  // namespace

std::string to_string(BaseKernel b) { return b == BaseKernel::Gaussian ? "gaussian" : "epanechnikov"; }

double KernelSpec::rho(double t) const {
  if (base == BaseKernel::Gaussian) return kInvSqrt2Pi * std::exp(-0.5 * t * t);
  const double a = std::abs(t);
  return a <= 1.0 ? 0.75 * (1.0 - t * t) : 0.0;
}

double KernelSpec::rho_conv(double t) const {
  if (base == BaseKernel::Gaussian) return std::exp(-0.25 * t * t) / (2.0 * std::sqrt(std::numbers::pi));
  const double a = std::abs(t);
  if (a >= 2.0) return 0.0;
  const double b = 2.0 - a;
  return 3.0 / 160.0 * b * b * b * (a * a + 6.0 * a + 4.0);
}

double KernelSpec::kappa(double t) const {
  switch (lambda) {
    case 0: return rho(t);
    case -1: return rho_conv(t);
    case 1: return 2.0 * rho(t) - rho_conv(t);
    default: throw std::domain_error("KernelSpec: lambda must be -1, 0 or 1");
  }
}

double KernelSpec::kappa_zero() const { return leave_one_out ? 0.0 : kappa(0.0); }

double KernelSpec::support_radius() const {
  if (base == BaseKernel::Gaussian) return std::numeric_limits<double>::infinity();
  return lambda == 0 ? 1.0 : 2.0;
}

double KernelSpec::l1_norm() const { return kernel_abs_moment(*this, 0.0); }

double kernel_abs_moment(const KernelSpec& kernel, double p) {
  const double r = kernel_radius_for_quadrature(kernel);
  auto f = [&](double u) { return std::abs(kernel.kappa(u)) * std::pow(std::abs(u), p); };
  auto cuts = kernel_kinks(kernel);
  if (kernel.base == BaseKernel::Gaussian && kernel.lambda == 1) {
    // 2ρ - ρ⋆ρ changes sign where e^{t²/4} = 2√2.
    const double t0 = std::sqrt(4.0 * std::log(2.0 * std::numbers::sqrt2));
    cuts.push_back(-t0);
    cuts.push_back(t0);
  }
  return integrate_pieces(f, -r, r, cuts);
}

UnivariateDensity standard_normal_density() {
  UnivariateDensity d;
  d.pdf = [](double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); };
  return d;
}

double isd_estimate(const KernelSpec& kernel, double k, const EmpiricalSample& sample) {
  if (!(k > 0.0)) throw std::domain_error("isd_estimate: k must be positive");
  if (kernel.leave_one_out && sample.size() < 2) throw std::domain_error("isd_estimate: leave-one-out needs n >= 2");
  const auto z = sample.values();
  const auto w = sample.weights();
  const std::size_t n = z.size();
  double diag = 0.0;
  if (!kernel.leave_one_out) {
    const double k0 = kernel.kappa_k(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) diag += w[i] * w[i] * k0;
  }
  double off = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) row += w[j] * kernel.kappa_k(k, z[i] - z[j]);
    off += w[i] * row;
  }
  return diag + 2.0 * off;
}

double isd_bias_bound(double k, double holder_exponent, double holder_scale, const KernelSpec& kernel) {
  if (!(holder_exponent > 0.0 && holder_exponent < 0.5))
    throw std::domain_error("isd_bias_bound: Holder exponent must lie in (0, 0.5)");
  if (!(k > 0.0)) throw std::domain_error("isd_bias_bound: k must be positive");
  if (holder_scale == 0.0) return 0.0;
  return holder_scale * std::pow(k, -2.0 * holder_exponent) * kernel_abs_moment(kernel, 2.0 * holder_exponent);
}

std::vector<double> isd_smoothed_at_sample(const KernelSpec& kernel, double k, const EmpiricalSample& sample) {
  const auto z = sample.values();
  const auto w = sample.weights();
  const std::size_t n = z.size();
  std::vector<double> g(n, 0.0);
  const double k0 = kernel.leave_one_out ? 0.0 : kernel.kappa_k(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] += w[i] * k0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel.kappa_k(k, z[i] - z[j]);
      g[i] += w[j] * v;
      g[j] += w[i] * v;
    }
  }
  return g;
}

InfluenceEvaluation isd_influence(const KernelSpec& kernel, double k, const EmpiricalSample& sample) {
  if (sample.size() < 2) throw std::domain_error("isd_influence: need n >= 2");
  auto g = isd_smoothed_at_sample(kernel, k, sample);
  for (double& v : g) v *= 2.0;
  return make_influence(std::move(g), sample.weights());
}

double isd_derivative(const KernelSpec& kernel, double k, const EmpiricalSample& sample,
                      std::span<const double> direction) {
  if (direction.size() != sample.size()) throw std::invalid_argument("isd_derivative: direction size mismatch");
  const auto g = isd_smoothed_at_sample(kernel, k, sample);
  double d = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) d += direction[a] * g[a];
  return 2.0 * d;
}

double isd_quadratic_term(const KernelSpec& kernel, double k, const EmpiricalSample& sample,
                          std::span<const double> direction) {
  if (direction.size() != sample.size()) throw std::invalid_argument("isd_quadratic_term: direction size mismatch");
  const auto z = sample.values();
  const std::size_t n = z.size();
  double total = 0.0;
  if (!kernel.leave_one_out) {
    const double k0 = kernel.kappa_k(k, 0.0);
    for (std::size_t a = 0; a < n; ++a) total += direction[a] * direction[a] * k0;
  }
  double off = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) off += direction[a] * direction[b] * kernel.kappa_k(k, z[a] - z[b]);
  return total + 2.0 * off;
}

double isd_population_smoothed(const KernelSpec& kernel, double k, const UnivariateDensity& p, double z) {
  // ∫κ(u) p(z - u/k) du over the kernel's (effective) support.
  const double r = kernel_radius_for_quadrature(kernel);
  auto cuts = kernel_kinks(kernel);
  if (std::isfinite(p.lo)) cuts.push_back(k * (z - p.lo));
  if (std::isfinite(p.hi)) cuts.push_back(k * (z - p.hi));
  for (double b : p.breakpoints) cuts.push_back(k * (z - b));
  auto f = [&](double u) {
    const double x = z - u / k;
    return (x < p.lo || x > p.hi) ? 0.0 : kernel.kappa(u) * p.pdf(x);
  };
  return integrate_pieces(f, -r, r, cuts);
}

namespace {

double integrate_against_density(const UnivariateDensity& p, const std::function<double(double)>& h) {
  // The inner integrals are only good to ~1e-14, so the outer tolerance stays above that.
  auto f = [&](double z) { return h(z) * p.pdf(z); };
  return integrate_pieces(f, p.lo, p.hi, p.breakpoints, 1e-11);
}

}  // namespace

double isd_population(const KernelSpec& kernel, double k, const UnivariateDensity& p) {
  return integrate_against_density(p, [&](double z) { return isd_population_smoothed(kernel, k, p, z); });
}

double isd_population_influence_norm(const KernelSpec& kernel, double k, const UnivariateDensity& p) {
  const double m = isd_population(kernel, k, p);
  const double m2 = integrate_against_density(p, [&](double z) {
    const double g = isd_population_smoothed(kernel, k, p, z) - m;
    return g * g;
  });
  return 2.0 * std::sqrt(m2);
}

namespace {

// κ_k = Σ c_a N(0, v_a) for the Gaussian base.
struct GaussMix {
  double c[2];
  double v[2];
};

GaussMix gaussian_components(const KernelSpec& kernel, double k) {
  if (kernel.base != BaseKernel::Gaussian) throw std::domain_error("closed form needs the Gaussian base kernel");
  const double h2 = 1.0 / (k * k);
  const double lam = kernel.lambda;
  return {{1.0 + lam, -lam}, {h2, 2.0 * h2}};
}

}  // namespace

double isd_gaussian_population(const KernelSpec& kernel, double k) {
  const auto g = gaussian_components(kernel, k);
  return g.c[0] * normal_pdf(0.0, 2.0 + g.v[0]) + g.c[1] * normal_pdf(0.0, 2.0 + g.v[1]);
}

double isd_gaussian_smoothed(const KernelSpec& kernel, double k, double z) {
  const auto g = gaussian_components(kernel, k);
  return g.c[0] * normal_pdf(z, 1.0 + g.v[0]) + g.c[1] * normal_pdf(z, 1.0 + g.v[1]);
}

double isd_gaussian_influence_norm(const KernelSpec& kernel, double k) {
  // (κ_k⋆P)(z) = Σ c_a φ(z; 1 + v_a); E over N(0,1) of products via
  // ∫φ(z;a)φ(z;b)φ(z;c)dz = 1 / (2π √(ab + bc + ca)).
  const auto g = gaussian_components(kernel, k);
  const double mean = isd_gaussian_population(kernel, k);
  double m2 = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double va = 1.0 + g.v[a], vb = 1.0 + g.v[b];
      m2 += g.c[a] * g.c[b] / (2.0 * std::numbers::pi * std::sqrt(va * vb + vb + va));
    }
  return 2.0 * std::sqrt(std::max(m2 - mean * mean, 0.0));
}

PointwiseDensity pointwise_density(const KernelSpec& kernel, double k, const EmpiricalSample& sample, double z) {
  if (!(k > 0.0)) throw std::domain_error("pointwise_density: k must be positive");
  const auto x = sample.values();
  std::vector<double> raw(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) raw[i] = kernel.kappa_k(k, z - x[i]);
  double value = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) value += sample.weights()[i] * raw[i];
  return {value, make_influence(std::move(raw), sample.weights())};
}

TuningGrid gine_nickl_grid(std::size_t n, const GineNicklOptions& opt) {
  if (n < 8) throw ConfigError("gine_nickl_grid: need n >= 8");
  if (!(opt.a > 1.0)) throw ConfigError("gine_nickl_grid: a must exceed 1");
  if (!(opt.delta > 0.0 && opt.delta < 1.0)) throw ConfigError("gine_nickl_grid: delta must lie in (0,1)");
  const double nd = static_cast<double>(n);
  const double ln = opt.slow_factor > 0.0 ? opt.slow_factor : default_slow_factor(n);
  const double upper = std::pow(nd, -(1.0 - opt.delta));
  const double lower = std::pow(std::log(nd), 4.0) / (nd * nd);
  if (!(lower <= upper)) throw ConfigError("gine_nickl_grid: empty bandwidth interval for n = " + std::to_string(n));

  std::vector<double> h{upper, std::log(nd) / nd};
  for (double hj = 1.0 / (ln * nd); hj >= lower; hj /= opt.a) h.push_back(hj);
  std::vector<double> k;
  for (double hj : h)
    if (hj >= lower && hj <= upper) k.push_back(1.0 / hj);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  if (k.empty()) throw ConfigError("gine_nickl_grid: no bandwidth inside the interval");
  return TuningGrid(std::move(k), GridProvenance::GineNickl);
}

RateEnvelope isd_envelopes(const HolderClass& holder, const KernelSpec& kernel, const IsdEnvelopeOptions& opt) {
  if (!(holder.exponent > 0.0 && holder.exponent < 0.5))
    throw std::domain_error("isd_envelopes: Holder exponent must lie in (0, 0.5)");
  const double k0 = kernel.kappa_zero();
  const double moment = kernel_abs_moment(kernel, 2.0 * holder.exponent);
  const double rho = holder.exponent, c = holder.scale, pw = opt.log_power, m = opt.m;
  RateEnvelope env;
  env.sampling = [k0, pw](double k, std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::pow(std::log(nd), pw) * (k * k0 + std::sqrt(k)) / std::sqrt(nd);
  };
  env.drift = [pw, m, rho](double k, std::size_t n) {
    return std::pow(std::log(static_cast<double>(n)), pw) * std::pow(k, -(m + rho));
  };
  env.bias = [c, rho, moment](double k) { return c * std::pow(k, -2.0 * rho) * moment; };
  env.rate_inverse = [](std::size_t n) { return default_slow_factor(n) / std::sqrt(static_cast<double>(n)); };
  return env;
}

ParameterValue IsdFamily::evaluate(double k, const EmpiricalSample& sample) const {
  return isd_estimate(kernel_, k, sample);
}

std::optional<InfluenceEvaluation> IsdFamily::influence(double k, const EmpiricalSample& sample) const {
  return isd_influence(kernel_, k, sample);
}

}  // namespace regkit
