#include "regkit/mest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "regkit/errors.hpp"
#include "regkit/rng.hpp"

namespace regkit {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::Squared: return "squared";
    case LossKind::Logistic: return "logistic";
    case LossKind::Zero: return "zero";
  }
  return "squared";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "squared") return LossKind::Squared;
  if (s == "logistic") return LossKind::Logistic;
  if (s == "zero") return LossKind::Zero;
  throw ConfigError("unknown loss '" + s + "'");
}

double Loss::value(double y, double t) const {
  switch (kind) {
    case LossKind::Squared: return (y - t) * (y - t);
    case LossKind::Logistic: return (t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t))) - y * t;
    case LossKind::Zero: return 0.0;
  }
  return 0.0;
}

double Loss::d1(double y, double t) const {
  switch (kind) {
    case LossKind::Squared: return -2.0 * (y - t);
    case LossKind::Logistic: return 1.0 / (1.0 + std::exp(-t)) - y;
    case LossKind::Zero: return 0.0;
  }
  return 0.0;
}

double Loss::d2(double /*y*/, double t) const {
  switch (kind) {
    case LossKind::Squared: return 2.0;
    case LossKind::Logistic: {
      const double p = 1.0 / (1.0 + std::exp(-t));
      return p * (1.0 - p);
    }
    case LossKind::Zero: return 0.0;
  }
  return 0.0;
}

namespace {

void check_mest_sample(const EmpiricalSample& s) {
  if (s.dim() != 2) throw std::domain_error("M-estimation sample must have columns (Y, X)");
}

MatrixXd feature_matrix(const EmpiricalSample& s, BasisFamily family, std::size_t k) {
  MatrixXd F(static_cast<Index>(s.size()), static_cast<Index>(k));
  for (std::size_t i = 0; i < s.size(); ++i) F.row(static_cast<Index>(i)) = basis_values(family, k, s(i, 1));
  return F;
}

MatrixXd gram_for(BasisFamily family, std::size_t k) {
  // Built-in families are orthonormal on [0, 1].
  (void)family;
  return MatrixXd::Identity(static_cast<Index>(k), static_cast<Index>(k));
}

}  // namespace

double MestFit::operator()(double x) const { return features(x).dot(coefficients); }

VectorXd MestFit::first_order_condition(const EmpiricalSample& sample) const {
  VectorXd g = 2.0 * spec.lambda * gram * coefficients;
  for (std::size_t i = 0; i < sample.size(); ++i) g += sample.weights()[i] * scores.row(static_cast<Index>(i)).transpose();
  return g;
}

double mest_criterion(const EmpiricalSample& sample, BasisFamily family, std::size_t k, const LossSpec& spec,
                      const VectorXd& c) {
  check_mest_sample(sample);
  double q = spec.lambda * c.dot(gram_for(family, k) * c);
  for (std::size_t i = 0; i < sample.size(); ++i)
    q += sample.weights()[i] * spec.loss.value(sample(i, 0), basis_values(family, k, sample(i, 1)).dot(c));
  return q;
}

MestFit mest_fit(const EmpiricalSample& sample, BasisFamily family, std::size_t k, const LossSpec& spec) {
  check_mest_sample(sample);
  if (k < 1) throw std::domain_error("mest_fit: k must be >= 1");
  if (sample.size() <= k) throw std::domain_error("mest_fit: need n > k");
  if (!(spec.lambda >= 0.0)) throw std::domain_error("mest_fit: lambda must be >= 0");
  const auto K = static_cast<Index>(k);
  const MatrixXd F = feature_matrix(sample, family, k);
  const auto w = sample.weights();
  const std::size_t n = sample.size();

  MestFit fit;
  fit.family = family;
  fit.k = k;
  fit.spec = spec;
  fit.gram = gram_for(family, k);
  fit.coefficients = VectorXd::Zero(K);

  auto objective = [&](const VectorXd& c) {
    const VectorXd th = F * c;
    double q = spec.lambda * c.dot(fit.gram * c);
    for (std::size_t i = 0; i < n; ++i) q += w[i] * spec.loss.value(sample(i, 0), th[static_cast<Index>(i)]);
    return q;
  };

  VectorXd grad(K);
  MatrixXd hess(K, K);
  auto derivatives = [&](const VectorXd& c) {
    const VectorXd th = F * c;
    grad = 2.0 * spec.lambda * fit.gram * c;
    hess = 2.0 * spec.lambda * fit.gram;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Index>(i);
      const double y = sample(i, 0);
      grad += w[i] * spec.loss.d1(y, th[ii]) * F.row(ii).transpose();
      hess.noalias() += w[i] * spec.loss.d2(y, th[ii]) * F.row(ii).transpose() * F.row(ii);
    }
  };

  constexpr int kMaxIter = 200;
  int it = 0;
  derivatives(fit.coefficients);
  while (grad.norm() > 1e-10) {
    if (++it > kMaxIter)
      throw NumericalError("mest_fit: no convergence after 200 Newton steps (gradient norm " +
                           std::to_string(grad.norm()) + ")");
    Eigen::LDLT<MatrixXd> ldlt(hess);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
      throw NumericalError("mest_fit: Hessian is not positive definite");
    const VectorXd step = ldlt.solve(grad);
    const double q0 = objective(fit.coefficients);
    double t = 1.0;
    VectorXd next = fit.coefficients - step;
    while (objective(next) > q0 + 1e-14 * std::abs(q0) && t > 1e-8) {
      t *= 0.5;
      next = fit.coefficients - t * step;
    }
    fit.coefficients = next;
    derivatives(fit.coefficients);
  }
  fit.iterations = it;
  fit.gradient_norm = grad.norm();
  fit.Delta = hess;

  const VectorXd th = F * fit.coefficients;
  fit.scores.resize(static_cast<Index>(n), K);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Index>(i);
    fit.scores.row(ii) = spec.loss.d1(sample(i, 0), th[ii]) * F.row(ii);
  }
  VectorXd mean = VectorXd::Zero(K);
  for (std::size_t i = 0; i < n; ++i) mean += w[i] * fit.scores.row(static_cast<Index>(i)).transpose();
  fit.Sigma = MatrixXd::Zero(K, K);
  for (std::size_t i = 0; i < n; ++i) {
    const VectorXd d = fit.scores.row(static_cast<Index>(i)).transpose() - mean;
    fit.Sigma.noalias() += w[i] * d * d.transpose();
  }
  return fit;
}

VectorXd mest_derivative(const MestFit& fit, const EmpiricalSample& p, const EmpiricalSample& q) {
  check_mest_sample(p);
  check_mest_sample(q);
  VectorXd diff = VectorXd::Zero(static_cast<Index>(fit.k));
  auto accumulate = [&](const EmpiricalSample& s, double sign) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const VectorXd kap = fit.features(s(i, 1));
      diff += sign * s.weights()[i] * fit.spec.loss.d1(s(i, 0), kap.dot(fit.coefficients)) * kap;
    }
  };
  accumulate(q, 1.0);
  accumulate(p, -1.0);
  return -fit.Delta.ldlt().solve(diff);
}

MatrixXd mest_influence(const MestFit& fit, const EmpiricalSample& sample) {
  const auto n = static_cast<Index>(sample.size());
  VectorXd mean = VectorXd::Zero(static_cast<Index>(fit.k));
  for (Index i = 0; i < n; ++i) mean += sample.weights()[static_cast<std::size_t>(i)] * fit.scores.row(i).transpose();
  const MatrixXd centered = fit.scores.rowwise() - mean.transpose();
  return -fit.Delta.ldlt().solve(centered.transpose()).transpose();
}

namespace {

MatrixXd sandwich(const MestFit& fit) {
  const auto ldlt = fit.Delta.ldlt();
  const MatrixXd A = ldlt.solve(fit.Sigma);
  const MatrixXd S = ldlt.solve(A.transpose());
  return 0.5 * (S + S.transpose());
}

bool sigma_degenerate(const MestFit& fit) {
  return !(fit.Sigma.trace() > 1e-14 * std::max(1.0, fit.Delta.trace() * fit.Delta.trace()));
}

}  // namespace

SigmaProfile mest_sigma_profile(const MestFit& fit, const std::vector<double>& grid) {
  SigmaProfile out;
  out.sigma.assign(grid.size(), 0.0);
  if (sigma_degenerate(fit)) {
    out.degenerate = true;
    return out;
  }
  const MatrixXd S = sandwich(fit);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const VectorXd kap = fit.features(grid[g]);
    out.sigma[g] = std::sqrt(std::max(kap.dot(S * kap), 0.0));
  }
  return out;
}

BandResult mest_uniform_band(const MestFit& fit, std::size_t n, const std::vector<double>& grid, double alpha,
                             std::size_t n_sims, std::uint64_t seed, BandNorm norm) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("mest_uniform_band: alpha must lie in (0, 1]");
  if (n_sims < 1) throw std::domain_error("mest_uniform_band: n_sims must be >= 1");
  if (grid.empty()) throw std::domain_error("mest_uniform_band: empty evaluation grid");
  BandResult band;
  band.grid = grid;
  const auto profile = mest_sigma_profile(fit, grid);
  band.sigma = profile.sigma;
  band.degenerate = profile.degenerate;
  band.center.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) band.center[g] = fit(grid[g]);

  if (!profile.degenerate) {
    const auto K = static_cast<Index>(fit.k);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sandwich(fit));
    const MatrixXd root = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    MatrixXd kap(static_cast<Index>(grid.size()), K);
    for (std::size_t g = 0; g < grid.size(); ++g) kap.row(static_cast<Index>(g)) = fit.features(grid[g]);
    const MatrixXd loadings = kap * root;
    std::vector<double> wq(grid.size(), 1.0);
    if (norm == BandNorm::L2 && grid.size() > 1) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double left = g > 0 ? grid[g] - grid[g - 1] : 0.0;
        const double right = g + 1 < grid.size() ? grid[g + 1] - grid[g] : 0.0;
        wq[g] = 0.5 * (left + right);
      }
    }
    band.simulated.resize(n_sims);
    VectorXd xi(K);
    for (std::size_t s = 0; s < n_sims; ++s) {
      CounterRng rng(hash_combine(seed, s));
      for (Index j = 0; j < K; ++j) xi[j] = rng.normal();
      const VectorXd path = loadings * xi;
      double stat = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        if (!(band.sigma[g] > 0.0)) continue;
        const double t = path[static_cast<Index>(g)] / band.sigma[g];
        stat = norm == BandNorm::Sup ? std::max(stat, std::abs(t)) : stat + wq[g] * t * t;
      }
      band.simulated[s] = norm == BandNorm::Sup ? stat : std::sqrt(stat);
    }
    std::sort(band.simulated.begin(), band.simulated.end());
    const double level = 1.0 - alpha;
    const auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n_sims)));
    band.quantile = rank == 0 ? 0.0 : band.simulated[std::min(rank, n_sims) - 1];
  }

  const double scale = band.quantile / std::sqrt(static_cast<double>(n));
  band.lower.resize(grid.size());
  band.upper.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    band.lower[g] = band.center[g] - scale * band.sigma[g];
    band.upper[g] = band.center[g] + scale * band.sigma[g];
  }
  return band;
}

std::vector<double> mest_gamma_modulus(const MestFit& fit, const EmpiricalSample& sample,
                                       const std::vector<double>& s_grid, std::uint64_t seed,
                                       std::size_t directions) {
  for (std::size_t i = 0; i < s_grid.size(); ++i)
    if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1])))
      throw std::domain_error("mest_gamma_modulus: s-grid must be positive and increasing");
  const auto K = static_cast<Index>(fit.k);
  const double base = mest_criterion(sample, fit.family, fit.k, fit.spec, fit.coefficients);
  // Unit-G-norm direction from an arbitrary vector.
  auto normalize = [&](VectorXd d) {
    const double len = std::sqrt(d.dot(fit.gram * d));
    return VectorXd(d / len);
  };
  auto gap = [&](const VectorXd& dir, double s) {
    return mest_criterion(sample, fit.family, fit.k, fit.spec, fit.coefficients + s * dir) - base;
  };

  std::vector<double> raw(s_grid.size());
  for (std::size_t si = 0; si < s_grid.size(); ++si) {
    const double s = s_grid[si];
    CounterRng rng(hash_combine(seed, si));
    VectorXd best_dir;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < directions; ++r) {
      VectorXd d(K);
      for (Index j = 0; j < K; ++j) d[j] = rng.normal();
      d = normalize(d);
      const double v = gap(d, s);
      if (v < best) {
        best = v;
        best_dir = d;
      }
    }
    for (double eta = 0.5; eta > 1e-7; eta *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (Index j = 0; j < K; ++j)
          for (double sign : {1.0, -1.0}) {
            VectorXd d = best_dir;
            d[j] += sign * eta;
            if (d.norm() == 0.0) continue;
            d = normalize(d);
            const double v = gap(d, s);
            if (v < best - 1e-15 * std::abs(best)) {
              best = v;
              best_dir = d;
              improved = true;
            }
          }
      }
    }
    raw[si] = best / s;
  }
  std::vector<double> gamma(raw.size());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = raw.size(); i-- > 0;) {
    running = std::min(running, raw[i]);
    gamma[i] = running;
  }
  return gamma;
}

}  // namespace regkit
