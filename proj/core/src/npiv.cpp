#include "regkit/npiv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regkit/errors.hpp"

namespace regkit {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_npiv_sample(const EmpiricalSample& s) {
  if (s.dim() != 3) throw std::domain_error("NPIV sample must have columns (Y, W, X)");
}

// Piecewise-linear interpolation on the uniform grid over [0, 1].
double hat_eval(const VectorXd& values, double w) {
  const Index m = values.size();
  if (m == 1) return values[0];
  const double pos = std::clamp(w, 0.0, 1.0) * static_cast<double>(m - 1);
  const Index j = std::min<Index>(static_cast<Index>(pos), m - 2);
  const double th = pos - static_cast<double>(j);
  return (1.0 - th) * values[j] + th * values[j + 1];
}

VectorXd sieve_bias_moment(const NpivFit& fit, const EmpiricalSample& sample, const BiasProxy& proxy) {
  if (proxy.kind == BiasProxy::Kind::MomentResidual) return fit.moment - fit.Quv * fit.coefficients;
  VectorXd e = VectorXd::Zero(static_cast<Index>(fit.basis.J));
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = sample(i, 1), x = sample(i, 2);
    const double target = proxy.kind == BiasProxy::Kind::Analytic ? proxy.truth(w) : (*proxy.larger)(w);
    e += sample.weights()[i] * (target - fit(w)) * fit.basis.u(x);
  }
  return e;
}

}  // namespace

double NpivFit::operator()(double w) const {
  if (method == NpivMethod::Sieve) return basis.v(w).dot(coefficients);
  return hat_eval(coefficients, w);
}

NpivFit npiv_sieve_fit(const EmpiricalSample& sample, const SieveBasis& basis) {
  check_npiv_sample(sample);
  basis.validate();
  if (sample.size() <= basis.J) throw std::domain_error("npiv_sieve_fit: need n > J");
  const auto J = static_cast<Index>(basis.J), L = static_cast<Index>(basis.L);
  NpivFit fit;
  fit.method = NpivMethod::Sieve;
  fit.k = static_cast<double>(basis.L);
  fit.basis = basis;
  fit.Quv = MatrixXd::Zero(J, L);
  fit.moment = VectorXd::Zero(J);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double wi = sample.weights()[i];
    const VectorXd u = basis.u(sample(i, 2));
    fit.Quv.noalias() += wi * u * basis.v(sample(i, 1)).transpose();
    fit.moment += wi * sample(i, 0) * u;
  }
  fit.system = fit.Quv.transpose() * fit.Quv;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(fit.system, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < 1e-10)
    throw IllPosedError("npiv_sieve_fit: Q_uv'Q_uv is singular at L = " + std::to_string(basis.L));
  fit.coefficients = fit.system.ldlt().solve(fit.Quv.transpose() * fit.moment);
  return fit;
}

InfluenceTerms npiv_sieve_influence_terms(const NpivFit& fit, const EmpiricalSample& sample,
                                          const VectorXd& pi_coeffs, const BiasProxy& proxy,
                                          const EmpiricalSample& at) {
  check_npiv_sample(at);
  if (fit.method != NpivMethod::Sieve) throw std::invalid_argument("npiv_sieve_influence: not a sieve fit");
  if (pi_coeffs.size() != static_cast<Index>(fit.basis.L))
    throw std::invalid_argument("npiv_sieve_influence: pi_coeffs must have length L");
  const VectorXd a = fit.system.ldlt().solve(pi_coeffs);
  const VectorXd Qa = fit.Quv * a;
  const VectorXd e = sieve_bias_moment(fit, sample, proxy);
  InfluenceTerms t{VectorXd(static_cast<Index>(at.size())), VectorXd(static_cast<Index>(at.size()))};
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double y = at(i, 0), w = at(i, 1), x = at(i, 2);
    const VectorXd u = fit.basis.u(x);
    const VectorXd v = fit.basis.v(w);
    t.term1[static_cast<Index>(i)] = (y - v.dot(fit.coefficients)) * u.dot(Qa);
    t.term2[static_cast<Index>(i)] = v.dot(a) * u.dot(e);
  }
  return t;
}

VectorXd npiv_sieve_influence_raw(const NpivFit& fit, const EmpiricalSample& sample, const VectorXd& pi_coeffs,
                                  const BiasProxy& proxy, const EmpiricalSample& at) {
  auto t = npiv_sieve_influence_terms(fit, sample, pi_coeffs, proxy, at);
  return t.term1 + t.term2;
}

InfluenceEvaluation npiv_sieve_influence(const NpivFit& fit, const EmpiricalSample& sample,
                                         const VectorXd& pi_coeffs, const BiasProxy& proxy) {
  const VectorXd raw = npiv_sieve_influence_raw(fit, sample, pi_coeffs, proxy, sample);
  return make_influence({raw.data(), raw.data() + raw.size()}, sample.weights());
}

NpivFit npiv_tikhonov_fit(const EmpiricalSample& sample, const TikhonovSpec& spec) {
  check_npiv_sample(sample);
  if (!(spec.lambda > 0.0)) throw std::domain_error("npiv_tikhonov_fit: lambda must be positive");
  if (!(spec.k > 0.0)) throw std::domain_error("npiv_tikhonov_fit: k must be positive");
  if (spec.grid_size < 2) throw std::domain_error("npiv_tikhonov_fit: grid needs at least 2 points");
  const auto m = static_cast<Index>(spec.grid_size);
  NpivFit fit;
  fit.method = NpivMethod::Tikhonov;
  fit.k = spec.k;
  fit.tikhonov = spec;
  fit.grid = VectorXd::LinSpaced(m, 0.0, 1.0);
  const double step = 1.0 / static_cast<double>(m - 1);
  fit.weights = VectorXd::Constant(m, step);
  fit.weights[0] = fit.weights[m - 1] = 0.5 * step;

  MatrixXd T = MatrixXd::Zero(m, m);
  VectorXd r = VectorXd::Zero(m);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double y = sample(i, 0), w = sample(i, 1), x = sample(i, 2), wi = sample.weights()[i];
    const double pos = std::clamp(w, 0.0, 1.0) * static_cast<double>(m - 1);
    const Index j = std::min<Index>(static_cast<Index>(pos), m - 2);
    const double th = pos - static_cast<double>(j);
    for (Index a = 0; a < m; ++a) {
      const double kv = wi * spec.kernel.kappa_k(spec.k, x - fit.grid[a]);
      if (kv == 0.0) continue;
      T(a, j) += kv * (1.0 - th);
      T(a, j + 1) += kv * th;
      r[a] += kv * y;
    }
  }
  const auto Om = fit.weights.asDiagonal();
  fit.system = T.transpose() * Om * T;
  fit.system.diagonal() += spec.lambda * fit.weights;
  Eigen::LLT<MatrixXd> llt(fit.system);
  if (llt.info() != Eigen::Success) throw IllPosedError("npiv_tikhonov_fit: normal equations not positive definite");
  fit.coefficients = llt.solve(T.transpose() * (Om * r));
  fit.Quv = std::move(T);
  fit.moment = std::move(r);
  return fit;
}

InfluenceTerms npiv_tikhonov_influence_terms(const NpivFit& fit, const EmpiricalSample& sample,
                                             const VectorXd& pi_grid, const BiasProxy& proxy,
                                             const EmpiricalSample& at) {
  check_npiv_sample(at);
  if (fit.method != NpivMethod::Tikhonov) throw std::invalid_argument("npiv_tikhonov_influence: not a Tikhonov fit");
  const Index m = fit.grid.size();
  if (pi_grid.size() != m) throw std::invalid_argument("npiv_tikhonov_influence: pi must live on the fit grid");
  (void)sample;
  const VectorXd v = fit.system.llt().solve(fit.weights.cwiseProduct(pi_grid));
  const VectorXd Tv = fit.Quv * v;
  VectorXd e;
  switch (proxy.kind) {
    case BiasProxy::Kind::MomentResidual: e = fit.moment - fit.Quv * fit.coefficients; break;
    case BiasProxy::Kind::Analytic:
    case BiasProxy::Kind::LargerFit: {
      VectorXd target(m);
      for (Index a = 0; a < m; ++a)
        target[a] = proxy.kind == BiasProxy::Kind::Analytic ? proxy.truth(fit.grid[a]) : (*proxy.larger)(fit.grid[a]);
      e = fit.Quv * (target - fit.coefficients);
      break;
    }
  }
  const VectorXd wTv = fit.weights.cwiseProduct(Tv);
  const VectorXd we = fit.weights.cwiseProduct(e);
  InfluenceTerms t{VectorXd(static_cast<Index>(at.size())), VectorXd(static_cast<Index>(at.size()))};
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double y = at(i, 0), w = at(i, 1), x = at(i, 2);
    double s1 = 0.0, s2 = 0.0;
    for (Index a = 0; a < m; ++a) {
      const double kv = fit.tikhonov.kernel.kappa_k(fit.k, x - fit.grid[a]);
      s1 += wTv[a] * kv;
      s2 += we[a] * kv;
    }
    t.term1[static_cast<Index>(i)] = s1 * (y - fit(w));
    t.term2[static_cast<Index>(i)] = hat_eval(v, w) * s2;
  }
  return t;
}

VectorXd npiv_tikhonov_influence_raw(const NpivFit& fit, const EmpiricalSample& sample, const VectorXd& pi_grid,
                                     const BiasProxy& proxy, const EmpiricalSample& at) {
  auto t = npiv_tikhonov_influence_terms(fit, sample, pi_grid, proxy, at);
  return t.term1 + t.term2;
}

InfluenceEvaluation npiv_tikhonov_influence(const NpivFit& fit, const EmpiricalSample& sample,
                                            const VectorXd& pi_grid, const BiasProxy& proxy) {
  const VectorXd raw = npiv_tikhonov_influence_raw(fit, sample, pi_grid, proxy, sample);
  return make_influence({raw.data(), raw.data() + raw.size()}, sample.weights());
}

double npiv_gamma(const NpivFit& fit, const VectorXd& pi) {
  if (fit.method == NpivMethod::Sieve) return pi.dot(fit.coefficients);
  return (fit.weights.cwiseProduct(pi)).dot(fit.coefficients);
}

FunctionalEstimate npiv_functional(const NpivFit& fit, const EmpiricalSample& sample, const VectorXd& pi,
                                   const BiasProxy& proxy) {
  FunctionalEstimate out;
  out.value = npiv_gamma(fit, pi);
  out.influence = fit.method == NpivMethod::Sieve ? npiv_sieve_influence(fit, sample, pi, proxy)
                                                  : npiv_tikhonov_influence(fit, sample, pi, proxy);
  out.standard_error = out.influence.norm() / std::sqrt(static_cast<double>(sample.size()));
  return out;
}

VectorXd pi_on_grid(const NpivFit& fit, const std::function<double(double)>& pi) {
  if (fit.method != NpivMethod::Tikhonov) throw std::invalid_argument("pi_on_grid: not a Tikhonov fit");
  VectorXd out(fit.grid.size());
  for (Index a = 0; a < fit.grid.size(); ++a) out[a] = pi(fit.grid[a]);
  return out;
}

SieveBasis NpivSieveFamily::basis_for(double k) const {
  const auto L = static_cast<std::size_t>(std::llround(k));
  return SieveBasis::with_L(family_, L, j_ratio_ * L);
}

ParameterValue NpivSieveFamily::evaluate(double k, const EmpiricalSample& sample) const {
  const auto basis = basis_for(k);
  return npiv_gamma(npiv_sieve_fit(sample, basis), basis_projection(family_, basis.L, pi_));
}

std::optional<InfluenceEvaluation> NpivSieveFamily::influence(double k, const EmpiricalSample& sample) const {
  const auto basis = basis_for(k);
  return npiv_sieve_influence(npiv_sieve_fit(sample, basis), sample, basis_projection(family_, basis.L, pi_));
}

}  // namespace regkit
