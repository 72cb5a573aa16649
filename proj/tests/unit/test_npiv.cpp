#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "regkit/designs.hpp"
#include "regkit/errors.hpp"
#include "regkit/npiv.hpp"

using namespace regkit;
using Eigen::VectorXd;

namespace {

// Exogenous design: W = X ~ U(0,1), Y = f(W) + noise scaled by X.
EmpiricalSample exogenous_sample(std::uint64_t seed, std::size_t n, const std::function<double(double)>& f,
                                 double noise = 0.3) {
  CounterRng rng(seed);
  std::vector<double> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    rows.insert(rows.end(), {f(x) + noise * (0.5 + x) * rng.normal(), x, x});
  }
  return EmpiricalSample(std::move(rows), 3);
}

EmpiricalSample design_sample(std::uint64_t seed, std::size_t n) {
  CounterRng rng(seed);
  return NpivDesign{}.draw(n, rng);
}

double sup_abs(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SieveBasis, OrthonormalGram) {
  for (auto fam : {BasisFamily::Cosine, BasisFamily::ShiftedLegendre}) {
    const auto G = basis_gram(fam, 8);
    EXPECT_LT((G - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10) << to_string(fam);
    EXPECT_EQ(basis_family_from_string(to_string(fam)), fam);
  }
  EXPECT_THROW(SieveBasis::with_L(BasisFamily::Cosine, 3, 2).validate(), std::exception);
}

TEST(NpivSieveFit, ConstantBasisGivesMeanOutcome) {
  const auto s = design_sample(1, 300);
  const auto fit = npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, 1, 1));
  double ybar = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) ybar += s(i, 0) / 300.0;
  EXPECT_NEAR(fit.coefficients[0], ybar, 1e-13);
  EXPECT_NEAR(fit(0.3), ybar, 1e-13);
  EXPECT_NEAR(fit(0.9), ybar, 1e-13);
}

TEST(NpivSieveFit, ExogenousSquareCaseIsLeastSquares) {
  for (auto fam : {BasisFamily::Cosine, BasisFamily::ShiftedLegendre}) {
    const std::size_t L = 4;
    auto h = [&](double w) { return basis_values(fam, L, w).dot((VectorXd(4) << 0.2, -1.0, 0.5, 0.3).finished()); };
    const auto s = exogenous_sample(2, 500, h);
    const auto fit = npiv_sieve_fit(s, SieveBasis::with_L(fam, L, L));
    Eigen::MatrixXd V(500, L);
    VectorXd y(500);
    for (std::size_t i = 0; i < 500; ++i) {
      V.row(static_cast<Eigen::Index>(i)) = basis_values(fam, L, s(i, 1)).transpose();
      y[static_cast<Eigen::Index>(i)] = s(i, 0);
    }
    const VectorXd ls = V.colPivHouseholderQr().solve(y);
    EXPECT_LT((fit.coefficients - ls).cwiseAbs().maxCoeff(), 1e-8) << to_string(fam);
  }
}

TEST(NpivSieveFit, FirstOrderCondition) {
  const auto s = design_sample(3, 400);
  const auto fit = npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, 3));
  const VectorXd foc = fit.Quv.transpose() * (fit.moment - fit.Quv * fit.coefficients);
  EXPECT_LT(sup_abs(foc), 1e-12);
}

TEST(NpivSieveFit, Errors) {
  const auto s = design_sample(4, 6);
  EXPECT_THROW(npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, 4)), std::domain_error);
  std::vector<double> rows;
  for (int i = 0; i < 20; ++i) rows.insert(rows.end(), {1.0 * i, 0.5, 0.05 * i});
  EXPECT_THROW(npiv_sieve_fit(EmpiricalSample(rows, 3), SieveBasis::with_L(BasisFamily::Cosine, 2)), IllPosedError);
  EXPECT_THROW(npiv_sieve_fit(EmpiricalSample({1.0, 2.0}), SieveBasis::with_L(BasisFamily::Cosine, 1)),
               std::domain_error);
}

TEST(NpivSieveInfluence, ConstantBasisReduction) {
  const auto s = design_sample(5, 200);
  const auto fit = npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, 1, 1));
  const VectorXd pi = VectorXd::Ones(1);
  const auto terms = npiv_sieve_influence_terms(fit, s, pi, BiasProxy::moment_residual(), s);
  EXPECT_LT(sup_abs(terms.term2), 1e-14);
  const auto inf = npiv_sieve_influence(fit, s, pi);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(inf.values[i], s(i, 0) - fit.coefficients[0], 1e-12);

  const auto est = npiv_functional(fit, s, pi);
  double ybar = 0.0, var = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) ybar += s(i, 0) / 200.0;
  for (std::size_t i = 0; i < s.size(); ++i) var += (s(i, 0) - ybar) * (s(i, 0) - ybar) / 200.0;
  EXPECT_NEAR(est.value, ybar, 1e-13);
  EXPECT_NEAR(est.standard_error, std::sqrt(var / 200.0), 1e-13);
}

TEST(NpivSieveInfluence, CenteredAndBoundedInWellPosedCase) {
  auto h = [](double w) { return std::sin(3.0 * w); };
  const auto s = exogenous_sample(6, 2000, h);
  double first = 0.0;
  for (std::size_t L : {1u, 2u, 4u, 8u}) {
    const auto fit = npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, L, L));
    const auto inf = npiv_sieve_influence(fit, s, basis_projection(BasisFamily::Cosine, L, [](double) { return 1.0; }));
    double sum = 0.0;
    for (double v : inf.values) sum += v;
    EXPECT_NEAR(sum, 0.0, 1e-10);
    if (L == 1) first = inf.norm();
    EXPECT_LE(inf.norm(), 2.0 * first) << "L " << L;
  }
}

TEST(NpivSieveInfluence, SecondTermVanishesUnderExactProxy) {
  const NpivDesign d;
  const auto s = design_sample(7, 3000);
  const std::size_t L = static_cast<std::size_t>(d.theta.size());
  auto fit = npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, L));
  fit.coefficients = d.theta;  // ψ_k(P) = h when h lies in the span
  const VectorXd pi = basis_projection(BasisFamily::Cosine, L, [](double w) { return w; });
  const auto terms = npiv_sieve_influence_terms(fit, s, pi, BiasProxy::analytic([&](double w) { return d.h(w); }), s);
  EXPECT_LT(sup_abs(terms.term2), 1e-13);
  EXPECT_GT(sup_abs(terms.term1), 0.1);
}

TEST(NpivSieveInfluence, FiniteDifferenceOracle) {
  for (int inst = 0; inst < 8; ++inst) {
    const auto fam = inst % 2 ? BasisFamily::ShiftedLegendre : BasisFamily::Cosine;
    const std::size_t L = 1 + inst % 4;
    const auto basis = SieveBasis::with_L(fam, L);
    const auto P = design_sample(100 + inst, 200);
    const auto Q = design_sample(200 + inst, 80);
    const VectorXd pi = basis_projection(fam, L, [](double w) { return 1.0 + w * w; });
    const auto fit = npiv_sieve_fit(P, basis);
    const VectorXd raw_q = npiv_sieve_influence_raw(fit, P, pi, BiasProxy::moment_residual(), Q);
    const VectorXd raw_p = npiv_sieve_influence_raw(fit, P, pi, BiasProxy::moment_residual(), P);
    const double analytic = raw_q.mean() - raw_p.mean();
    auto gamma_t = [&](double t) { return npiv_gamma(npiv_sieve_fit(EmpiricalSample::mixture(P, Q, t), basis), pi); };
    EXPECT_NEAR(oracle::richardson_derivative(gamma_t) / analytic, 1.0, 1e-4) << "instance " << inst;
  }
}

TEST(NpivTikhonov, FiniteDifferenceOracle) {
  for (int inst = 0; inst < 6; ++inst) {
    TikhonovSpec spec;
    spec.k = 4.0 + 3.0 * inst;
    spec.lambda = inst % 2 ? 1e-2 : 1e-4;
    spec.kernel.base = inst % 3 == 2 ? BaseKernel::Epanechnikov : BaseKernel::Gaussian;
    spec.grid_size = 41;
    const auto P = design_sample(300 + inst, 150);
    const auto Q = design_sample(400 + inst, 60);
    const auto fit = npiv_tikhonov_fit(P, spec);
    const VectorXd pi = pi_on_grid(fit, [](double w) { return std::cos(2.0 * w); });
    const VectorXd raw_q = npiv_tikhonov_influence_raw(fit, P, pi, BiasProxy::moment_residual(), Q);
    const VectorXd raw_p = npiv_tikhonov_influence_raw(fit, P, pi, BiasProxy::moment_residual(), P);
    const double analytic = raw_q.mean() - raw_p.mean();
    auto gamma_t = [&](double t) { return npiv_gamma(npiv_tikhonov_fit(EmpiricalSample::mixture(P, Q, t), spec), pi); };
    EXPECT_NEAR(oracle::richardson_derivative(gamma_t) / analytic, 1.0, 1e-4) << "instance " << inst;
  }
}

TEST(NpivTikhonov, RidgeLimit) {
  const auto s = design_sample(8, 300);
  TikhonovSpec spec;
  spec.grid_size = 51;
  spec.lambda = 1e6;
  const double s6 = sup_abs(npiv_tikhonov_fit(s, spec).coefficients);
  spec.lambda = 1e8;
  const double s8 = sup_abs(npiv_tikhonov_fit(s, spec).coefficients);
  EXPECT_LT(s8, 1e-6);
  EXPECT_NEAR(s6 / s8, 100.0, 0.1);
  spec.lambda = 0.0;
  EXPECT_THROW(npiv_tikhonov_fit(s, spec), std::domain_error);
}

TEST(NpivTikhonov, ConcentratedKernelApproachesNadarayaWatson) {
  auto f = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  const auto s = exogenous_sample(9, 5000, f, 0.2);
  TikhonovSpec spec;
  // A grid coarser than the data resolution keeps T̂ well conditioned.
  spec.k = 40.0;
  spec.lambda = 1e-5;
  spec.kernel.base = BaseKernel::Epanechnikov;
  spec.grid_size = 31;
  const auto fit = npiv_tikhonov_fit(s, spec);
  double worst = 0.0;
  for (double x = 0.1; x <= 0.9; x += 0.01) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double kv = spec.kernel.kappa_k(spec.k, x - s(i, 2));
      num += kv * s(i, 0);
      den += kv;
    }
    worst = std::max(worst, std::abs(fit(x) - num / den));
  }
  EXPECT_LE(worst, 5e-2);
}

TEST(NpivTikhonov, DeterministicRefit) {
  const auto s = design_sample(10, 300);
  TikhonovSpec spec;
  const auto a = npiv_tikhonov_fit(s, spec), b = npiv_tikhonov_fit(s, spec);
  EXPECT_EQ(a.coefficients, b.coefficients);
}

TEST(NpivTikhonov, TinyPenaltySuppressesSecondTerm) {
  auto f = [](double x) { return 1.0 + x; };
  const auto s = exogenous_sample(11, 2000, f);
  TikhonovSpec spec;
  // Concentrated compact kernel: T̂ is close to banded and far from singular.
  spec.k = 40.0;
  spec.lambda = 1e-8;
  spec.kernel.base = BaseKernel::Epanechnikov;
  spec.grid_size = 31;
  const auto fit = npiv_tikhonov_fit(s, spec);
  const VectorXd pi = pi_on_grid(fit, [](double) { return 1.0; });
  const auto t = npiv_tikhonov_influence_terms(fit, s, pi, BiasProxy::moment_residual(), s);
  EXPECT_LT(t.term2.norm() / t.term1.norm(), 1e-3);
  const auto inf = npiv_tikhonov_influence(fit, s, pi);
  double sum = 0.0;
  for (double v : inf.values) sum += v;
  EXPECT_NEAR(sum, 0.0, 1e-9);
}

TEST(NpivFunctional, ZeroAndAdditiveInPi) {
  const auto s = design_sample(12, 400);
  const auto fit = npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, 3));
  const auto zero = npiv_functional(fit, s, VectorXd::Zero(3));
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_EQ(zero.standard_error, 0.0);
  const VectorXd p1 = basis_projection(BasisFamily::Cosine, 3, [](double w) { return w; });
  const VectorXd p2 = basis_projection(BasisFamily::Cosine, 3, [](double w) { return std::exp(-w); });
  EXPECT_NEAR(npiv_gamma(fit, p1 + p2), npiv_gamma(fit, p1) + npiv_gamma(fit, p2), 1e-14);

  TikhonovSpec spec;
  const auto tf = npiv_tikhonov_fit(s, spec);
  const VectorXd g1 = pi_on_grid(tf, [](double w) { return w; }), g2 = pi_on_grid(tf, [](double) { return 2.0; });
  EXPECT_NEAR(npiv_gamma(tf, g1 + g2), npiv_gamma(tf, g1) + npiv_gamma(tf, g2), 1e-14);
}

TEST(NpivSieveFamily, EvaluatesFunctional) {
  const auto s = design_sample(13, 500);
  auto pi = [](double w) { return w; };
  const NpivSieveFamily fam(BasisFamily::Cosine, pi);
  const double direct = npiv_gamma(npiv_sieve_fit(s, SieveBasis::with_L(BasisFamily::Cosine, 2, 4)),
                                   basis_projection(BasisFamily::Cosine, 2, pi));
  EXPECT_DOUBLE_EQ(std::get<double>(fam.evaluate(2.0, s)), direct);
  ASSERT_TRUE(fam.influence(2.0, s).has_value());
}

TEST(NpivDesign, OutcomeVarianceMatchesSimulation) {
  const NpivDesign d;
  const auto s = design_sample(14, 400000);
  double m = 0.0, v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) m += s(i, 0);
  m /= static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v += (s(i, 0) - m) * (s(i, 0) - m);
  v /= static_cast<double>(s.size());
  // Relative MC error of a variance at n = 4e5 is about √(2/n) ≈ 0.0022.
  EXPECT_NEAR(v / d.outcome_variance(), 1.0, 0.01);
  EXPECT_NEAR(m, d.functional([](double) { return 1.0; }), 0.01);
}
