#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "regkit/designs.hpp"
#include "regkit/errors.hpp"
#include "regkit/mest.hpp"

using namespace regkit;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

EmpiricalSample regression_sample(std::uint64_t seed, std::size_t n, double noise = 1.0) {
  CounterRng rng(seed);
  RegressionDesign d;
  d.noise = noise;
  return d.draw(n, rng);
}

EmpiricalSample logistic_sample(std::uint64_t seed, std::size_t n) {
  CounterRng rng(seed);
  std::vector<double> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double p = 1.0 / (1.0 + std::exp(-(0.3 + 2.0 * std::cos(3.0 * x))));
    rows.insert(rows.end(), {rng.uniform() < p ? 1.0 : 0.0, x});
  }
  return EmpiricalSample(std::move(rows), 2);
}

LossSpec squared(double lambda = 0.0) { return {Loss{LossKind::Squared}, lambda}; }

std::vector<double> eval_grid(std::size_t m) {
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  return g;
}

}  // namespace

TEST(MestFit, ConstantBasisSquaredLoss) {
  const auto s = regression_sample(1, 200);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 1, squared());
  double ybar = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) ybar += s(i, 0) / 200.0;
  EXPECT_NEAR(fit.coefficients[0], ybar, 1e-12);
  EXPECT_NEAR(fit.Delta(0, 0), 2.0, 1e-14);
  for (std::size_t i = 0; i < s.size(); ++i)
    EXPECT_NEAR(fit.scores(static_cast<Eigen::Index>(i), 0), -2.0 * (s(i, 0) - ybar), 1e-12);
}

TEST(MestFit, LeastSquaresOracle) {
  for (auto fam : {BasisFamily::Cosine, BasisFamily::ShiftedLegendre}) {
    const auto s = regression_sample(2, 300);
    const std::size_t k = 6;
    const auto fit = mest_fit(s, fam, k, squared());
    MatrixXd X(300, k);
    VectorXd y(300);
    for (std::size_t i = 0; i < 300; ++i) {
      X.row(static_cast<Eigen::Index>(i)) = basis_values(fam, k, s(i, 1)).transpose();
      y[static_cast<Eigen::Index>(i)] = s(i, 0);
    }
    const VectorXd ls = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    EXPECT_LT((fit.coefficients - ls).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(fit.first_order_condition(s).norm(), 1e-8);
  }
}

TEST(MestFit, RidgeLimitAndErrors) {
  const auto s = regression_sample(3, 100);
  EXPECT_LT(mest_fit(s, BasisFamily::Cosine, 4, squared(1e8)).coefficients.norm(), 1e-6);
  EXPECT_LT(mest_fit(s, BasisFamily::Cosine, 4, squared(1e2)).coefficients.norm(),
            mest_fit(s, BasisFamily::Cosine, 4, squared(1.0)).coefficients.norm());
  EXPECT_THROW(mest_fit(regression_sample(4, 4), BasisFamily::Cosine, 4, squared()), std::domain_error);
  EXPECT_EQ(loss_kind_from_string("logistic"), LossKind::Logistic);
  EXPECT_THROW(loss_kind_from_string("hinge"), ConfigError);
}

TEST(MestFit, LogisticFirstOrderConditionAndDefiniteness) {
  const auto s = logistic_sample(5, 800);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 4, {Loss{LossKind::Logistic}, 1e-3});
  EXPECT_LT(fit.first_order_condition(s).norm(), 1e-8);
  EXPECT_LE(fit.gradient_norm, 1e-10);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eD(fit.Delta), eS(fit.Sigma);
  EXPECT_GT(eD.eigenvalues().minCoeff(), 0.0);
  EXPECT_GT(eS.eigenvalues().minCoeff(), -1e-12);
  EXPECT_LT((fit.Delta - fit.Delta.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MestDerivative, SignFromConstantBasisCase) {
  // Regression test for the sign: the mean moves by ȳ_Q - ȳ_P.
  const auto P = regression_sample(6, 120), Q = regression_sample(7, 50, 2.0);
  const auto fit = mest_fit(P, BasisFamily::Cosine, 1, squared());
  double yp = 0.0, yq = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) yp += P(i, 0) / static_cast<double>(P.size());
  for (std::size_t i = 0; i < Q.size(); ++i) yq += Q(i, 0) / static_cast<double>(Q.size());
  EXPECT_NEAR(mest_derivative(fit, P, Q)[0], yq - yp, 1e-12);
}

TEST(MestDerivative, FiniteDifferenceOracle) {
  for (int inst = 0; inst < 8; ++inst) {
    const bool logistic = inst % 2 == 1;
    const auto P = logistic ? logistic_sample(10 + inst, 300) : regression_sample(10 + inst, 150);
    const auto Q = logistic ? logistic_sample(20 + inst, 100) : regression_sample(20 + inst, 60, 1.5);
    const std::size_t k = 2 + inst % 3;
    const LossSpec spec{Loss{logistic ? LossKind::Logistic : LossKind::Squared}, inst % 4 < 2 ? 0.0 : 0.05};
    const auto fit = mest_fit(P, BasisFamily::Cosine, k, spec);
    const VectorXd analytic = mest_derivative(fit, P, Q);
    for (std::size_t j = 0; j < k; ++j) {
      auto cj = [&](double t) {
        return mest_fit(EmpiricalSample::mixture(P, Q, t), BasisFamily::Cosine, k, spec)
            .coefficients[static_cast<Eigen::Index>(j)];
      };
      const double fd = oracle::richardson_derivative(cj);
      EXPECT_NEAR(fd, analytic[static_cast<Eigen::Index>(j)], 1e-4 * std::max(1.0, std::abs(fd)))
          << "instance " << inst << " coordinate " << j;
    }
  }
}

TEST(MestInfluence, CoefficientMeanIsZero) {
  const auto s = regression_sample(30, 250);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 5, squared(0.01));
  const MatrixXd inf = mest_influence(fit, s);
  EXPECT_LT(inf.colwise().mean().cwiseAbs().maxCoeff(), 1e-13);
}

TEST(MestSigma, ConstantBasisIsOutcomeVariance) {
  const auto s = regression_sample(31, 150);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 1, squared());
  double ybar = 0.0, var = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) ybar += s(i, 0) / 150.0;
  for (std::size_t i = 0; i < s.size(); ++i) var += (s(i, 0) - ybar) * (s(i, 0) - ybar) / 150.0;
  const auto prof = mest_sigma_profile(fit, {0.0, 0.4, 1.0});
  for (double sg : prof.sigma) EXPECT_NEAR(sg * sg, var, 1e-12);
  EXPECT_FALSE(prof.degenerate);
}

TEST(MestSigma, OlsSandwichOracleAndScaling) {
  const std::size_t n = 200, k = 4;
  const auto s = regression_sample(32, n);
  const auto fit = mest_fit(s, BasisFamily::ShiftedLegendre, k, squared());
  MatrixXd X(n, k);
  VectorXd e(n);
  for (std::size_t i = 0; i < n; ++i) {
    X.row(static_cast<Eigen::Index>(i)) = basis_values(BasisFamily::ShiftedLegendre, k, s(i, 1)).transpose();
    e[static_cast<Eigen::Index>(i)] = s(i, 0) - fit(s(i, 1));
  }
  const MatrixXd XtXi = (X.transpose() * X).inverse();
  const MatrixXd meat = X.transpose() * e.cwiseAbs2().asDiagonal() * X;
  const auto grid = eval_grid(11);
  const auto prof = mest_sigma_profile(fit, grid);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const VectorXd x = basis_values(BasisFamily::ShiftedLegendre, k, grid[g]);
    const double oracle = static_cast<double>(n) * x.dot(XtXi * meat * XtXi * x);
    EXPECT_NEAR(prof.sigma[g] * prof.sigma[g] / oracle, 1.0, 1e-8);
  }

  std::vector<double> rows;
  for (std::size_t i = 0; i < n; ++i) rows.insert(rows.end(), {-3.0 * s(i, 0), s(i, 1)});
  const auto scaled = mest_sigma_profile(mest_fit(EmpiricalSample(rows, 2), BasisFamily::ShiftedLegendre, k, squared()), grid);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(scaled.sigma[g], 3.0 * prof.sigma[g], 1e-10);
}

TEST(MestSigma, DegenerateData) {
  std::vector<double> rows;
  for (int i = 0; i < 20; ++i) rows.insert(rows.end(), {2.5, 0.05 * i});
  const auto fit = mest_fit(EmpiricalSample(rows, 2), BasisFamily::Cosine, 1, squared());
  const auto prof = mest_sigma_profile(fit, {0.2, 0.8});
  EXPECT_TRUE(prof.degenerate);
  for (double v : prof.sigma) EXPECT_EQ(v, 0.0);
}

TEST(MestBand, ConstantBasisQuantileIsNormal) {
  const auto s = regression_sample(40, 300);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 1, squared());
  const auto band = mest_uniform_band(fit, s.size(), eval_grid(5), 0.05, 100000, 7);
  EXPECT_NEAR(band.quantile, 1.959964, 0.03);
  for (std::size_t g = 0; g < band.grid.size(); ++g)
    EXPECT_NEAR(band.upper[g] - band.center[g], band.quantile * band.sigma[g] / std::sqrt(300.0), 1e-14);
}

TEST(MestBand, LevelOneAndMonotoneWidth) {
  const auto s = regression_sample(41, 300);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 5, squared());
  const auto grid = eval_grid(41);
  const auto zero = mest_uniform_band(fit, s.size(), grid, 1.0, 2000, 3);
  EXPECT_EQ(zero.quantile, 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_EQ(zero.upper[g], zero.lower[g]);
  for (auto norm : {BandNorm::Sup, BandNorm::L2}) {
    const auto wide = mest_uniform_band(fit, s.size(), grid, 0.01, 4000, 3, norm);
    const auto narrow = mest_uniform_band(fit, s.size(), grid, 0.10, 4000, 3, norm);
    EXPECT_GT(wide.quantile, narrow.quantile);
    for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_GE(wide.upper[g] - wide.lower[g], narrow.upper[g] - narrow.lower[g]);
  }
  const auto a = mest_uniform_band(fit, s.size(), grid, 0.05, 2000, 9), b = mest_uniform_band(fit, s.size(), grid, 0.05, 2000, 9);
  EXPECT_EQ(a.simulated, b.simulated);
  EXPECT_THROW(mest_uniform_band(fit, s.size(), grid, 0.0, 2000, 9), std::domain_error);
}

TEST(MestGamma, QuadraticClosedForm) {
  // Squared loss: the gap is ½ dᵀΔd on an exact quadratic, so Γ(s) = s e_min(Δ) / 2.
  const auto s = regression_sample(50, 400);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 3, squared(0.02));
  const double emin = Eigen::SelfAdjointEigenSolver<MatrixXd>(fit.Delta).eigenvalues().minCoeff();
  const std::vector<double> sg{0.1, 0.5, 1.0, 2.0};
  const auto gamma = mest_gamma_modulus(fit, s, sg, 11);
  for (std::size_t i = 0; i < sg.size(); ++i) {
    EXPECT_GE(gamma[i], sg[i] * emin / 2.0 * (1.0 - 1e-9));
    EXPECT_NEAR(gamma[i] / (sg[i] * emin / 2.0), 1.0, 1e-3);
    if (i > 0) EXPECT_GE(gamma[i], gamma[i - 1]);
  }
}

TEST(MestGamma, PurePenaltyIsLinear) {
  const auto s = regression_sample(51, 100);
  const double lambda = 0.3;
  const auto fit = mest_fit(s, BasisFamily::Cosine, 4, {Loss{LossKind::Zero}, lambda});
  EXPECT_LT(fit.coefficients.norm(), 1e-14);
  const std::vector<double> sg{0.25, 1.0, 4.0};
  const auto gamma = mest_gamma_modulus(fit, s, sg, 12);
  for (std::size_t i = 0; i < sg.size(); ++i) EXPECT_NEAR(gamma[i], lambda * sg[i], 1e-10);
}

TEST(MestGamma, LogisticIsMonotone) {
  const auto s = logistic_sample(52, 400);
  const auto fit = mest_fit(s, BasisFamily::Cosine, 3, {Loss{LossKind::Logistic}, 0.01});
  const std::vector<double> sg{0.05, 0.2, 0.5, 1.0, 3.0, 6.0};
  const auto gamma = mest_gamma_modulus(fit, s, sg, 13);
  for (std::size_t i = 0; i < sg.size(); ++i) {
    EXPECT_GT(gamma[i], 0.0);
    if (i > 0) EXPECT_GE(gamma[i], gamma[i - 1]);
  }
}

TEST(MestLoss, LogisticCurvatureIsLipschitz) {
  // |φ''(a) - φ''(b)| ≤ max|φ'''| |a - b| with max|φ'''| = 1/(6√3).
  const Loss l{LossKind::Logistic};
  const double bound = 1.0 / (6.0 * std::sqrt(3.0));
  CounterRng rng(53);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double a = 8.0 * rng.normal(), b = a + 0.5 * rng.normal();
    if (a == b) continue;
    worst = std::max(worst, std::abs(l.d2(0.0, a) - l.d2(0.0, b)) / std::abs(a - b));
  }
  EXPECT_LE(worst, bound * (1.0 + 1e-9));
  EXPECT_GT(worst, 0.9 * bound);
  const Loss sq{LossKind::Squared};
  EXPECT_EQ(sq.d2(1.0, -4.0), sq.d2(0.0, 7.0));
}
