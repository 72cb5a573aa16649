#pragma once

#include <functional>
#include <optional>

#include "regkit/sample.hpp"

namespace regkit {

/**
 * A tuning-indexed family k ↦ ψ_k. Stochastic families (bootstrap laws)
 * hold their seed, so evaluate() is a pure function of (k, sample).
 */
class Regularization {
 public:
  virtual ~Regularization() = default;

  virtual ParameterValue evaluate(double k, const EmpiricalSample& sample) const = 0;

  /// The ‖·‖_Θ used for selection. Must be a pseudometric.
  virtual double distance(const ParameterValue& a, const ParameterValue& b) const {
    return parameter_distance(a, b);
  }

  virtual std::optional<InfluenceEvaluation> influence(double /*k*/, const EmpiricalSample& /*sample*/) const {
    return std::nullopt;
  }
};

/// Regularization backed by callables; handy for synthetic families in tests and experiments.
class FunctionFamily final : public Regularization {
 public:
  using Eval = std::function<ParameterValue(double, const EmpiricalSample&)>;
  using Dist = std::function<double(const ParameterValue&, const ParameterValue&)>;
  using Infl = std::function<InfluenceEvaluation(double, const EmpiricalSample&)>;

  explicit FunctionFamily(Eval eval, Dist dist = {}, Infl infl = {})
      : eval_(std::move(eval)), dist_(std::move(dist)), infl_(std::move(infl)) {}

  ParameterValue evaluate(double k, const EmpiricalSample& sample) const override;
  double distance(const ParameterValue& a, const ParameterValue& b) const override;
  std::optional<InfluenceEvaluation> influence(double k, const EmpiricalSample& sample) const override;

 private:
  Eval eval_;
  Dist dist_;
  Infl infl_;
};

}  // namespace regkit
