#include "regkit/regularization.hpp"

namespace regkit {

ParameterValue FunctionFamily::evaluate(double k, const EmpiricalSample& sample) const { return eval_(k, sample); }

double FunctionFamily::distance(const ParameterValue& a, const ParameterValue& b) const {
  return dist_ ? dist_(a, b) : parameter_distance(a, b);
}

std::optional<InfluenceEvaluation> FunctionFamily::influence(double k, const EmpiricalSample& sample) const {
  if (!infl_) return std::nullopt;
  return infl_(k, sample);
}

}  // namespace regkit
