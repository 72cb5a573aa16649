#include "regkit/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "regkit/metrics.hpp"

namespace regkit {

EmpiricalSample::EmpiricalSample(std::vector<double> values) : EmpiricalSample(std::move(values), 1) {}

EmpiricalSample::EmpiricalSample(std::vector<double> row_major, std::size_t dim) : d_(dim) {
  if (dim == 0) throw std::domain_error("EmpiricalSample: dimension must be >= 1");
  if (row_major.empty() || row_major.size() % dim != 0)
    throw std::domain_error("EmpiricalSample: need n >= 1 rows of identical dimension");
  data_ = std::move(row_major);
  n_ = data_.size() / d_;
  weights_.assign(n_, 1.0 / static_cast<double>(n_));
}

EmpiricalSample::EmpiricalSample(std::vector<double> data, std::size_t dim, std::vector<double> weights)
    : data_(std::move(data)), weights_(std::move(weights)), n_(weights_.size()), d_(dim), uniform_(false) {}

EmpiricalSample EmpiricalSample::mixture(const EmpiricalSample& p, const EmpiricalSample& q, double t) {
  if (p.dim() != q.dim()) throw std::domain_error("EmpiricalSample::mixture: dimension mismatch");
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("EmpiricalSample::mixture: t must lie in [0,1]");
  std::vector<double> data = p.data_;
  data.insert(data.end(), q.data_.begin(), q.data_.end());
  std::vector<double> w;
  w.reserve(p.n_ + q.n_);
  for (double wi : p.weights_) w.push_back((1.0 - t) * wi);
  for (double wi : q.weights_) w.push_back(t * wi);
  return EmpiricalSample(std::move(data), p.dim(), std::move(w));
}

std::vector<double> EmpiricalSample::column(std::size_t j) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = data_[i * d_ + j];
  return out;
}

std::span<const double> EmpiricalSample::values() const {
  if (d_ != 1) throw std::domain_error("EmpiricalSample::values: sample is not one-dimensional");
  return data_;
}

std::string to_string(GridProvenance p) {
  switch (p) {
    case GridProvenance::Uniform: return "uniform";
    case GridProvenance::Dyadic: return "dyadic";
    case GridProvenance::GineNickl: return "gine-nickl";
    case GridProvenance::Custom: return "custom";
  }
  return "custom";
}

TuningGrid::TuningGrid(std::vector<double> values, GridProvenance provenance)
    : values_(std::move(values)), provenance_(provenance) {
  if (values_.empty()) throw std::domain_error("TuningGrid: empty grid");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
      throw std::domain_error("TuningGrid: values must be finite and positive");
    if (i > 0 && !(values_[i] > values_[i - 1]))
      throw std::domain_error("TuningGrid: values must be strictly increasing");
  }
}

TuningGrid TuningGrid::uniform(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::domain_error("TuningGrid::uniform: count must be >= 1");
  if (count == 1) return TuningGrid({lo}, GridProvenance::Uniform);
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return TuningGrid(std::move(v), GridProvenance::Uniform);
}

TuningGrid TuningGrid::integers(long lo, long hi) {
  if (hi < lo) throw std::domain_error("TuningGrid::integers: hi < lo");
  std::vector<double> v;
  for (long k = lo; k <= hi; ++k) v.push_back(static_cast<double>(k));
  return TuningGrid(std::move(v), GridProvenance::Uniform);
}

TuningGrid TuningGrid::dyadic(long max, bool include_max) {
  if (max < 1) throw std::domain_error("TuningGrid::dyadic: max must be >= 1");
  std::vector<double> v;
  for (long k = 1; k <= max; k *= 2) v.push_back(static_cast<double>(k));
  if (include_max && v.back() != static_cast<double>(max)) v.push_back(static_cast<double>(max));
  return TuningGrid(std::move(v), GridProvenance::Dyadic);
}

bool TuningGrid::contains(double k) const noexcept {
  return std::binary_search(values_.begin(), values_.end(), k);
}

DiscreteLaw::DiscreteLaw(std::vector<double> points, std::vector<double> probs) {
  if (points.empty()) throw std::domain_error("DiscreteLaw: empty support");
  if (points.size() != probs.size()) throw std::domain_error("DiscreteLaw: size mismatch");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::domain_error("DiscreteLaw: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::domain_error("DiscreteLaw: probabilities must sum to 1");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  for (std::size_t idx : order) {
    if (!support_.empty() && support_.back() == points[idx]) {
      probs_.back() += probs[idx];
    } else {
      support_.push_back(points[idx]);
      probs_.push_back(probs[idx]);
    }
  }
}

DiscreteLaw DiscreteLaw::point_mass(double x) { return DiscreteLaw({x}, {1.0}); }

DiscreteLaw DiscreteLaw::uniform_over(std::vector<double> draws) {
  if (draws.empty()) throw std::domain_error("DiscreteLaw: empty support");
  std::sort(draws.begin(), draws.end());
  const double w = 1.0 / static_cast<double>(draws.size());
  DiscreteLaw law;
  std::size_t run = 0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    ++run;
    if (i + 1 == draws.size() || draws[i + 1] != draws[i]) {
      law.support_.push_back(draws[i]);
      law.probs_.push_back(static_cast<double>(run) * w);
      run = 0;
    }
  }
  return law;
}

double DiscreteLaw::mean() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) m += support_[i] * probs_[i];
  return m;
}

double parameter_distance(const ParameterValue& a, const ParameterValue& b) {
  if (a.index() != b.index()) throw std::invalid_argument("parameter_distance: mismatched value kinds");
  if (const auto* x = std::get_if<double>(&a)) return std::abs(*x - std::get<double>(b));
  if (const auto* f = std::get_if<FunctionOnGrid>(&a)) {
    const auto& g = std::get<FunctionOnGrid>(b);
    if (f->values.size() != g.values.size() || (f->grid && g.grid && *f->grid != *g.grid))
      throw std::invalid_argument("parameter_distance: functions live on different grids");
    double m = 0.0;
    for (std::size_t i = 0; i < f->values.size(); ++i) m = std::max(m, std::abs(f->values[i] - g.values[i]));
    return m;
  }
  return bl_distance(std::get<DiscreteLaw>(a), std::get<DiscreteLaw>(b));
}

std::optional<double> sampling_monotonicity_violation(const RateEnvelope& env, const TuningGrid& grid,
                                                      std::size_t n, double tol) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (env.sampling(grid[i], n) < env.sampling(grid[i - 1], n) - tol) return grid[i];
  return std::nullopt;
}

std::optional<double> bias_monotonicity_violation(const RateEnvelope& env, const TuningGrid& grid, double tol) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (env.bias(grid[i]) > env.bias(grid[i - 1]) + tol) return grid[i];
  return std::nullopt;
}

double default_slow_factor(std::size_t n) {
  return std::log(std::log(static_cast<double>(n) + std::numbers::e));
}

double InfluenceEvaluation::norm() const { return std::sqrt(second_moment); }

InfluenceEvaluation make_influence(std::vector<double> raw, std::span<const double> weights) {
  if (raw.size() != weights.size()) throw std::invalid_argument("make_influence: size mismatch");
  double mean = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) mean += weights[i] * raw[i];
  double m2 = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] -= mean;
    m2 += weights[i] * raw[i] * raw[i];
  }
  return {std::move(raw), m2};
}

}  // namespace regkit
