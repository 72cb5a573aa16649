#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace regkit {

/**
 * An observed batch of n real vectors of common dimension d.
 *
 * Carries the empirical distribution P_n: each row has mass 1/n. Mixtures
 * (1-t)P_n + tQ_n used for directional derivatives are built with mixture();
 * they share the same row storage but carry non-uniform weights. Every
 * estimator in the library integrates against weights(), never against 1/n
 * directly.
 */
class EmpiricalSample {
 public:
  /// One-dimensional observations.
  explicit EmpiricalSample(std::vector<double> values);
  /// Row-major n x d data.
  EmpiricalSample(std::vector<double> row_major, std::size_t dim);

  static EmpiricalSample mixture(const EmpiricalSample& p, const EmpiricalSample& q, double t);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  double operator()(std::size_t i, std::size_t j = 0) const noexcept { return data_[i * d_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * d_, d_}; }
  std::vector<double> column(std::size_t j) const;
  /// The d = 1 observations; throws std::domain_error when d != 1.
  std::span<const double> values() const;

  std::span<const double> weights() const noexcept { return weights_; }
  bool uniform_weights() const noexcept { return uniform_; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  EmpiricalSample(std::vector<double> data, std::size_t dim, std::vector<double> weights);

  std::vector<double> data_;
  std::vector<double> weights_;
  std::size_t n_ = 0;
  std::size_t d_ = 1;
  bool uniform_ = true;
};

enum class GridProvenance { Uniform, Dyadic, GineNickl, Custom };

std::string to_string(GridProvenance p);

/// Finite strictly increasing set of positive tuning values.
class TuningGrid {
 public:
  TuningGrid(std::vector<double> values, GridProvenance provenance = GridProvenance::Custom);

  /// count equally spaced values from lo to hi inclusive.
  static TuningGrid uniform(double lo, double hi, std::size_t count);
  /// Integers lo, lo+1, ..., hi.
  static TuningGrid integers(long lo, long hi);
  /// 1, 2, 4, ... up to max; max itself is appended when include_max is set.
  static TuningGrid dyadic(long max, bool include_max = true);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }
  GridProvenance provenance() const noexcept { return provenance_; }
  bool contains(double k) const noexcept;
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

 private:
  std::vector<double> values_;
  GridProvenance provenance_;
};

/// Finite-support law on the real line: sorted distinct support, probabilities summing to 1.
class DiscreteLaw {
 public:
  /// Duplicated points are merged; probabilities renormalized when they sum to 1 within 1e-12.
  DiscreteLaw(std::vector<double> points, std::vector<double> probs);

  static DiscreteLaw point_mass(double x);
  /// Uniform over the given draws (duplicates accumulate mass).
  static DiscreteLaw uniform_over(std::vector<double> draws);

  std::size_t size() const noexcept { return support_.size(); }
  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  double mean() const noexcept;

 private:
  DiscreteLaw() = default;
  std::vector<double> support_;
  std::vector<double> probs_;
};

/// Values of a function on a fixed, shared evaluation grid.
struct FunctionOnGrid {
  std::shared_ptr<const std::vector<double>> grid;
  std::vector<double> values;
};

using ParameterValue = std::variant<double, FunctionOnGrid, DiscreteLaw>;

/// Default distance: |a-b| for scalars, max-abs on the shared grid for
/// functions, bounded-Lipschitz for laws. Mismatched alternatives or grids throw.
double parameter_distance(const ParameterValue& a, const ParameterValue& b);

/// Monotone majorants used by selection.
struct RateEnvelope {
  std::function<double(double k, std::size_t n)> sampling;
  std::function<double(double k, std::size_t n)> drift;  // empty unless GAL variant
  std::function<double(double k)> bias;
  std::function<double(std::size_t n)> rate_inverse;

  bool has_drift() const noexcept { return static_cast<bool>(drift); }
};

/// Returns the first grid value where the invariant fails, if any.
std::optional<double> sampling_monotonicity_violation(const RateEnvelope& env, const TuningGrid& grid,
                                                      std::size_t n, double tol = 1e-12);
std::optional<double> bias_monotonicity_violation(const RateEnvelope& env, const TuningGrid& grid,
                                                  double tol = 1e-12);

/// Default slow factor l_n = log(log(n + e)).
double default_slow_factor(std::size_t n);

struct InfluenceEvaluation {
  std::vector<double> values;
  double second_moment = 0.0;  // weighted mean of squares

  double norm() const;
};

/// Builds an InfluenceEvaluation from raw values: centers them under the
/// sample weights and records the weighted second moment.
InfluenceEvaluation make_influence(std::vector<double> raw, std::span<const double> weights);

}  // namespace regkit
