#include "regkit/selector.hpp"

#include <cmath>
#include <stdexcept>

#include "regkit/errors.hpp"

namespace regkit {

DistanceTable DistanceTable::compute(const Regularization& family, const EmpiricalSample& sample,
                                     const TuningGrid& grid) {
  DistanceTable t;
  t.m_ = grid.size();
  t.values_.reserve(t.m_);
  for (double k : grid) t.values_.push_back(family.evaluate(k, sample));
  t.d_.assign(t.m_ * t.m_, 0.0);
  for (std::size_t i = 0; i < t.m_; ++i)
    for (std::size_t j = i + 1; j < t.m_; ++j) {
      const double d = family.distance(t.values_[i], t.values_[j]);
      t.d_[i * t.m_ + j] = d;
      t.d_[j * t.m_ + i] = d;
    }
  return t;
}

DistanceTable::DistanceTable(std::vector<double> distances, std::size_t m) : d_(std::move(distances)), m_(m) {
  if (d_.size() != m * m) throw std::invalid_argument("DistanceTable: expected m*m entries");
}

std::vector<double> acceptance_set(const DistanceTable& table, const TuningGrid& grid,
                                   std::span<const double> thresholds) {
  if (thresholds.size() != grid.size() || table.size() != grid.size())
    throw std::invalid_argument("acceptance_set: thresholds and table must match the grid");
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bool ok = true;
    for (std::size_t j = i + 1; j < grid.size() && ok; ++j) ok = table(i, j) <= thresholds[j];
    if (ok) out.push_back(grid[i]);
  }
  return out;
}

std::vector<double> acceptance_set(const Regularization& family, const EmpiricalSample& sample,
                                   const TuningGrid& grid, std::span<const double> thresholds) {
  return acceptance_set(DistanceTable::compute(family, sample, grid), grid, thresholds);
}

SelectionResult select_with_thresholds(DistanceTable table, const TuningGrid& grid, std::vector<double> thresholds) {
  SelectionResult r;
  r.acceptance_set = acceptance_set(table, grid, thresholds);
  r.chosen_k = r.acceptance_set.front();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] == r.chosen_k) r.chosen_index = i;
  r.test_sequence = std::move(thresholds);
  r.diagnostics = std::move(table);
  return r;
}

std::vector<double> lepski_thresholds(const TuningGrid& grid, const RateEnvelope& env, std::size_t n) {
  if (!env.sampling) throw ConfigError("lepski_select: envelope has no sampling part");
  std::vector<double> a;
  a.reserve(grid.size());
  for (double k : grid) a.push_back(4.0 * env.sampling(k, n));
  return a;
}

std::vector<double> gal_thresholds(const TuningGrid& grid, const RateEnvelope& env, std::size_t n) {
  if (!env.sampling || !env.has_drift()) throw ConfigError("lepski_select_gal: envelope needs sampling and drift parts");
  const double rn = std::sqrt(static_cast<double>(n));
  std::vector<double> a;
  a.reserve(grid.size());
  for (double k : grid) a.push_back(4.0 * (env.sampling(k, n) + env.drift(k, n)) / rn);
  return a;
}

SelectionResult lepski_select(const Regularization& family, const EmpiricalSample& sample, const TuningGrid& grid,
                              const RateEnvelope& env, std::size_t n) {
  if (auto bad = sampling_monotonicity_violation(env, grid, n))
    throw ConfigError("lepski_select: sampling envelope decreases at k = " + std::to_string(*bad));
  auto thresholds = lepski_thresholds(grid, env, n);
  return select_with_thresholds(DistanceTable::compute(family, sample, grid), grid, std::move(thresholds));
}

SelectionResult lepski_select_gal(const Regularization& family, const EmpiricalSample& sample,
                                  const TuningGrid& grid, const RateEnvelope& env, std::size_t n) {
  auto thresholds = gal_thresholds(grid, env, n);
  // The drift part of the GAL envelope is a decreasing majorant; only the
  // sampling part is required to be monotone.
  if (auto bad = sampling_monotonicity_violation(env, grid, n))
    throw ConfigError("lepski_select_gal: sampling envelope decreases at k = " + std::to_string(*bad));
  for (double k : grid)
    if (!(env.drift(k, n) >= 0.0)) throw ConfigError("lepski_select_gal: negative drift envelope");
  return select_with_thresholds(DistanceTable::compute(family, sample, grid), grid, std::move(thresholds));
}

namespace {

template <class Objective>
double argmin_grid(const TuningGrid& grid, Objective obj) {
  double best_k = grid[0];
  double best = obj(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = obj(grid[i]);
    if (v < best) {
      best = v;
      best_k = grid[i];
    }
  }
  return best_k;
}

}  // namespace

double oracle_select(const TuningGrid& grid, const RateEnvelope& env, std::size_t n) {
  return argmin_grid(grid, [&](double k) { return env.sampling(k, n) + env.bias(k); });
}

double oracle_select_gal(const TuningGrid& grid, const RateEnvelope& env, std::size_t n) {
  if (!env.has_drift()) throw ConfigError("oracle_select_gal: envelope has no drift part");
  const double rn = std::sqrt(static_cast<double>(n));
  return argmin_grid(grid, [&](double k) { return (env.sampling(k, n) + env.drift(k, n)) / rn + env.bias(k); });
}

StraddleCheck grid_straddles(const TuningGrid& grid, const RateEnvelope& env, std::size_t n) {
  StraddleCheck c;
  for (double k : grid) {
    if (env.sampling(k, n) >= env.bias(k))
      c.plus_nonempty = true;
    else
      c.minus_nonempty = true;
  }
  return c;
}

}  // namespace regkit
