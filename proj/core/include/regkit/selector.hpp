#pragma once

#include <span>
#include <vector>

#include "regkit/regularization.hpp"

namespace regkit {

/// ψ_k(P_n) for every grid value and the full pairwise distance table.
class DistanceTable {
 public:
  DistanceTable() = default;
  static DistanceTable compute(const Regularization& family, const EmpiricalSample& sample, const TuningGrid& grid);
  /// Table from precomputed distances (row-major, size m*m, symmetric).
  DistanceTable(std::vector<double> distances, std::size_t m);

  std::size_t size() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * m_ + j]; }
  const std::vector<ParameterValue>& values() const noexcept { return values_; }

 private:
  std::vector<ParameterValue> values_;
  std::vector<double> d_;
  std::size_t m_ = 0;
};

struct SelectionResult {
  double chosen_k = 0.0;
  std::vector<double> acceptance_set;
  std::vector<double> test_sequence;  // a_k, aligned with the grid
  DistanceTable diagnostics;
  std::size_t chosen_index = 0;
};

/// { k_i : dist(i, j) ≤ a_j for all j ≥ i }.
std::vector<double> acceptance_set(const DistanceTable& table, const TuningGrid& grid,
                                   std::span<const double> thresholds);
std::vector<double> acceptance_set(const Regularization& family, const EmpiricalSample& sample,
                                   const TuningGrid& grid, std::span<const double> thresholds);

/// Minimal element of the acceptance set for explicit thresholds.
SelectionResult select_with_thresholds(DistanceTable table, const TuningGrid& grid, std::vector<double> thresholds);

/// Thresholds a_k = 4 δ̄_k(r_n^{-1}).
std::vector<double> lepski_thresholds(const TuningGrid& grid, const RateEnvelope& env, std::size_t n);
/// Thresholds Λ_k = 4 (δ̄_{1,k} + δ̄_{2,k}) / √n. Throws ConfigError without a drift part.
std::vector<double> gal_thresholds(const TuningGrid& grid, const RateEnvelope& env, std::size_t n);

SelectionResult lepski_select(const Regularization& family, const EmpiricalSample& sample, const TuningGrid& grid,
                              const RateEnvelope& env, std::size_t n);
SelectionResult lepski_select_gal(const Regularization& family, const EmpiricalSample& sample,
                                  const TuningGrid& grid, const RateEnvelope& env, std::size_t n);

/// argmin_k δ̄_k(r_n^{-1}) + B̄_k, ties to the smaller k.
double oracle_select(const TuningGrid& grid, const RateEnvelope& env, std::size_t n);
/// argmin_k (δ̄_{1,k} + δ̄_{2,k}) / √n + B̄_k, ties to the smaller k.
double oracle_select_gal(const TuningGrid& grid, const RateEnvelope& env, std::size_t n);

/// Whether G+ = {k : δ̄_k ≥ B̄_k} and G- = {k : δ̄_k < B̄_k} are both non-empty.
struct StraddleCheck {
  bool plus_nonempty = false;
  bool minus_nonempty = false;
  bool ok() const noexcept { return plus_nonempty && minus_nonempty; }
};
StraddleCheck grid_straddles(const TuningGrid& grid, const RateEnvelope& env, std::size_t n);

}  // namespace regkit
