#pragma once

#include "regkit/sample.hpp"

namespace regkit {

/**
 * Bounded-Lipschitz distance between two finite-support laws on the line:
 * sup |∫f dp - ∫f dq| over ‖f‖_∞ ≤ 1, Lip(f) ≤ 1.
 *
 * The supremum is the optimum of the linear program over the merged sorted
 * support x_1 < ... < x_N with variables f_i, bounds |f_i| ≤ 1 and adjacent
 * constraints |f_{i+1} - f_i| ≤ x_{i+1} - x_i. The chain structure lets the
 * LP be solved exactly by a forward pass over concave piecewise-linear value
 * functions, in O(N log N).
 */
double bl_distance(const DiscreteLaw& p, const DiscreteLaw& q);

/// W1 via ∫|F_p - F_q|, integrated exactly between support points.
double w1_distance(const DiscreteLaw& p, const DiscreteLaw& q);

/// Law of a one-dimensional sample (support = distinct values, mass = multiplicity / n).
DiscreteLaw empirical_measure(const EmpiricalSample& sample);

}  // namespace regkit
