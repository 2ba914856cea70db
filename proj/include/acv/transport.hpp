#pragma once

#include <vector>

#include "acv/types.hpp"

namespace acv {

/// A perfect matching between two equal-size point clouds and its mean
/// squared transport cost.
struct Matching {
  std::vector<int> permutation;  // source index -> target index
  double cost = 0.0;             // (1/m) sum |p_i - q_{perm(i)}|^2
};

/// Minimum-cost perfect matching under squared-distance cost, by shortest
/// augmenting paths with potentials. O(m^3).
Matching assign_min_cost(const ComplexVector& p, const ComplexVector& q);

/// Exact 2-Wasserstein distance between equal-size empirical measures:
/// sqrt(min over permutations of (1/m) sum |p_i - q_{sigma(i)}|^2).
double wasserstein2(const ComplexVector& p, const ComplexVector& q);

/// Exhaustive minimum over all m! permutations. Test oracle; m <= 8.
double wasserstein2_oracle(const ComplexVector& p, const ComplexVector& q);

}  // namespace acv
