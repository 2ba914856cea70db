#include "acv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace acv {

namespace {

void check_sizes(const ComplexVector& p, const ComplexVector& q) {
  if (p.size() != q.size())
    fail(ErrorCode::unequal_supports,
         "wasserstein2: clouds must have equal size");
  if (p.size() < 1)
    fail(ErrorCode::domain_violation, "wasserstein2: clouds must be nonempty");
  if (!p.allFinite() || !q.allFinite())
    fail(ErrorCode::domain_violation, "wasserstein2: nonfinite coordinate");
}

}  // namespace

Matching assign_min_cost(const ComplexVector& p, const ComplexVector& q) {
  check_sizes(p, q);
  const int m = static_cast<int>(p.size());
  RealMatrix cost(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) cost(i, j) = std::norm(p[i] - q[j]);

  // shortest augmenting paths with dual potentials, one source row at a time
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pot_row(m + 1, 0.0), pot_col(m + 1, 0.0);
  std::vector<int> matched_row(m + 1, 0);  // column -> row (1-based, 0 = free)
  std::vector<int> prev_col(m + 1, 0);
  for (int row = 1; row <= m; ++row) {
    std::vector<double> min_reduced(m + 1, inf);
    std::vector<bool> visited(m + 1, false);
    int col = 0;
    matched_row[0] = row;
    do {
      visited[col] = true;
      int r = matched_row[col];
      double delta = inf;
      int next_col = 0;
      for (int j = 1; j <= m; ++j) {
        if (visited[j]) continue;
        double reduced = cost(r - 1, j - 1) - pot_row[r] - pot_col[j];
        if (reduced < min_reduced[j]) {
          min_reduced[j] = reduced;
          prev_col[j] = col;
        }
        if (min_reduced[j] < delta) {
          delta = min_reduced[j];
          next_col = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (visited[j]) {
          pot_row[matched_row[j]] += delta;
          pot_col[j] -= delta;
        } else {
          min_reduced[j] -= delta;
        }
      }
      col = next_col;
    } while (matched_row[col] != 0);
    while (col != 0) {
      int pc = prev_col[col];
      matched_row[col] = matched_row[pc];
      col = pc;
    }
  }

  Matching out;
  out.permutation.assign(m, -1);
  for (int j = 1; j <= m; ++j)
    if (matched_row[j] > 0) out.permutation[matched_row[j] - 1] = j - 1;
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += cost(i, out.permutation[i]);
  out.cost = total / m;
  return out;
}

double wasserstein2(const ComplexVector& p, const ComplexVector& q) {
  return std::sqrt(assign_min_cost(p, q).cost);
}

double wasserstein2_oracle(const ComplexVector& p, const ComplexVector& q) {
  check_sizes(p, q);
  const int m = static_cast<int>(p.size());
  if (m > 8)
    fail(ErrorCode::size_cap_exceeded, "wasserstein2_oracle: m must be <= 8");
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += std::norm(p[i] - q[perm[i]]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / m);
}

}  // namespace acv
