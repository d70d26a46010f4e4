#include "motkit/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace motkit {

namespace {

// Classic potentials-based Hungarian algorithm on a square cost matrix,
// 1-indexed internally. Returns, per column, the matched row.
std::vector<int> hungarian_min_cost(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const Real inf = std::numeric_limits<Real>::infinity();
  std::vector<Real> u(n + 1, 0), v(n + 1, 0), minv(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      Real delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Real cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_of_col(n, -1);
  for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

}  // namespace

std::vector<int> solve_max_assignment(const Matrix& utility) {
  const int rows = static_cast<int>(utility.rows());
  const int cols = static_cast<int>(utility.cols());
  std::vector<int> match(rows, -1);
  if (rows == 0 || cols == 0) return match;

  Real max_abs = 1;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const Real uij = utility(i, j);
      if (!std::isfinite(uij)) throw std::invalid_argument("assignment: utility must be finite");
      if (uij > kForbiddenPair) max_abs = std::max(max_abs, std::abs(uij));
    }
  }

  // Square (rows+cols) formulation: every real row/column owns a dummy
  // partner worth 0, so staying unmatched is always feasible and forbidden
  // pairs are priced out rather than structurally removed.
  const int n = rows + cols;
  const Real big = (max_abs + 1) * (n + 1);
  Matrix cost = Matrix::Constant(n, n, big);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (utility(i, j) > kForbiddenPair) cost(i, j) = -utility(i, j);
  for (int i = 0; i < rows; ++i) cost(i, cols + i) = 0;
  for (int j = 0; j < cols; ++j) cost(rows + j, j) = 0;
  cost.block(rows, cols, cols, rows).setZero();

  const std::vector<int> row_of_col = hungarian_min_cost(cost);
  for (int j = 0; j < cols; ++j) {
    const int i = row_of_col[j];
    if (i >= 0 && i < rows && utility(i, j) > kForbiddenPair && cost(i, j) < big) match[i] = j;
  }
  return match;
}

std::vector<int> solve_max_cardinality_assignment(const Matrix& utility) {
  // A constant reward per matched pair larger than any achievable utility
  // spread makes match count the primary objective.
  constexpr Real bonus = 1e6;
  Matrix boosted = utility;
  for (int i = 0; i < boosted.rows(); ++i) {
    for (int j = 0; j < boosted.cols(); ++j) {
      const Real uij = boosted(i, j);
      if (uij <= kForbiddenPair) continue;
      if (uij < 0 || uij > 1) {
        throw std::invalid_argument("assignment: cardinality mode needs utilities in [0, 1]");
      }
      boosted(i, j) = uij + bonus;
    }
  }
  return solve_max_assignment(boosted);
}

}  // namespace motkit
