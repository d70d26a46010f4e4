#include <doctest.h>

#include <random>
#include <vector>

#include "motkit/assignment.hpp"

using namespace motkit;

namespace {

// Exhaustive search over all partial one-to-one assignments. Returns the best
// (cardinality, total utility) pair under the given priority.
struct BruteResult {
  int cardinality = 0;
  Real total = 0;
};

void brute_recurse(const Matrix& u, int row, std::vector<bool>& used, int card, Real total,
                   bool cardinality_first, BruteResult& best) {
  if (row == u.rows()) {
    const bool better = cardinality_first
                            ? (card > best.cardinality ||
                               (card == best.cardinality && total > best.total + 1e-12))
                            : (total > best.total + 1e-12);
    if (better) best = {card, total};
    return;
  }
  brute_recurse(u, row + 1, used, card, total, cardinality_first, best);  // row unmatched
  for (int c = 0; c < u.cols(); ++c) {
    if (used[static_cast<std::size_t>(c)] || u(row, c) <= kForbiddenPair) continue;
    used[static_cast<std::size_t>(c)] = true;
    brute_recurse(u, row + 1, used, card + 1, total + u(row, c), cardinality_first, best);
    used[static_cast<std::size_t>(c)] = false;
  }
}

BruteResult brute_force(const Matrix& u, bool cardinality_first) {
  BruteResult best;
  best.total = cardinality_first ? 0 : 0;  // empty assignment is always available
  std::vector<bool> used(static_cast<std::size_t>(u.cols()), false);
  brute_recurse(u, 0, used, 0, 0, cardinality_first, best);
  return best;
}

BruteResult score_of(const Matrix& u, const std::vector<int>& match) {
  BruteResult r;
  for (int i = 0; i < static_cast<int>(match.size()); ++i) {
    if (match[static_cast<std::size_t>(i)] < 0) continue;
    r.cardinality += 1;
    r.total += u(i, match[static_cast<std::size_t>(i)]);
  }
  return r;
}

bool one_to_one(const std::vector<int>& match, int cols) {
  std::vector<int> seen(static_cast<std::size_t>(cols), 0);
  for (int c : match) {
    if (c < 0) continue;
    if (c >= cols || seen[static_cast<std::size_t>(c)]++) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("max assignment leaves unprofitable rows unmatched") {
  Matrix u(2, 2);
  u << -1, -2, -3, -4;
  const auto match = solve_max_assignment(u);
  CHECK(match == std::vector<int>{-1, -1});
}

TEST_CASE("max assignment picks the obvious diagonal") {
  Matrix u(2, 2);
  u << 5, 1, 1, 5;
  CHECK(solve_max_assignment(u) == std::vector<int>{0, 1});
}

TEST_CASE("max assignment takes a worse pair when it pays globally") {
  // row 0 prefers column 0, but giving it up gains more in total
  Matrix u(2, 2);
  u << 10, 9, 10, kForbiddenPair;
  CHECK(solve_max_assignment(u) == std::vector<int>{1, 0});
}

TEST_CASE("forbidden pairs are never selected") {
  Matrix u(1, 2);
  u << kForbiddenPair, kForbiddenPair;
  CHECK(solve_max_assignment(u) == std::vector<int>{-1});
}

TEST_CASE("empty and degenerate shapes") {
  CHECK(solve_max_assignment(Matrix(0, 0)).empty());
  CHECK(solve_max_assignment(Matrix(2, 0)) == std::vector<int>{-1, -1});
  Matrix row(1, 3);
  row << 1, 3, 2;
  CHECK(solve_max_assignment(row) == std::vector<int>{1});
}

TEST_CASE("max assignment matches brute force on random instances") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<Real> val(-2, 4);
  std::uniform_real_distribution<Real> coin(0, 1);
  for (int t = 0; t < 400; ++t) {
    const int r = dim(rng), c = dim(rng);
    Matrix u(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) u(i, j) = coin(rng) < 0.15 ? kForbiddenPair : val(rng);
    const auto match = solve_max_assignment(u);
    REQUIRE(one_to_one(match, c));
    const Real got = score_of(u, match).total;
    const Real want = brute_force(u, false).total;
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("cardinality assignment prefers more matches over higher total") {
  Matrix u(2, 2);
  u << 1.0, 0.9, 1.0, kForbiddenPair;
  // total-utility alone would pick (0,0) and leave row 1 out
  CHECK(solve_max_cardinality_assignment(u) == std::vector<int>{1, 0});
}

TEST_CASE("cardinality assignment maximises utility among equal cardinalities") {
  Matrix u(2, 2);
  u << 0.9, 0.1, 0.8, 0.2;
  CHECK(solve_max_cardinality_assignment(u) == std::vector<int>{0, 1});
}

TEST_CASE("cardinality assignment validates its utility range") {
  Matrix u(1, 1);
  u << 1.5;
  CHECK_THROWS(solve_max_cardinality_assignment(u));
  u << -0.5;
  CHECK_THROWS(solve_max_cardinality_assignment(u));
}

TEST_CASE("cardinality assignment matches brute force on random instances") {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<Real> val(0, 1);
  std::uniform_real_distribution<Real> coin(0, 1);
  for (int t = 0; t < 400; ++t) {
    const int r = dim(rng), c = dim(rng);
    Matrix u(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) u(i, j) = coin(rng) < 0.3 ? kForbiddenPair : val(rng);
    const auto match = solve_max_cardinality_assignment(u);
    REQUIRE(one_to_one(match, c));
    const BruteResult got = score_of(u, match);
    const BruteResult want = brute_force(u, true);
    CHECK(got.cardinality == want.cardinality);
    CHECK(got.total == doctest::Approx(want.total).epsilon(1e-9));
  }
}
