#pragma once

#include <vector>

#include "motkit/types.hpp"

namespace motkit {

// Utility sentinel for pairs that must never be matched.
inline constexpr Real kForbiddenPair = -1e100;

// Maximum-total-utility one-to-one assignment between the rows and columns of
// `utility`. Rows and columns may stay unmatched (worth 0), so a pair is only
// selected when it does not lower the total. Entries <= kForbiddenPair are
// never selected. Returns, per row, the matched column or -1. O((R+C)^3).
std::vector<int> solve_max_assignment(const Matrix& utility);

// Like solve_max_assignment, but lexicographic: first maximise the number of
// matched pairs, then the total utility. Requires utilities in [0, 1].
std::vector<int> solve_max_cardinality_assignment(const Matrix& utility);

}  // namespace motkit
