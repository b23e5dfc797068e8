#pragma once
#include <optional>
#include <vector>

#include "myopic/matrix.h"

namespace myopic {

// Result of a pointwise order / positivity scan. `margin` is the smallest
// slack over all inequalities scanned (negative when violated); `witness`
// is the 1-based index tuple of the first violated inequality in scan order,
// present only when the check fails. Scan order is lexicographic in the
// reported tuple, so results are canonical.
struct OrderCheckResult {
    bool holds = true;
    double margin = 0.0;
    std::optional<std::vector<int>> witness;
};

// p >= q in the monotone likelihood ratio order: p[j] q[i] >= p[i] q[j]
// for all i < j. Witness tuple: (i, j).
OrderCheckResult mlr_ge(const std::vector<double>& p, const std::vector<double>& q,
                        double tol = 1e-12);

// p >= q in first-order stochastic dominance: tail sums of p dominate those
// of q. Witness tuple: (i) for the tail starting at state i.
OrderCheckResult fosd_ge(const std::vector<double>& p, const std::vector<double>& q,
                         double tol = 1e-12);

// All 2x2 minors of m taken from row pair (i, k), column pair (j, l), i < k,
// j < l, are nonnegative. Witness tuple: (i, k, j, l).
OrderCheckResult is_tp2(const Matrix& m, double tol = 1e-12);

}  // namespace myopic
