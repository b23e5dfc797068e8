#pragma once
#include <optional>
#include <vector>

#include "myopic/matrix.h"

namespace myopic {

// Linear program
//   minimize  objective . x
//   s.t.      G x <= h,  E x = d,  lower[i] <= x[i] <= upper[i]
// Bound vectors may be empty (all variables free) or hold one optional per
// variable; an unset optional means that side is unbounded.
struct LpProblem {
    std::vector<double> objective;
    Matrix G;
    std::vector<double> h;
    Matrix E;
    std::vector<double> d;
    std::vector<std::optional<double>> lower, upper;

    int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

struct LpOutcome {
    LpStatus status = LpStatus::numerical_failure;
    std::optional<std::vector<double>> solution;      // present iff optimal
    std::optional<double> objective_value;            // present iff optimal
};

// Two-phase dense simplex. Deterministic: Dantzig pricing with a switch to
// Bland's rule after a long degenerate streak; ties always break to the
// smallest index. feas_tol bounds the accepted phase-1 residual and the
// reduced-cost threshold.
LpOutcome solve_lp(const LpProblem& p, double feas_tol = 1e-9);

// Feasibility probe: solve_lp with a zero objective.
LpOutcome feasible_point(const LpProblem& p, double feas_tol = 1e-9);

}  // namespace myopic
