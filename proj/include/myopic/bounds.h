#pragma once
#include <stdexcept>
#include <vector>

#include "myopic/assumptions.h"
#include "myopic/model.h"

namespace myopic {

struct BoundsError : std::runtime_error {
    explicit BoundsError(const std::string& what) : std::runtime_error(what) {}
};

// Costs transformed by f: column a holds C_a = c_a + (I - rho P_a) f.
// monotone_margin is the smallest step of the required monotonicity
// (increasing for upper, decreasing for lower); monotone iff it is positive.
struct TransformedCostSet {
    BoundKind kind = BoundKind::upper;
    std::vector<double> f;
    Matrix costs;  // X x A
    bool monotone = false;
    double monotone_margin = 0.0;
};
TransformedCostSet transformed_costs(const PomdpModel& m, const std::vector<double>& f,
                                     BoundKind kind);

// Myopic action (1-based) minimizing pi' C_a; ties break to the smallest action.
int myopic_policy(const TransformedCostSet& t, const std::vector<double>& pi);

// Algorithm 1 for A = 2: alphas[i] = min over the polytope of e_i' D f with
// D = P_2 - P_1 (upper) or P_1 - P_2 (lower); f_star is the minimum-l1 member
// of the polytope cut with D f = alpha. `infeasible` means the polytope
// itself is empty ((A1)/(A2) fails); `no_solution` means the alphas exist but
// cannot all be attained by one f.
struct Algorithm1Result {
    enum class Status { solved, no_solution, infeasible };
    Status status = Status::infeasible;
    std::vector<double> alphas;
    std::vector<double> f_star;
};
Algorithm1Result optimize_f_two_action(const PomdpModel& m, BoundKind kind,
                                       double eps_strict = 1e-8);

// Closed-form overlap region for A = 2. Normals are columnwise differences
// of the transformed costs: g = C_1 - C_2. The upper myopic policy picks
// action 1 iff g_up . pi <= 0; the lower picks action 2 iff g_lo . pi > 0.
// Both agree (the belief is "pinned") iff those two tests coincide.
struct OverlapRegion {
    std::vector<double> g_up, g_lo;
    std::vector<double> f_up, f_lo;
    // 1 or 2 when both myopic policies agree at pi, else 0.
    int pinned_action(const std::vector<double>& pi) const;
    bool contains(const std::vector<double>& pi) const { return pinned_action(pi) != 0; }
};
OverlapRegion overlap_region_two_action(const PomdpModel& m, const std::vector<double>& f_up,
                                        const std::vector<double>& f_lo);

// Tightest per-belief action bracket: a_high is the smallest action some
// member of the upper polytope makes myopic at pi, a_low the largest action
// some member of the lower polytope makes myopic at pi. 1-based;
// a_low <= a_high always, equality pins the optimal action.
struct PerBeliefBounds {
    int a_low = 0, a_high = 0;
    bool pinned() const { return a_low == a_high; }
};

// Caches the polytopes, representative transforms and (for A = 2) the
// optimized halfspace description so per-belief queries are cheap.
struct BoundsEvaluator {
    PomdpModel model;
    double eps_strict = 1e-8;
    TransformedCostSet up, lo;
    LpProblem poly_up, poly_lo;
    bool optimized_two_action = false;  // Algorithm 1 solved; up/lo carry f*
    OverlapRegion region;               // valid when optimized_two_action

    // Throws BoundsError when (A1)/(A2) is infeasible.
    static BoundsEvaluator make(const PomdpModel& m, double eps_strict = 1e-8);
    // exact_a_low = false stops the downward search after the first probe:
    // a_low is then only exact when the belief turns out pinned (cheaper for
    // callers that just need pinned-or-not plus the pinned action).
    PerBeliefBounds at(const std::vector<double>& pi, bool exact_a_low = true) const;
};

// Convenience wrapper: evaluator construction plus one query.
PerBeliefBounds per_belief_bounds(const PomdpModel& m, const std::vector<double>& pi,
                                  double eps_strict = 1e-8);

}  // namespace myopic
