#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "myopic/lp.h"
#include "myopic/model.h"
#include "myopic/stochastic_orders.h"

namespace myopic {

enum class BoundKind { upper, lower };

// Feasible set of cost transforms f: for every action a, the transformed
// cost c_a + (I - rho P_a) f is strictly increasing (upper) / decreasing
// (lower) with slack eps_strict. Returns only the inequality part
// (G f <= h); objective and bounds are left empty.
LpProblem transform_polytope(const PomdpModel& m, BoundKind kind, double eps_strict = 1e-8);

// (A1)/(A2): emptiness test of the corresponding polytope. When feasible,
// returns the minimum-l1-norm member (the all-ones shift direction is cost
// free, so plain feasibility would be unanchored). nullopt when infeasible.
std::optional<std::vector<double>> check_a1(const PomdpModel& m, double eps_strict = 1e-8);
std::optional<std::vector<double>> check_a2(const PomdpModel& m, double eps_strict = 1e-8);

// (A3): every transition matrix and observation kernel is TP2. Gaussian
// kernels are TP2 analytically and are reported as such without a scan.
struct A3Entry {
    std::string matrix;  // "P1".."PA", "B1".."BA"
    bool analytic = false;
    OrderCheckResult result;
};
struct A3Result {
    std::vector<A3Entry> entries;
    bool holds = true;
    double margin = 0.0;  // smallest scanned minor (+inf if all analytic)
};
A3Result check_a3(const PomdpModel& m, double tol = 1e-4);

// gamma matrix of the action-coupling condition (A4) for state pair
// (j, j+1), action pair (a, a+1), observation y; all arguments 1-based.
// entries(m, n) = b^a_{j,y} b^{a+1}_{j+1,y} p^a_{m,j} p^{a+1}_{n,j+1}
//               - b^a_{j+1,y} b^{a+1}_{j,y} p^a_{m,j+1} p^{a+1}_{n,j}
Matrix gamma_matrix(const PomdpModel& m, int j, int a, int y);

// (A4): gamma_{mn} + gamma_{nm} >= 0 for all j, a, y, m, n.
// Witness tuple (j, a, y, m, n), 1-based, first violation in lexicographic
// scan order; margin is the global minimum of the symmetrized entries.
struct A4Result {
    bool holds = true;
    double margin = 0.0;
    std::optional<std::array<int, 5>> witness;
};
A4Result check_a4(const PomdpModel& m, double tol = 1e-4);

// (A5): joint observation/transition head sums decrease in the action:
// sum_{y <= ybar} sum_j (p^{a+1} b^{a+1} - p^a b^a)_{i, y} <= 0.
// (The printed form of this condition in the source carries a sign typo;
// this is the direction consistent with its use.) Witness tuple
// (i, ybar, a), 1-based; margin is the global minimum slack.
struct A5Result {
    bool holds = true;
    double margin = 0.0;
    std::optional<std::array<int, 3>> witness;
};
A5Result check_a5(const PomdpModel& m, double tol = 1e-4);

struct AssumptionReport {
    std::optional<std::vector<double>> a1, a2;
    A3Result a3;
    A4Result a4;
    A5Result a5;
    double eps_strict = 0.0;
    double tol = 0.0;
    bool grid_approx = false;  // A4/A5 evaluated on a quantized gaussian kernel
    bool overall = false;
};
AssumptionReport check_all(const PomdpModel& m, double eps_strict = 1e-8, double tol = 1e-4);

std::string report_to_json(const AssumptionReport& rep);

}  // namespace myopic
