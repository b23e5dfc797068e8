#pragma once
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "myopic/model.h"

namespace myopic {

struct BeliefUpdateError : std::runtime_error {
    explicit BeliefUpdateError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// One filter step: posterior T(pi, y, a) and normalizer sigma(pi, y, a).
// y and a are 1-based. Throws BeliefUpdateError when sigma underflows
// (observation impossible under pi).
std::pair<std::vector<double>, double> belief_update(const PomdpModel& m,
                                                     const std::vector<double>& pi, int y, int a);

// sigma(pi, ., a): probability of each observation after playing a at pi.
std::vector<double> observation_distribution(const PomdpModel& m, const std::vector<double>& pi,
                                             int a);

// Regular lattice {c in N^X : sum c = d} / d on the belief simplex, indexed
// lexicographically by coordinates. rank() inverts the enumeration via the
// combinatorial number system.
struct SimplexGrid {
    int X = 0, d = 0;
    long num_points = 0;
    std::vector<int> coords;            // num_points x X
    std::vector<long long> comb;        // binomial table, (d+X+2) x (X+2)

    long long binom(int n, int k) const { return comb[static_cast<size_t>(n) * (X + 2) + k]; }
    long rank(const int* c) const;
    const int* point(long idx) const { return coords.data() + static_cast<size_t>(idx) * X; }
    std::vector<double> belief(long idx) const;

    // Largest-remainder rounding of pi to lattice coordinates.
    void nearest(const std::vector<double>& pi, int* out) const;
    // Freudenthal corners of the cell containing pi: at most X vertices with
    // convex weights reproducing pi exactly. Returns the corner count.
    int corners(const std::vector<double>& pi, long* idx, double* w) const;
};
SimplexGrid make_simplex_grid(int X, int d);

enum class GridInterp { nearest, barycentric };

// Value function from fixed-grid value iteration. Iterations run until the
// sup-norm change is at most stop_tol * (1 - rho) / rho, which bounds the
// distance to the true fixed point of the *grid* operator by stop_tol.
struct ValueFunctionGrid {
    SimplexGrid grid;
    GridInterp interp = GridInterp::nearest;
    double discount = 0.0;
    double stop_tol = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> values;
    std::vector<int> greedy;  // 1-based, ties to the smallest action

    // Interpolated value at an arbitrary belief.
    double value_at(const std::vector<double>& pi) const;
};
ValueFunctionGrid grid_value_iteration(const PomdpModel& m, int d, double stop_tol = 1e-6,
                                       GridInterp interp = GridInterp::nearest,
                                       long max_iter = 200000);

// One Bellman backup at an arbitrary belief using the gridded value function.
std::vector<double> grid_q_values(const PomdpModel& m, const ValueFunctionGrid& v,
                                  const std::vector<double>& pi);
int grid_greedy_action(const PomdpModel& m, const ValueFunctionGrid& v,
                       const std::vector<double>& pi);

// Exact alpha-vector representation of the N-stage discounted value function
// (minimization). Vectors are pruned to the useful set each stage with a
// pointwise-dominance filter plus witness LPs. Throws SolverError if a stage
// would exceed `cap` vectors.
struct AlphaVectorSet {
    int horizon = 0;
    double discount = 0.0;
    std::vector<std::vector<double>> vectors;
    std::vector<int> actions;  // 1-based first-stage action per vector
    double value_at(const std::vector<double>& pi) const;
    int best_action(const std::vector<double>& pi) const;
};
AlphaVectorSet exact_finite_horizon(const PomdpModel& m, int horizon, long cap = 100000,
                                    double prune_tol = 1e-9);

}  // namespace myopic
