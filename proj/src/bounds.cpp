#include "myopic/bounds.h"

#include <cmath>
#include <limits>

namespace myopic {

TransformedCostSet transformed_costs(const PomdpModel& m, const std::vector<double>& f,
                                     BoundKind kind) {
    int X = m.num_states, A = m.num_actions;
    if (static_cast<int>(f.size()) != X) throw std::invalid_argument("transformed_costs: f size");
    TransformedCostSet t;
    t.kind = kind;
    t.f = f;
    t.costs = Matrix(X, A);
    for (int a = 0; a < A; ++a) {
        std::vector<double> pf = mat_vec(m.transitions[a], f);
        for (int i = 0; i < X; ++i) t.costs(i, a) = m.costs(i, a) + f[i] - m.discount * pf[i];
    }
    double s = (kind == BoundKind::upper) ? 1.0 : -1.0;
    t.monotone_margin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < A; ++a)
        for (int i = 0; i + 1 < X; ++i) {
            double step = s * (t.costs(i + 1, a) - t.costs(i, a));
            if (step < t.monotone_margin) t.monotone_margin = step;
        }
    t.monotone = t.monotone_margin > 0.0;
    return t;
}

int myopic_policy(const TransformedCostSet& t, const std::vector<double>& pi) {
    if (static_cast<int>(pi.size()) != t.costs.rows)
        throw std::invalid_argument("myopic_policy: belief size");
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int a = 0; a < t.costs.cols; ++a) {
        double v = 0.0;
        for (int i = 0; i < t.costs.rows; ++i) v += t.costs(i, a) * pi[i];
        if (v < best_v) {
            best_v = v;
            best = a;
        }
    }
    return best + 1;
}

// min-l1 member of { f : G f <= h, E f = d }; nullopt when infeasible.
static std::optional<std::vector<double>> min_l1(const Matrix& G, const std::vector<double>& h,
                                                 const Matrix& E, const std::vector<double>& d) {
    int X = G.cols;
    LpProblem p;
    p.objective.assign(2 * X, 0.0);
    for (int i = 0; i < X; ++i) p.objective[X + i] = 1.0;
    p.G = Matrix(G.rows + 2 * X, 2 * X);
    p.h.assign(G.rows + 2 * X, 0.0);
    for (int r = 0; r < G.rows; ++r) {
        for (int j = 0; j < X; ++j) p.G(r, j) = G(r, j);
        p.h[r] = h[r];
    }
    for (int i = 0; i < X; ++i) {
        p.G(G.rows + 2 * i, i) = 1.0;
        p.G(G.rows + 2 * i, X + i) = -1.0;
        p.G(G.rows + 2 * i + 1, i) = -1.0;
        p.G(G.rows + 2 * i + 1, X + i) = -1.0;
    }
    if (E.rows > 0) {
        p.E = Matrix(E.rows, 2 * X);
        p.d = d;
        for (int r = 0; r < E.rows; ++r)
            for (int j = 0; j < X; ++j) p.E(r, j) = E(r, j);
    }
    LpOutcome out = solve_lp(p);
    if (out.status != LpStatus::optimal) return std::nullopt;
    return std::vector<double>(out.solution->begin(), out.solution->begin() + X);
}

Algorithm1Result optimize_f_two_action(const PomdpModel& m, BoundKind kind, double eps_strict) {
    if (m.num_actions != 2)
        throw std::invalid_argument("optimize_f_two_action: needs exactly 2 actions");
    int X = m.num_states;
    Algorithm1Result res;
    LpProblem poly = transform_polytope(m, kind, eps_strict);
    const Matrix& Plo = m.transitions[kind == BoundKind::upper ? 0 : 1];
    const Matrix& Phi = m.transitions[kind == BoundKind::upper ? 1 : 0];
    Matrix D(X, X);
    for (int i = 0; i < X; ++i)
        for (int j = 0; j < X; ++j) D(i, j) = Phi(i, j) - Plo(i, j);

    res.alphas.assign(X, 0.0);
    for (int i = 0; i < X; ++i) {
        LpProblem p = poly;
        p.objective = D.row(i);
        LpOutcome out = solve_lp(p);
        if (out.status == LpStatus::infeasible) {
            res.status = Algorithm1Result::Status::infeasible;
            return res;
        }
        if (out.status != LpStatus::optimal) {
            res.status = Algorithm1Result::Status::no_solution;
            return res;
        }
        res.alphas[i] = *out.objective_value;
    }
    std::vector<double> fs;
    if (auto f = min_l1(poly.G, poly.h, D, res.alphas)) {
        res.f_star = *f;
        res.status = Algorithm1Result::Status::solved;
    } else {
        res.status = Algorithm1Result::Status::no_solution;
    }
    return res;
}

int OverlapRegion::pinned_action(const std::vector<double>& pi) const {
    int u = dot(g_up, pi) <= 0.0 ? 1 : 2;
    int l = dot(g_lo, pi) > 0.0 ? 2 : 1;
    return u == l ? u : 0;
}

OverlapRegion overlap_region_two_action(const PomdpModel& m, const std::vector<double>& f_up,
                                        const std::vector<double>& f_lo) {
    if (m.num_actions != 2)
        throw std::invalid_argument("overlap_region_two_action: needs exactly 2 actions");
    OverlapRegion r;
    r.f_up = f_up;
    r.f_lo = f_lo;
    TransformedCostSet up = transformed_costs(m, f_up, BoundKind::upper);
    TransformedCostSet lo = transformed_costs(m, f_lo, BoundKind::lower);
    r.g_up.resize(m.num_states);
    r.g_lo.resize(m.num_states);
    for (int i = 0; i < m.num_states; ++i) {
        r.g_up[i] = up.costs(i, 0) - up.costs(i, 1);
        r.g_lo[i] = lo.costs(i, 0) - lo.costs(i, 1);
    }
    return r;
}

BoundsEvaluator BoundsEvaluator::make(const PomdpModel& m, double eps_strict) {
    BoundsEvaluator ev;
    ev.model = m;
    ev.eps_strict = eps_strict;
    ev.poly_up = transform_polytope(m, BoundKind::upper, eps_strict);
    ev.poly_lo = transform_polytope(m, BoundKind::lower, eps_strict);
    auto f_up = check_a1(m, eps_strict);
    if (!f_up) throw BoundsError("(A1) fails: upper transform polytope is empty");
    auto f_lo = check_a2(m, eps_strict);
    if (!f_lo) throw BoundsError("(A2) fails: lower transform polytope is empty");
    if (m.num_actions == 2) {
        Algorithm1Result au = optimize_f_two_action(m, BoundKind::upper, eps_strict);
        Algorithm1Result al = optimize_f_two_action(m, BoundKind::lower, eps_strict);
        if (au.status == Algorithm1Result::Status::solved &&
            al.status == Algorithm1Result::Status::solved) {
            ev.optimized_two_action = true;
            f_up = au.f_star;
            f_lo = al.f_star;
            ev.region = overlap_region_two_action(m, au.f_star, al.f_star);
        }
    }
    ev.up = transformed_costs(m, *f_up, BoundKind::upper);
    ev.lo = transformed_costs(m, *f_lo, BoundKind::lower);
    return ev;
}

// Is action i (1-based) myopic at pi for some member of the polytope?
static bool action_feasible_at(const PomdpModel& m, const LpProblem& poly, int i,
                               const std::vector<double>& pi) {
    int X = m.num_states, A = m.num_actions;
    LpProblem p;
    p.objective.assign(X, 0.0);
    p.G = Matrix(poly.G.rows + A - 1, X);
    p.h.assign(poly.G.rows + A - 1, 0.0);
    for (int r = 0; r < poly.G.rows; ++r) {
        for (int j = 0; j < X; ++j) p.G(r, j) = poly.G(r, j);
        p.h[r] = poly.h[r];
    }
    int r = poly.G.rows;
    std::vector<double> pit = mat_tvec(m.transitions[i - 1], pi);
    for (int a = 1; a <= A; ++a) {
        if (a == i) continue;
        // rho pi'(P_a - P_i) f <= (c_a - c_i)' pi
        std::vector<double> pat = mat_tvec(m.transitions[a - 1], pi);
        double rhs = 0.0;
        for (int x = 0; x < X; ++x) {
            p.G(r, x) = m.discount * (pat[x] - pit[x]);
            rhs += (m.costs(x, a - 1) - m.costs(x, i - 1)) * pi[x];
        }
        p.h[r] = rhs;
        ++r;
    }
    return feasible_point(p).status == LpStatus::optimal;
}

PerBeliefBounds BoundsEvaluator::at(const std::vector<double>& pi, bool exact_a_low) const {
    PerBeliefBounds b;
    int ub = myopic_policy(up, pi);
    int lb = myopic_policy(lo, pi);
    if (optimized_two_action || lb == ub) {
        // For A = 2 the optimized transforms already give the tightest
        // per-belief actions; for any A, lb == ub pins everything between.
        b.a_high = ub;
        b.a_low = lb;
        return b;
    }
    // a_high: smallest feasible action in [lb, ub] for the upper polytope.
    b.a_high = ub;
    for (int i = lb; i <= ub; ++i)
        if (action_feasible_at(model, poly_up, i, pi)) {
            b.a_high = i;
            break;
        }
    if (b.a_high == lb) {
        b.a_low = lb;
        return b;
    }
    // a_low: largest feasible action in [lb, a_high] for the lower polytope.
    b.a_low = lb;
    for (int i = b.a_high; i >= lb; --i) {
        if (action_feasible_at(model, poly_lo, i, pi)) {
            b.a_low = i;
            break;
        }
        if (!exact_a_low) break;  // first probe failed: not pinned, a_low stays lb
    }
    return b;
}

PerBeliefBounds per_belief_bounds(const PomdpModel& m, const std::vector<double>& pi,
                                  double eps_strict) {
    return BoundsEvaluator::make(m, eps_strict).at(pi);
}

}  // namespace myopic
