#include "myopic/lp.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace myopic {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau for  min c.z  s.t.  M z = b, z >= 0,  b >= 0.  Row-major, rhs in
// the last column. `basis[i]` is the column basic in row i.
struct Tableau {
    int m = 0, n = 0;
    std::vector<double> t;  // m x (n + 1)
    std::vector<int> basis;

    double& at(int i, int j) { return t[static_cast<size_t>(i) * (n + 1) + j]; }
    double at(int i, int j) const { return t[static_cast<size_t>(i) * (n + 1) + j]; }
    double& rhs(int i) { return at(i, n); }

    void pivot(int r, int c) {
        double p = at(r, c);
        double inv = 1.0 / p;
        for (int j = 0; j <= n; ++j) at(r, j) *= inv;
        at(r, c) = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            double f = at(i, c);
            if (f == 0.0) continue;
            for (int j = 0; j <= n; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis[r] = c;
    }
};

enum class RunResult { optimal, unbounded, iteration_cap };

// Simplex iterations for objective c over the current basic feasible tableau.
// `allowed[j]` masks columns eligible to enter (used to keep artificials out
// in phase 2). Reduced costs are recomputed from the basis each iteration,
// which is O(m n) per step but keeps the objective row exact.
RunResult run_simplex(Tableau& tb, const std::vector<double>& c, const std::vector<char>& allowed,
                      double feas_tol) {
    int m = tb.m, n = tb.n;
    long iter_cap = 10000 + 200L * (m + n);
    int degenerate_streak = 0;
    bool bland = false;
    std::vector<double> y(m);  // multipliers c_B in tableau coordinates
    for (long iter = 0; iter < iter_cap; ++iter) {
        for (int i = 0; i < m; ++i) y[i] = c[tb.basis[i]];
        int enter = -1;
        double best = -feas_tol;
        for (int j = 0; j < n; ++j) {
            if (!allowed[j]) continue;
            double r = c[j];
            for (int i = 0; i < m; ++i)
                if (y[i] != 0.0) r -= y[i] * tb.at(i, j);
            if (r < -feas_tol) {
                if (bland) {
                    enter = j;
                    break;
                }
                if (r < best) {
                    best = r;
                    enter = j;
                }
            }
        }
        if (enter < 0) return RunResult::optimal;
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            double a = tb.at(i, enter);
            if (a > kPivotTol) {
                double ratio = tb.rhs(i) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (leave < 0 || tb.basis[i] < tb.basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return RunResult::unbounded;
        if (best_ratio < 1e-12) {
            if (++degenerate_streak > 3 * m + 50) bland = true;
        } else {
            degenerate_streak = 0;
        }
        tb.pivot(leave, enter);
    }
    return RunResult::iteration_cap;
}

}  // namespace

LpOutcome solve_lp(const LpProblem& p, double feas_tol) {
    int nx = p.num_vars();
    if (p.G.rows > 0 && p.G.cols != nx) throw std::invalid_argument("solve_lp: G shape");
    if (p.E.rows > 0 && p.E.cols != nx) throw std::invalid_argument("solve_lp: E shape");
    if (p.G.rows != static_cast<int>(p.h.size())) throw std::invalid_argument("solve_lp: h size");
    if (p.E.rows != static_cast<int>(p.d.size())) throw std::invalid_argument("solve_lp: d size");
    if (!p.lower.empty() && static_cast<int>(p.lower.size()) != nx)
        throw std::invalid_argument("solve_lp: lower size");
    if (!p.upper.empty() && static_cast<int>(p.upper.size()) != nx)
        throw std::invalid_argument("solve_lp: upper size");

    // Variable substitution to z >= 0.  x[i] = shift + sign * z[col] (+ z2 for
    // the negative part of free variables).  Bounded-above-and-below variables
    // get an extra inequality row z <= ub - lb.
    struct VarMap {
        int col = -1, col_neg = -1;
        double shift = 0.0, sign = 1.0;
    };
    std::vector<VarMap> vm(nx);
    int ns = 0;
    std::vector<std::pair<int, double>> extra_rows;  // (column, rhs) for z <= ub - lb
    for (int i = 0; i < nx; ++i) {
        std::optional<double> lo = p.lower.empty() ? std::nullopt : p.lower[i];
        std::optional<double> hi = p.upper.empty() ? std::nullopt : p.upper[i];
        if (lo && hi && *hi < *lo) return {LpStatus::infeasible, std::nullopt, std::nullopt};
        if (lo) {
            vm[i] = {ns++, -1, *lo, 1.0};
            if (hi) extra_rows.push_back({vm[i].col, *hi - *lo});
        } else if (hi) {
            vm[i] = {ns++, -1, *hi, -1.0};
        } else {
            vm[i].col = ns++;
            vm[i].col_neg = ns++;
        }
    }

    int m_ineq = p.G.rows + static_cast<int>(extra_rows.size());
    int m = m_ineq + p.E.rows;
    int n_slack = m_ineq;
    int n = ns + n_slack;  // artificials appended later as needed

    // Rows in z coordinates, rhs adjusted for shifts.
    std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
    std::vector<double> rhs(m, 0.0);
    auto emit = [&](int r, const Matrix& src, int src_row, double scale) {
        for (int i = 0; i < nx; ++i) {
            double a = src(src_row, i) * scale;
            if (a == 0.0) continue;
            rows[r][vm[i].col] += a * vm[i].sign;
            if (vm[i].col_neg >= 0) rows[r][vm[i].col_neg] -= a * vm[i].sign;
            rhs[r] -= a * vm[i].shift;
        }
    };
    int r = 0;
    for (int gi = 0; gi < p.G.rows; ++gi, ++r) {
        rhs[r] = p.h[gi];
        emit(r, p.G, gi, 1.0);
        rows[r][ns + r] = 1.0;  // slack
    }
    for (const auto& [col, ub] : extra_rows) {
        rhs[r] = ub;
        rows[r][col] += 1.0;
        rows[r][ns + r] = 1.0;
        ++r;
    }
    for (int ei = 0; ei < p.E.rows; ++ei, ++r) {
        rhs[r] = p.d[ei];
        emit(r, p.E, ei, 1.0);
    }
    // Make rhs nonnegative.
    for (int i = 0; i < m; ++i)
        if (rhs[i] < 0.0) {
            for (double& v : rows[i]) v = -v;
            rhs[i] = -rhs[i];
        }

    // Identity columns: a slack with coefficient +1. Other rows get artificials.
    std::vector<int> art_of_row(m, -1);
    int n_art = 0;
    std::vector<int> basis(m, -1);
    for (int i = 0; i < m; ++i) {
        if (i < m_ineq && rows[i][ns + i] == 1.0) {
            basis[i] = ns + i;
        } else {
            art_of_row[i] = n + n_art++;
        }
    }
    int n_total = n + n_art;

    Tableau tb;
    tb.m = m;
    tb.n = n_total;
    tb.t.assign(static_cast<size_t>(m) * (n_total + 1), 0.0);
    tb.basis = basis;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) tb.at(i, j) = rows[i][j];
        if (art_of_row[i] >= 0) {
            tb.at(i, art_of_row[i]) = 1.0;
            tb.basis[i] = art_of_row[i];
        }
        tb.rhs(i) = rhs[i];
    }

    std::vector<char> allowed(n_total, 1);
    if (n_art > 0) {
        std::vector<double> c1(n_total, 0.0);
        for (int j = n; j < n_total; ++j) c1[j] = 1.0;
        RunResult rr = run_simplex(tb, c1, allowed, feas_tol);
        if (rr == RunResult::iteration_cap) return {LpStatus::numerical_failure, std::nullopt, std::nullopt};
        double phase1 = 0.0;
        for (int i = 0; i < m; ++i)
            if (tb.basis[i] >= n) phase1 += tb.rhs(i);
        if (phase1 > feas_tol * (1.0 + std::abs(phase1)))
            return {LpStatus::infeasible, std::nullopt, std::nullopt};
        // Pivot leftover artificials out of the basis where possible.
        for (int i = 0; i < m; ++i) {
            if (tb.basis[i] < n) continue;
            int piv = -1;
            for (int j = 0; j < n; ++j)
                if (std::abs(tb.at(i, j)) > 1e-8) {
                    piv = j;
                    break;
                }
            if (piv >= 0) tb.pivot(i, piv);
            // else: redundant row; leave the artificial basic at value 0.
        }
        for (int j = n; j < n_total; ++j) allowed[j] = 0;
    }

    // Phase 2.
    std::vector<double> c2(n_total, 0.0);
    for (int i = 0; i < nx; ++i) {
        double ci = p.objective[i];
        if (ci == 0.0) continue;
        c2[vm[i].col] += ci * vm[i].sign;
        if (vm[i].col_neg >= 0) c2[vm[i].col_neg] -= ci * vm[i].sign;
    }
    RunResult rr = run_simplex(tb, c2, allowed, feas_tol);
    if (rr == RunResult::iteration_cap) return {LpStatus::numerical_failure, std::nullopt, std::nullopt};
    if (rr == RunResult::unbounded) return {LpStatus::unbounded, std::nullopt, std::nullopt};

    std::vector<double> z(n_total, 0.0);
    for (int i = 0; i < m; ++i) z[tb.basis[i]] = tb.rhs(i);
    std::vector<double> x(nx);
    for (int i = 0; i < nx; ++i) {
        double v = z[vm[i].col];
        if (vm[i].col_neg >= 0) v -= z[vm[i].col_neg];
        x[i] = vm[i].shift + vm[i].sign * v;
    }
    double obj = dot(p.objective, x);
    return {LpStatus::optimal, x, obj};
}

LpOutcome feasible_point(const LpProblem& p, double feas_tol) {
    LpProblem q = p;
    q.objective.assign(p.num_vars(), 0.0);
    return solve_lp(q, feas_tol);
}

}  // namespace myopic
