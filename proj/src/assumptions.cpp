#include "myopic/assumptions.h"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace myopic {

using nlohmann::json;

LpProblem transform_polytope(const PomdpModel& m, BoundKind kind, double eps_strict) {
    int X = m.num_states, A = m.num_actions;
    LpProblem p;
    p.objective.assign(X, 0.0);
    p.G = Matrix((X - 1) * A, X);
    p.h.assign((X - 1) * A, 0.0);
    double s = (kind == BoundKind::upper) ? 1.0 : -1.0;
    int r = 0;
    for (int a = 0; a < A; ++a) {
        const Matrix& P = m.transitions[a];
        for (int i = 0; i < X - 1; ++i, ++r) {
            // s * (M_i - M_{i+1}) f <= s * (c_{i+1,a} - c_{i,a}) - eps,
            // M = I - rho P
            for (int j = 0; j < X; ++j) {
                double mi = (i == j ? 1.0 : 0.0) - m.discount * P(i, j);
                double mi1 = (i + 1 == j ? 1.0 : 0.0) - m.discount * P(i + 1, j);
                p.G(r, j) = s * (mi - mi1);
            }
            p.h[r] = s * (m.costs(i + 1, a) - m.costs(i, a)) - eps_strict;
        }
    }
    return p;
}

// Minimum-l1 member of the polytope: variables (f, t), minimize sum t with
// -t <= f <= t.
static std::optional<std::vector<double>> min_l1_member(const LpProblem& poly) {
    int X = poly.G.cols;
    int rows = poly.G.rows;
    LpProblem p;
    p.objective.assign(2 * X, 0.0);
    for (int i = 0; i < X; ++i) p.objective[X + i] = 1.0;
    p.G = Matrix(rows + 2 * X, 2 * X);
    p.h.assign(rows + 2 * X, 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int j = 0; j < X; ++j) p.G(r, j) = poly.G(r, j);
        p.h[r] = poly.h[r];
    }
    for (int i = 0; i < X; ++i) {
        p.G(rows + 2 * i, i) = 1.0;
        p.G(rows + 2 * i, X + i) = -1.0;  // f_i - t_i <= 0
        p.G(rows + 2 * i + 1, i) = -1.0;
        p.G(rows + 2 * i + 1, X + i) = -1.0;  // -f_i - t_i <= 0
    }
    LpOutcome out = solve_lp(p);
    if (out.status != LpStatus::optimal) return std::nullopt;
    std::vector<double> f(out.solution->begin(), out.solution->begin() + X);
    return f;
}

std::optional<std::vector<double>> check_a1(const PomdpModel& m, double eps_strict) {
    return min_l1_member(transform_polytope(m, BoundKind::upper, eps_strict));
}

std::optional<std::vector<double>> check_a2(const PomdpModel& m, double eps_strict) {
    return min_l1_member(transform_polytope(m, BoundKind::lower, eps_strict));
}

A3Result check_a3(const PomdpModel& m, double tol) {
    A3Result res;
    res.margin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < m.num_actions; ++a) {
        A3Entry e;
        e.matrix = "P" + std::to_string(a + 1);
        e.result = is_tp2(m.transitions[a], tol);
        if (e.result.margin < res.margin) res.margin = e.result.margin;
        if (!e.result.holds) res.holds = false;
        res.entries.push_back(std::move(e));
    }
    for (int a = 0; a < m.num_actions; ++a) {
        A3Entry e;
        e.matrix = "B" + std::to_string(a + 1);
        if (m.observations[a].kind == ObservationKernel::Kind::gaussian) {
            // Gaussian densities are TP2 in (state, y); cells are intervals,
            // and TP2 is preserved by merging adjacent columns.
            e.analytic = true;
            e.result.holds = true;
            e.result.margin = std::numeric_limits<double>::infinity();
        } else {
            e.result = is_tp2(m.observations[a].probs, tol);
            if (e.result.margin < res.margin) res.margin = e.result.margin;
            if (!e.result.holds) res.holds = false;
        }
        res.entries.push_back(std::move(e));
    }
    return res;
}

Matrix gamma_matrix(const PomdpModel& mod, int j, int a, int y) {
    int X = mod.num_states;
    if (j < 1 || j >= X || a < 1 || a >= mod.num_actions || y < 1 || y > mod.num_obs())
        throw std::invalid_argument("gamma_matrix: index out of range");
    const Matrix& Pa = mod.transitions[a - 1];
    const Matrix& Pb = mod.transitions[a];
    const Matrix& Ba = mod.observations[a - 1].probs;
    const Matrix& Bb = mod.observations[a].probs;
    double t1 = Ba(j - 1, y - 1) * Bb(j, y - 1);
    double t2 = Ba(j, y - 1) * Bb(j - 1, y - 1);
    Matrix g(X, X);
    for (int mm = 0; mm < X; ++mm)
        for (int nn = 0; nn < X; ++nn)
            g(mm, nn) = t1 * Pa(mm, j - 1) * Pb(nn, j) - t2 * Pa(mm, j) * Pb(nn, j - 1);
    return g;
}

A4Result check_a4(const PomdpModel& m, double tol) {
    int X = m.num_states, A = m.num_actions, Y = m.num_obs();
    A4Result res;
    res.margin = std::numeric_limits<double>::infinity();
    for (int j = 1; j < X; ++j)
        for (int a = 1; a < A; ++a)
            for (int y = 1; y <= Y; ++y) {
                Matrix g = gamma_matrix(m, j, a, y);
                for (int mm = 0; mm < X; ++mm)
                    for (int nn = 0; nn < X; ++nn) {
                        double v = g(mm, nn) + g(nn, mm);
                        if (v < res.margin) res.margin = v;
                        if (v < -tol && !res.witness) {
                            res.holds = false;
                            res.witness = {j, a, y, mm + 1, nn + 1};
                        }
                    }
            }
    if (A < 2) res.margin = std::numeric_limits<double>::infinity();
    return res;
}

A5Result check_a5(const PomdpModel& m, double tol) {
    int X = m.num_states, A = m.num_actions, Y = m.num_obs();
    A5Result res;
    res.margin = std::numeric_limits<double>::infinity();
    // D_a = P_a B_a; slack(i, ybar, a) = sum_{y<=ybar} (D_a - D_{a+1})(i, y)
    std::vector<Matrix> d(A);
    for (int a = 0; a < A; ++a) d[a] = mat_mul(m.transitions[a], m.observations[a].probs);
    for (int i = 1; i <= X; ++i)
        for (int yb = 1; yb <= Y; ++yb)
            for (int a = 1; a < A; ++a) {
                double slack = 0.0;
                for (int y = 0; y < yb; ++y) slack += d[a - 1](i - 1, y) - d[a](i - 1, y);
                if (slack < res.margin) res.margin = slack;
                if (slack < -tol && !res.witness) {
                    res.holds = false;
                    res.witness = {i, yb, a};
                }
            }
    return res;
}

AssumptionReport check_all(const PomdpModel& m, double eps_strict, double tol) {
    AssumptionReport rep;
    rep.eps_strict = eps_strict;
    rep.tol = tol;
    rep.a1 = check_a1(m, eps_strict);
    rep.a2 = check_a2(m, eps_strict);
    rep.a3 = check_a3(m, tol);
    rep.a4 = check_a4(m, tol);
    rep.a5 = check_a5(m, tol);
    for (const auto& k : m.observations)
        if (k.kind == ObservationKernel::Kind::gaussian) rep.grid_approx = true;
    rep.overall = rep.a1.has_value() && rep.a2.has_value() && rep.a3.holds && rep.a4.holds &&
                  rep.a5.holds;
    return rep;
}

static json order_result_to_json(const OrderCheckResult& r) {
    json j;
    j["holds"] = r.holds;
    j["margin"] = std::isfinite(r.margin) ? json(r.margin) : json("inf");
    if (r.witness) j["witness"] = *r.witness;
    return j;
}

std::string report_to_json(const AssumptionReport& rep) {
    json j;
    j["eps_strict"] = rep.eps_strict;
    j["tol"] = rep.tol;
    j["grid_approx"] = rep.grid_approx;
    j["a1"]["holds"] = rep.a1.has_value();
    if (rep.a1) j["a1"]["f"] = *rep.a1;
    j["a2"]["holds"] = rep.a2.has_value();
    if (rep.a2) j["a2"]["f"] = *rep.a2;
    j["a3"]["holds"] = rep.a3.holds;
    j["a3"]["margin"] = std::isfinite(rep.a3.margin) ? json(rep.a3.margin) : json("inf");
    j["a3"]["entries"] = json::array();
    for (const auto& e : rep.a3.entries) {
        json je = order_result_to_json(e.result);
        je["matrix"] = e.matrix;
        je["analytic"] = e.analytic;
        j["a3"]["entries"].push_back(je);
    }
    j["a4"]["holds"] = rep.a4.holds;
    j["a4"]["margin"] = std::isfinite(rep.a4.margin) ? json(rep.a4.margin) : json("inf");
    if (rep.a4.witness) j["a4"]["witness"] = *rep.a4.witness;
    j["a5"]["holds"] = rep.a5.holds;
    j["a5"]["margin"] = std::isfinite(rep.a5.margin) ? json(rep.a5.margin) : json("inf");
    if (rep.a5.witness) j["a5"]["witness"] = *rep.a5.witness;
    j["overall"] = rep.overall;
    return j.dump(2);
}

}  // namespace myopic
