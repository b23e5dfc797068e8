#include "myopic/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "myopic/lp.h"

namespace myopic {

namespace {
constexpr double kSigmaFloor = 1e-300;
}

std::pair<std::vector<double>, double> belief_update(const PomdpModel& m,
                                                     const std::vector<double>& pi, int y, int a) {
    int X = m.num_states;
    if (static_cast<int>(pi.size()) != X) throw std::invalid_argument("belief_update: belief size");
    if (a < 1 || a > m.num_actions) throw std::invalid_argument("belief_update: action");
    if (y < 1 || y > m.num_obs()) throw std::invalid_argument("belief_update: observation");
    const Matrix& P = m.transitions[a - 1];
    const Matrix& B = m.observations[a - 1].probs;
    std::vector<double> u = mat_tvec(P, pi);
    double sigma = 0.0;
    for (int x = 0; x < X; ++x) {
        u[x] *= B(x, y - 1);
        sigma += u[x];
    }
    if (sigma <= kSigmaFloor)
        throw BeliefUpdateError("observation " + std::to_string(y) +
                                " has probability ~0 under the current belief");
    for (int x = 0; x < X; ++x) u[x] /= sigma;
    return {std::move(u), sigma};
}

std::vector<double> observation_distribution(const PomdpModel& m, const std::vector<double>& pi,
                                             int a) {
    if (a < 1 || a > m.num_actions) throw std::invalid_argument("observation_distribution: action");
    std::vector<double> pred = mat_tvec(m.transitions[a - 1], pi);
    return mat_tvec(m.observations[a - 1].probs, pred);
}

// ---- simplex lattice ----

SimplexGrid make_simplex_grid(int X, int d) {
    if (X < 1 || d < 1) throw std::invalid_argument("make_simplex_grid: X and d must be positive");
    SimplexGrid g;
    g.X = X;
    g.d = d;
    int nmax = d + X + 2;
    g.comb.assign(static_cast<size_t>(nmax) * (X + 2), 0);
    for (int n = 0; n < nmax; ++n)
        for (int k = 0; k <= X + 1; ++k) {
            long long v;
            if (k == 0)
                v = 1;
            else if (n == 0)
                v = 0;
            else
                v = g.comb[static_cast<size_t>(n - 1) * (X + 2) + k - 1] +
                    g.comb[static_cast<size_t>(n - 1) * (X + 2) + k];
            g.comb[static_cast<size_t>(n) * (X + 2) + k] = v;
        }
    g.num_points = static_cast<long>(g.binom(d + X - 1, X - 1));
    g.coords.reserve(static_cast<size_t>(g.num_points) * X);
    std::vector<int> c(X, 0);
    // lexicographic enumeration in the first coordinate, then the second, ...
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == X - 1) {
            c[pos] = rem;
            g.coords.insert(g.coords.end(), c.begin(), c.end());
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            c[pos] = k;
            self(self, pos + 1, rem - k);
        }
    };
    rec(rec, 0, d);
    return g;
}

long SimplexGrid::rank(const int* c) const {
    long long r = 0;
    int rem = d;
    for (int k = 0; k < X - 1; ++k) {
        int s = X - k - 1;
        r += binom(rem + s, s) - binom(rem - c[k] + s, s);
        rem -= c[k];
    }
    return static_cast<long>(r);
}

std::vector<double> SimplexGrid::belief(long idx) const {
    const int* c = point(idx);
    std::vector<double> pi(X);
    for (int j = 0; j < X; ++j) pi[j] = static_cast<double>(c[j]) / d;
    return pi;
}

void SimplexGrid::nearest(const std::vector<double>& pi, int* out) const {
    // largest-remainder rounding
    int total = 0;
    std::vector<std::pair<double, int>> frac(X);
    for (int j = 0; j < X; ++j) {
        double y = pi[j] * d;
        int f = static_cast<int>(std::floor(y));
        if (f < 0) f = 0;
        if (f > d) f = d;
        out[j] = f;
        total += f;
        frac[j] = {y - f, j};
    }
    int rem = d - total;
    std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int k = 0; k < rem && k < X; ++k) out[frac[k].second] += 1;
    // pathological rounding drift: dump any leftover into the largest coord
    if (rem > X) {
        int jmax = 0;
        for (int j = 1; j < X; ++j)
            if (out[j] > out[jmax]) jmax = j;
        out[jmax] += rem - X;
    }
}

int SimplexGrid::corners(const std::vector<double>& pi, long* idx, double* w) const {
    // Freudenthal triangulation in suffix-sum coordinates: exact convex
    // reproduction of pi from at most X lattice vertices.
    std::vector<double> xt(X);
    double run = 0.0;
    for (int j = X - 1; j >= 0; --j) {
        run += pi[j];
        xt[j] = run * d;
    }
    xt[0] = d;
    std::vector<int> base(X);
    std::vector<double> r(X);
    base[0] = d;
    r[0] = 0.0;
    for (int j = 1; j < X; ++j) {
        double v = std::min(std::max(xt[j], 0.0), static_cast<double>(d));
        base[j] = static_cast<int>(std::floor(v));
        r[j] = v - base[j];
        if (base[j] > base[j - 1]) {  // fp guard; suffix sums are non-increasing
            base[j] = base[j - 1];
            r[j] = 0.0;
        }
    }
    std::vector<int> order(X - 1);
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (r[a] != r[b]) return r[a] > r[b];
        return a < b;
    });
    std::vector<int> u = base;
    std::vector<int> cc(X);
    auto emit = [&](int k, double weight) {
        for (int j = 0; j < X; ++j) cc[j] = u[j] - (j + 1 < X ? u[j + 1] : 0);
        idx[k] = rank(cc.data());
        w[k] = weight;
    };
    emit(0, X >= 2 ? 1.0 - r[order[0]] : 1.0);
    for (int k = 0; k < X - 1; ++k) {
        int j = order[k];
        // On a degenerate face (zero belief coordinates) the slot is already
        // saturated against its neighbor; the remaining weights are all zero,
        // so skipping the increment keeps coordinates valid without changing
        // the reproduced point.
        if (u[j] < u[j - 1]) u[j] += 1;
        double weight = (k + 1 < X - 1) ? r[j] - r[order[k + 1]] : r[j];
        emit(k + 1, weight);
    }
    return X;
}

// ---- grid value iteration ----

namespace {

// Projection of every grid point's posterior, per (action, observation).
struct ProjTables {
    bool ready = false;
    int X = 0, Y = 0, A = 0;
    long N = 0;
    std::vector<double> sigma;  // A*Y*N
    std::vector<int> nidx;      // nearest: A*Y*N
    std::vector<int> bidx;      // barycentric: A*Y*N*X
    std::vector<double> bw;     // barycentric: A*Y*N*X
    size_t at(int a, int y, long n) const {
        return (static_cast<size_t>(a) * Y + y) * N + n;
    }
};

}  // namespace

ValueFunctionGrid grid_value_iteration(const PomdpModel& m, int d, double stop_tol,
                                       GridInterp interp, long max_iter) {
    int X = m.num_states, A = m.num_actions, Y = m.num_obs();
    double rho = m.discount;
    ValueFunctionGrid out;
    out.grid = make_simplex_grid(X, d);
    out.interp = interp;
    out.discount = rho;
    out.stop_tol = stop_tol;
    long N = out.grid.num_points;

    std::vector<double> cost(static_cast<size_t>(A) * N);
    for (long n = 0; n < N; ++n) {
        std::vector<double> pi = out.grid.belief(n);
        for (int a = 0; a < A; ++a) {
            double s = 0.0;
            for (int x = 0; x < X; ++x) s += m.costs(x, a) * pi[x];
            cost[static_cast<size_t>(a) * N + n] = s;
        }
    }

    size_t per_entry = sizeof(double) + (interp == GridInterp::nearest
                                             ? sizeof(int)
                                             : static_cast<size_t>(X) * (sizeof(int) + sizeof(double)));
    size_t bytes = static_cast<size_t>(A) * Y * N * per_entry;
    constexpr size_t kBudget = 512ull << 20;

    ProjTables tab;
    tab.X = X;
    tab.Y = Y;
    tab.A = A;
    tab.N = N;
    std::vector<long> cidx(X);
    std::vector<double> cw(X);
    auto project = [&](int a, int y, const std::vector<double>& pi, double* sigma_out,
                       int* nearest_out, long* bary_idx, double* bary_w) {
        std::vector<double> u = mat_tvec(m.transitions[a], pi);
        const Matrix& B = m.observations[a].probs;
        double s = 0.0;
        for (int x = 0; x < X; ++x) {
            u[x] *= B(x, y);
            s += u[x];
        }
        *sigma_out = s;
        if (s <= kSigmaFloor) {  // unreachable observation: weightless
            if (nearest_out) *nearest_out = 0;
            if (bary_idx)
                for (int k = 0; k < X; ++k) {
                    bary_idx[k] = 0;
                    bary_w[k] = 0.0;
                }
            *sigma_out = 0.0;
            return;
        }
        for (int x = 0; x < X; ++x) u[x] /= s;
        if (nearest_out) {
            std::vector<int> c(X);
            out.grid.nearest(u, c.data());
            *nearest_out = static_cast<int>(out.grid.rank(c.data()));
        } else {
            out.grid.corners(u, bary_idx, bary_w);
        }
    };

    if (bytes <= kBudget) {
        tab.ready = true;
        tab.sigma.assign(static_cast<size_t>(A) * Y * N, 0.0);
        if (interp == GridInterp::nearest)
            tab.nidx.assign(static_cast<size_t>(A) * Y * N, 0);
        else {
            tab.bidx.assign(static_cast<size_t>(A) * Y * N * X, 0);
            tab.bw.assign(static_cast<size_t>(A) * Y * N * X, 0.0);
        }
        for (long n = 0; n < N; ++n) {
            std::vector<double> pi = out.grid.belief(n);
            for (int a = 0; a < A; ++a)
                for (int y = 0; y < Y; ++y) {
                    size_t e = tab.at(a, y, n);
                    if (interp == GridInterp::nearest) {
                        project(a, y, pi, &tab.sigma[e], &tab.nidx[e], nullptr, nullptr);
                    } else {
                        project(a, y, pi, &tab.sigma[e], nullptr, cidx.data(), cw.data());
                        for (int k = 0; k < X; ++k) {
                            tab.bidx[e * X + k] = static_cast<int>(cidx[k]);
                            tab.bw[e * X + k] = cw[k];
                        }
                    }
                }
        }
    }

    std::vector<double> V(N, 0.0), Vn(N, 0.0);
    out.greedy.assign(N, 1);
    double eff = rho > 0.0 ? stop_tol * (1.0 - rho) / rho
                           : std::numeric_limits<double>::infinity();

    auto backup = [&](bool record_greedy) {
        for (long n = 0; n < N; ++n) {
            std::vector<double> pi;
            if (!tab.ready) pi = out.grid.belief(n);
            double best = std::numeric_limits<double>::infinity();
            int best_a = 1;
            for (int a = 0; a < A; ++a) {
                double q = cost[static_cast<size_t>(a) * N + n];
                for (int y = 0; y < Y; ++y) {
                    double s, vhat = 0.0;
                    if (tab.ready) {
                        size_t e = tab.at(a, y, n);
                        s = tab.sigma[e];
                        if (s == 0.0) continue;
                        if (interp == GridInterp::nearest)
                            vhat = V[tab.nidx[e]];
                        else
                            for (int k = 0; k < X; ++k)
                                vhat += tab.bw[e * X + k] * V[tab.bidx[e * X + k]];
                    } else {
                        int ni = 0;
                        if (interp == GridInterp::nearest) {
                            project(a, y, pi, &s, &ni, nullptr, nullptr);
                            if (s == 0.0) continue;
                            vhat = V[ni];
                        } else {
                            project(a, y, pi, &s, nullptr, cidx.data(), cw.data());
                            if (s == 0.0) continue;
                            for (int k = 0; k < X; ++k) vhat += cw[k] * V[cidx[k]];
                        }
                    }
                    q += rho * s * vhat;
                }
                if (q < best) {
                    best = q;
                    best_a = a + 1;
                }
            }
            Vn[n] = best;
            if (record_greedy) out.greedy[n] = best_a;
        }
    };

    for (long it = 0; it < max_iter; ++it) {
        backup(false);
        double change = 0.0;
        for (long n = 0; n < N; ++n) change = std::max(change, std::abs(Vn[n] - V[n]));
        V.swap(Vn);
        out.iterations = static_cast<int>(it + 1);
        out.residual = change;
        if (change <= eff || rho == 0.0) {
            out.converged = true;
            break;
        }
    }
    backup(true);  // greedy actions at the fixed point
    out.values = std::move(V);
    return out;
}

double ValueFunctionGrid::value_at(const std::vector<double>& pi) const {
    if (interp == GridInterp::nearest) {
        std::vector<int> c(grid.X);
        grid.nearest(pi, c.data());
        return values[grid.rank(c.data())];
    }
    std::vector<long> idx(grid.X);
    std::vector<double> w(grid.X);
    int k = grid.corners(pi, idx.data(), w.data());
    double v = 0.0;
    for (int i = 0; i < k; ++i) v += w[i] * values[idx[i]];
    return v;
}

std::vector<double> grid_q_values(const PomdpModel& m, const ValueFunctionGrid& v,
                                  const std::vector<double>& pi) {
    int X = m.num_states, A = m.num_actions, Y = m.num_obs();
    std::vector<double> q(A, 0.0);
    for (int a = 0; a < A; ++a) {
        double s = 0.0;
        for (int x = 0; x < X; ++x) s += m.costs(x, a) * pi[x];
        std::vector<double> u = mat_tvec(m.transitions[a], pi);
        const Matrix& B = m.observations[a].probs;
        for (int y = 0; y < Y; ++y) {
            double sig = 0.0;
            std::vector<double> post(X);
            for (int x = 0; x < X; ++x) {
                post[x] = u[x] * B(x, y);
                sig += post[x];
            }
            if (sig <= kSigmaFloor) continue;
            for (int x = 0; x < X; ++x) post[x] /= sig;
            s += m.discount * sig * v.value_at(post);
        }
        q[a] = s;
    }
    return q;
}

int grid_greedy_action(const PomdpModel& m, const ValueFunctionGrid& v,
                       const std::vector<double>& pi) {
    std::vector<double> q = grid_q_values(m, v, pi);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a)
        if (q[a] < q[best]) best = a;
    return best + 1;
}

// ---- exact finite-horizon alpha vectors ----

namespace {

struct AlphaVec {
    std::vector<double> v;
    int action = 0;
};

// Does some belief strictly prefer u over every member of kept?
// Returns the witness belief if so.
std::optional<std::vector<double>> witness_belief(const std::vector<double>& u,
                                                  const std::vector<AlphaVec>& kept,
                                                  double tol) {
    int X = static_cast<int>(u.size());
    LpProblem p;
    p.objective.assign(X + 1, 0.0);
    p.objective[X] = -1.0;  // maximize delta
    p.G = Matrix(static_cast<int>(kept.size()), X + 1);
    p.h.assign(kept.size(), 0.0);
    for (size_t r = 0; r < kept.size(); ++r) {
        for (int x = 0; x < X; ++x) p.G(static_cast<int>(r), x) = u[x] - kept[r].v[x];
        p.G(static_cast<int>(r), X) = 1.0;
    }
    p.E = Matrix(1, X + 1);
    for (int x = 0; x < X; ++x) p.E(0, x) = 1.0;
    p.d = {1.0};
    p.lower.assign(X + 1, 0.0);
    p.lower[X].reset();  // delta free
    p.upper.assign(X + 1, std::nullopt);
    LpOutcome out = solve_lp(p);
    if (out.status != LpStatus::optimal) return std::nullopt;
    double delta = (*out.solution)[X];
    if (delta <= tol) return std::nullopt;
    return std::vector<double>(out.solution->begin(), out.solution->begin() + X);
}

std::vector<AlphaVec> prune(std::vector<AlphaVec> cand, double tol, long cap) {
    if (static_cast<long>(cand.size()) > cap)
        throw SolverError("alpha-vector cap exceeded (" + std::to_string(cand.size()) + " vectors)");
    // pointwise dominance filter (for minimization: w <= u kills u)
    std::vector<char> dead(cand.size(), 0);
    for (size_t i = 0; i < cand.size(); ++i) {
        if (dead[i]) continue;
        for (size_t j = 0; j < cand.size(); ++j) {
            if (i == j || dead[j]) continue;
            bool le = true, eq = true;
            for (size_t x = 0; x < cand[i].v.size(); ++x) {
                if (cand[j].v[x] > cand[i].v[x] + 1e-15) {
                    le = false;
                    break;
                }
                if (cand[j].v[x] != cand[i].v[x]) eq = false;
            }
            if (le && (!eq || j < i)) {
                dead[i] = 1;
                break;
            }
        }
    }
    std::vector<AlphaVec> pool;
    for (size_t i = 0; i < cand.size(); ++i)
        if (!dead[i]) pool.push_back(std::move(cand[i]));

    std::vector<AlphaVec> kept;
    std::vector<char> used(pool.size(), 0);
    size_t remaining = pool.size();
    size_t cursor = 0;
    while (remaining > 0) {
        while (cursor < pool.size() && used[cursor]) ++cursor;
        std::vector<double> pi;
        if (kept.empty()) {
            pi.assign(pool[cursor].v.size(), 1.0 / pool[cursor].v.size());
        } else {
            auto wb = witness_belief(pool[cursor].v, kept, tol);
            if (!wb) {
                used[cursor] = 1;
                --remaining;
                continue;
            }
            pi = *wb;
        }
        // move the best candidate at pi into the kept set
        size_t best = pool.size();
        double best_v = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            double v = dot(pool[i].v, pi);
            if (v < best_v - 1e-15) {
                best_v = v;
                best = i;
            }
        }
        used[best] = 1;
        --remaining;
        kept.push_back(pool[best]);
    }
    return kept;
}

}  // namespace

AlphaVectorSet exact_finite_horizon(const PomdpModel& m, int horizon, long cap, double prune_tol) {
    if (horizon < 1) throw std::invalid_argument("exact_finite_horizon: horizon must be >= 1");
    int X = m.num_states, A = m.num_actions, Y = m.num_obs();
    double rho = m.discount;

    // M[a][y](x, x') = P_a(x, x') B_a(x', y)
    std::vector<std::vector<Matrix>> M(A, std::vector<Matrix>(Y));
    for (int a = 0; a < A; ++a)
        for (int y = 0; y < Y; ++y) {
            Matrix mm(X, X);
            for (int x = 0; x < X; ++x)
                for (int xp = 0; xp < X; ++xp)
                    mm(x, xp) = m.transitions[a](x, xp) * m.observations[a].probs(xp, y);
            M[a][y] = std::move(mm);
        }

    std::vector<AlphaVec> lambda;
    for (int t = 1; t <= horizon; ++t) {
        std::vector<AlphaVec> next;
        for (int a = 0; a < A; ++a) {
            std::vector<double> ca(X);
            for (int x = 0; x < X; ++x) ca[x] = m.costs(x, a);
            std::vector<AlphaVec> acc;
            if (t == 1 || lambda.empty()) {
                acc.push_back({ca, a + 1});
            } else {
                acc.push_back({ca, a + 1});
                for (int y = 0; y < Y; ++y) {
                    std::vector<AlphaVec> proj;
                    proj.reserve(lambda.size());
                    for (const auto& l : lambda) proj.push_back({mat_vec(M[a][y], l.v), a + 1});
                    proj = prune(std::move(proj), prune_tol, cap);
                    if (static_cast<long>(acc.size()) * static_cast<long>(proj.size()) > cap)
                        throw SolverError("alpha-vector cap exceeded in cross-sum");
                    std::vector<AlphaVec> cross;
                    cross.reserve(acc.size() * proj.size());
                    for (const auto& u : acc)
                        for (const auto& g : proj) {
                            AlphaVec w;
                            w.action = a + 1;
                            w.v.resize(X);
                            for (int x = 0; x < X; ++x) w.v[x] = u.v[x] + rho * g.v[x];
                            cross.push_back(std::move(w));
                        }
                    acc = prune(std::move(cross), prune_tol, cap);
                }
            }
            for (auto& u : acc) next.push_back(std::move(u));
        }
        lambda = prune(std::move(next), prune_tol, cap);
    }
    std::sort(lambda.begin(), lambda.end(), [](const AlphaVec& a, const AlphaVec& b) {
        if (a.action != b.action) return a.action < b.action;
        return a.v < b.v;
    });
    AlphaVectorSet res;
    res.horizon = horizon;
    res.discount = rho;
    for (auto& l : lambda) {
        res.vectors.push_back(std::move(l.v));
        res.actions.push_back(l.action);
    }
    return res;
}

double AlphaVectorSet::value_at(const std::vector<double>& pi) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vectors) best = std::min(best, dot(v, pi));
    return best;
}

int AlphaVectorSet::best_action(const std::vector<double>& pi) const {
    double best = std::numeric_limits<double>::infinity();
    int act = 1;
    for (size_t i = 0; i < vectors.size(); ++i) {
        double v = dot(vectors[i], pi);
        if (v < best) {
            best = v;
            act = actions[i];
        }
    }
    return act;
}

}  // namespace myopic
