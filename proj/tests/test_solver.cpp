#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

#include "myopic/evaluation.h"
#include "myopic/model.h"
#include "myopic/solver.h"

using namespace myopic;

namespace {

PomdpModel tiny_model() {
    // 2 states, 2 actions, 2 observations, no zero kernel entries
    PomdpModel m;
    m.num_states = 2;
    m.num_actions = 2;
    m.discount = 0.5;
    Matrix p1(2, 2), p2(2, 2);
    p1(0, 0) = 0.8;
    p1(0, 1) = 0.2;
    p1(1, 0) = 0.3;
    p1(1, 1) = 0.7;
    p2(0, 0) = 0.6;
    p2(0, 1) = 0.4;
    p2(1, 0) = 0.1;
    p2(1, 1) = 0.9;
    m.transitions = {p1, p2};
    ObservationKernel k1, k2;
    k1.probs = Matrix(2, 2);
    k1.probs(0, 0) = 0.9;
    k1.probs(0, 1) = 0.1;
    k1.probs(1, 0) = 0.25;
    k1.probs(1, 1) = 0.75;
    k2.probs = Matrix(2, 2);
    k2.probs(0, 0) = 0.7;
    k2.probs(0, 1) = 0.3;
    k2.probs(1, 0) = 0.4;
    k2.probs(1, 1) = 0.6;
    m.observations = {k1, k2};
    m.costs = Matrix(2, 2);
    m.costs(0, 0) = 1.0;
    m.costs(1, 0) = 3.0;
    m.costs(0, 1) = 2.0;
    m.costs(1, 1) = 2.5;
    return m;
}

// textbook expectimin recursion, horizon t
double brute_value(const PomdpModel& m, const std::vector<double>& pi, int t) {
    if (t == 0) return 0.0;
    int X = m.num_states;
    double best = 1e300;
    for (int a = 1; a <= m.num_actions; ++a) {
        double q = 0.0;
        for (int x = 0; x < X; ++x) q += m.costs(x, a - 1) * pi[x];
        std::vector<double> pred = mat_tvec(m.transitions[a - 1], pi);
        for (int y = 1; y <= m.num_obs(); ++y) {
            double sigma = 0.0;
            std::vector<double> post(X);
            for (int x = 0; x < X; ++x) {
                post[x] = pred[x] * m.observations[a - 1].probs(x, y - 1);
                sigma += post[x];
            }
            if (sigma <= 1e-14) continue;
            for (int x = 0; x < X; ++x) post[x] /= sigma;
            q += m.discount * sigma * brute_value(m, post, t - 1);
        }
        best = std::min(best, q);
    }
    return best;
}

}  // namespace

TEST_CASE("belief update: frozen filter values on the 3-state example") {
    PomdpModel m = builtin_example("1");
    std::vector<double> pi{1.0 / 3, 1.0 / 3, 1.0 / 3};

    auto [t1, s1] = belief_update(m, pi, 1, 1);
    CHECK(std::abs(s1 - 0.550509718961) < 1e-9);
    CHECK(std::abs(t1[0] - 0.896663984568) < 1e-9);
    CHECK(std::abs(t1[1] - 0.099523936343) < 1e-9);
    CHECK(std::abs(t1[2] - 0.003812079089) < 1e-9);

    auto [t2, s2] = belief_update(m, pi, 1, 2);
    CHECK(std::abs(s2 - 0.523249690000) < 1e-9);
    CHECK(std::abs(t2[0] - 0.678844377337) < 1e-9);
    CHECK(std::abs(t2[1] - 0.297587906837) < 1e-9);
    CHECK(std::abs(t2[2] - 0.023567715826) < 1e-9);

    // posterior is a belief
    double sum = 0.0;
    for (double v : t1) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("observation distribution matches the filter normalizers") {
    PomdpModel m = builtin_example("1");
    std::vector<double> pi{0.2, 0.5, 0.3};
    for (int a = 1; a <= 2; ++a) {
        std::vector<double> dist = observation_distribution(m, pi, a);
        REQUIRE(static_cast<int>(dist.size()) == m.num_obs());
        double total = 0.0;
        for (int y = 1; y <= m.num_obs(); ++y) {
            auto [post, sigma] = belief_update(m, pi, y, a);
            CHECK(dist[y - 1] == doctest::Approx(sigma).epsilon(1e-12));
            total += dist[y - 1];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("belief update rejects impossible observations and bad arguments") {
    PomdpModel m = tiny_model();
    m.observations[0].probs(0, 1) = 0.0;  // kill column 2 of kernel 1
    m.observations[0].probs(0, 0) = 1.0;
    m.observations[0].probs(1, 1) = 0.0;
    m.observations[0].probs(1, 0) = 1.0;
    std::vector<double> pi{0.5, 0.5};
    CHECK_THROWS_AS(belief_update(m, pi, 2, 1), BeliefUpdateError);
    CHECK_NOTHROW(belief_update(m, pi, 1, 1));
    CHECK_THROWS_AS(belief_update(m, pi, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(belief_update(m, pi, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(belief_update(m, {1.0}, 1, 1), std::invalid_argument);
}

TEST_CASE("simplex lattice: sizes, ordering and rank round trip") {
    SimplexGrid g3 = make_simplex_grid(3, 100);
    CHECK(g3.num_points == 5151);
    SimplexGrid g8 = make_simplex_grid(8, 12);
    CHECK(g8.num_points == 50388);
    SimplexGrid g10 = make_simplex_grid(10, 12);
    CHECK(g10.num_points == 293930);

    // enumeration starts at e_X and ends at e_1
    std::vector<double> first = g3.belief(0);
    CHECK(first == std::vector<double>{0.0, 0.0, 1.0});
    std::vector<double> last = g3.belief(g3.num_points - 1);
    CHECK(last == std::vector<double>{1.0, 0.0, 0.0});

    for (long i = 0; i < g3.num_points; ++i) CHECK(g3.rank(g3.point(i)) == i);
    SimplexGrid g8s = make_simplex_grid(8, 5);
    CHECK(g8s.num_points == 792);
    for (long i = 0; i < g8s.num_points; ++i) CHECK(g8s.rank(g8s.point(i)) == i);

    CHECK_THROWS_AS(make_simplex_grid(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_simplex_grid(3, 0), std::invalid_argument);
}

TEST_CASE("nearest uses largest-remainder rounding") {
    SimplexGrid g = make_simplex_grid(3, 2);
    int c[3];
    g.nearest({0.4, 0.35, 0.25}, c);
    CHECK(c[0] == 1);
    CHECK(c[1] == 1);
    CHECK(c[2] == 0);

    // a lattice point maps to itself
    for (long i = 0; i < g.num_points; ++i) {
        g.nearest(g.belief(i), c);
        CHECK(g.rank(c) == i);
    }

    // rounded coordinates always sum to d
    SimplexGrid g4 = make_simplex_grid(4, 9);
    std::mt19937_64 gen(2);
    int c4[4];
    for (int t = 0; t < 200; ++t) {
        g4.nearest(sample_belief_uniform(gen, 4), c4);
        CHECK(c4[0] + c4[1] + c4[2] + c4[3] == 9);
    }
}

TEST_CASE("corner weights reproduce the belief exactly") {
    std::mt19937_64 gen(77);
    for (int X : {3, 4}) {
        SimplexGrid g = make_simplex_grid(X, X == 3 ? 7 : 5);
        std::vector<long> idx(X);
        std::vector<double> w(X);
        for (int t = 0; t < 300; ++t) {
            std::vector<double> pi = sample_belief_uniform(gen, X);
            int k = g.corners(pi, idx.data(), w.data());
            REQUIRE(k == X);
            double wsum = 0.0;
            std::vector<double> rec(X, 0.0);
            for (int i = 0; i < k; ++i) {
                CHECK(w[i] >= -1e-12);
                wsum += w[i];
                std::vector<double> b = g.belief(idx[i]);
                for (int j = 0; j < X; ++j) rec[j] += w[i] * b[j];
            }
            CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
            for (int j = 0; j < X; ++j) CHECK(std::abs(rec[j] - pi[j]) < 1e-12);
        }
    }
}

TEST_CASE("corners stay valid on faces of the simplex") {
    // beliefs with exact zero coordinates saturate leading lattice slots;
    // every emitted index must still be a real lattice point
    std::mt19937_64 gen(78);
    int X = 8, d = 12;
    SimplexGrid g = make_simplex_grid(X, d);
    std::vector<long> idx(X);
    std::vector<double> w(X);
    auto scan = [&](const std::vector<double>& pi) {
        g.corners(pi, idx.data(), w.data());
        double wsum = 0.0;
        std::vector<double> rec(X, 0.0);
        for (int k = 0; k < X; ++k) {
            REQUIRE(idx[k] >= 0);
            REQUIRE(idx[k] < g.num_points);
            CHECK(w[k] >= -1e-12);
            wsum += w[k];
            std::vector<double> b = g.belief(idx[k]);
            for (int j = 0; j < X; ++j) rec[j] += w[k] * b[j];
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 0; j < X; ++j) CHECK(std::abs(rec[j] - pi[j]) < 1e-12);
    };
    for (int j = 0; j < X; ++j) {  // vertices
        std::vector<double> pi(X, 0.0);
        pi[j] = 1.0;
        scan(pi);
    }
    for (int t = 0; t < 500; ++t) {  // sparse interiors of random faces
        std::vector<double> pi(X, 0.0);
        int nz = 1 + static_cast<int>(uniform01(gen) * (X - 1));
        double s = 0.0;
        for (int k = 0; k < nz; ++k) {
            int j = static_cast<int>(uniform01(gen) * X);
            if (pi[j] == 0.0) s += pi[j] = 0.05 + uniform01(gen);
        }
        for (int j = 0; j < X; ++j) pi[j] /= s;
        scan(pi);
    }
}

TEST_CASE("value iteration: constant costs give the geometric-series value") {
    PomdpModel m = tiny_model();
    m.costs = Matrix(2, 2, 1.5);
    for (GridInterp interp : {GridInterp::nearest, GridInterp::barycentric}) {
        ValueFunctionGrid v = grid_value_iteration(m, 20, 1e-8, interp);
        CHECK(v.converged);
        for (long n = 0; n < v.grid.num_points; ++n)
            CHECK(v.values[n] == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(v.value_at({0.37, 0.63}) == doctest::Approx(3.0).epsilon(1e-6));
    }
}

TEST_CASE("value iteration with no lookahead reduces to the myopic rule") {
    PomdpModel m = tiny_model();
    m.discount = 0.0;
    ValueFunctionGrid v = grid_value_iteration(m, 25, 1e-8);
    CHECK(v.converged);
    CHECK(v.iterations == 1);
    for (long n = 0; n < v.grid.num_points; ++n) {
        std::vector<double> pi = v.grid.belief(n);
        double c1 = m.costs(0, 0) * pi[0] + m.costs(1, 0) * pi[1];
        double c2 = m.costs(0, 1) * pi[0] + m.costs(1, 1) * pi[1];
        CHECK(v.values[n] == doctest::Approx(std::min(c1, c2)).epsilon(1e-12));
        CHECK(v.greedy[n] == (c1 <= c2 ? 1 : 2));
    }
}

TEST_CASE("grid backup is a fixed point and greedy actions match the q scan") {
    PomdpModel m = builtin_example("1");
    ValueFunctionGrid v = grid_value_iteration(m, 30, 1e-6);
    REQUIRE(v.converged);
    std::mt19937_64 gen(8);
    for (int t = 0; t < 25; ++t) {
        long n = static_cast<long>(uniform01(gen) * v.grid.num_points);
        std::vector<double> pi = v.grid.belief(n);
        std::vector<double> q = grid_q_values(m, v, pi);
        REQUIRE(q.size() == 2);
        double qmin = std::min(q[0], q[1]);
        CHECK(std::abs(qmin - v.values[n]) < 2e-6);
        CHECK(grid_greedy_action(m, v, pi) == v.greedy[n]);
    }
}

TEST_CASE("exact alpha vectors match brute-force expectimin") {
    PomdpModel m = tiny_model();
    for (int horizon : {1, 2, 4}) {
        AlphaVectorSet s = exact_finite_horizon(m, horizon);
        CHECK(s.horizon == horizon);
        REQUIRE(!s.vectors.empty());
        std::mt19937_64 gen(13);
        for (int t = 0; t < 20; ++t) {
            std::vector<double> pi = sample_belief_uniform(gen, 2);
            double want = brute_value(m, pi, horizon);
            CHECK(std::abs(s.value_at(pi) - want) < 1e-9);
        }
        // corners too
        CHECK(std::abs(s.value_at({1.0, 0.0}) - brute_value(m, {1.0, 0.0}, horizon)) < 1e-9);
        CHECK(std::abs(s.value_at({0.0, 1.0}) - brute_value(m, {0.0, 1.0}, horizon)) < 1e-9);
    }

    // one-stage set is the pruned cost columns with their own actions
    AlphaVectorSet one = exact_finite_horizon(m, 1);
    for (size_t i = 0; i < one.vectors.size(); ++i) {
        int a = one.actions[i];
        for (int x = 0; x < 2; ++x) CHECK(one.vectors[i][x] == m.costs(x, a - 1));
    }

    // best_action agrees with a direct scan over the stored vectors
    std::mt19937_64 gen(14);
    AlphaVectorSet s4 = exact_finite_horizon(m, 4);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> pi = sample_belief_uniform(gen, 2);
        int act = s4.best_action(pi);
        double best = 1e300;
        int want = 1;
        for (size_t i = 0; i < s4.vectors.size(); ++i) {
            double val = dot(s4.vectors[i], pi);
            if (val < best) {
                best = val;
                want = s4.actions[i];
            }
        }
        CHECK(act == want);
    }
}

TEST_CASE("alpha-vector cap trips loudly") {
    PomdpModel m = tiny_model();
    CHECK_THROWS_AS(exact_finite_horizon(m, 2, 1), SolverError);
    CHECK_THROWS_AS(exact_finite_horizon(m, 0), std::invalid_argument);
}
