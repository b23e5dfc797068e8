#include <doctest.h>

#include <stdexcept>

#include <optional>
#include <vector>

#include "myopic/lp.h"

using namespace myopic;

namespace {

Matrix mat(int r, int c, std::vector<double> v) {
    Matrix m(r, c);
    m.a = std::move(v);
    return m;
}

std::vector<std::optional<double>> zeros(int n) {
    return std::vector<std::optional<double>>(n, 0.0);
}

std::vector<std::optional<double>> none(int n) {
    return std::vector<std::optional<double>>(n, std::nullopt);
}

}  // namespace

TEST_CASE("unique vertex optimum") {
    // min -x - 2y  s.t.  x + y <= 1, x,y >= 0  ->  (0,1), value -2
    LpProblem p;
    p.objective = {-1.0, -2.0};
    p.G = mat(1, 2, {1.0, 1.0});
    p.h = {1.0};
    p.lower = zeros(2);
    LpOutcome out = solve_lp(p);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(*out.objective_value == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK((*out.solution)[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK((*out.solution)[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("infeasible bounds and infeasible rows") {
    // x <= -1 together with x >= 0
    LpProblem p;
    p.objective = {1.0};
    p.G = mat(1, 1, {1.0});
    p.h = {-1.0};
    p.lower = zeros(1);
    CHECK(solve_lp(p).status == LpStatus::infeasible);

    // crossed variable bounds short-circuit
    LpProblem q;
    q.objective = {1.0};
    q.lower = {2.0};
    q.upper = {1.0};
    CHECK(solve_lp(q).status == LpStatus::infeasible);

    // inconsistent equalities
    LpProblem r;
    r.objective = {0.0, 0.0};
    r.E = mat(2, 2, {1.0, 1.0, 1.0, 1.0});
    r.d = {1.0, 2.0};
    CHECK(solve_lp(r).status == LpStatus::infeasible);
}

TEST_CASE("unbounded directions") {
    // min -x over x >= 0, no other rows
    LpProblem p;
    p.objective = {-1.0};
    p.lower = zeros(1);
    CHECK(solve_lp(p).status == LpStatus::unbounded);

    // free variable, objective pushes it down
    LpProblem q;
    q.objective = {1.0};
    CHECK(solve_lp(q).status == LpStatus::unbounded);
}

TEST_CASE("free variables and shifts") {
    // min x  s.t. x >= -5  ->  -5 (shifted variable)
    LpProblem p;
    p.objective = {1.0};
    p.lower = {-5.0};
    LpOutcome out = solve_lp(p);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(*out.objective_value == doctest::Approx(-5.0).epsilon(1e-10));

    // upper bound only: max x  <=>  min -x  s.t. x <= 2.5
    LpProblem q;
    q.objective = {-1.0};
    q.upper = {2.5};
    out = solve_lp(q);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK((*out.solution)[0] == doctest::Approx(2.5).epsilon(1e-10));

    // two-sided box
    LpProblem b;
    b.objective = {-1.0, 1.0};
    b.lower = {-1.0, -2.0};
    b.upper = {3.0, 7.0};
    out = solve_lp(b);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK((*out.solution)[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK((*out.solution)[1] == doctest::Approx(-2.0).epsilon(1e-10));

    // genuinely free variable pinned only by an equality
    LpProblem f;
    f.objective = {1.0, 0.0};
    f.E = mat(1, 2, {1.0, -1.0});
    f.d = {4.0};
    f.lower = {std::nullopt, 0.0};
    f.upper = none(2);
    out = solve_lp(f);
    REQUIRE(out.status == LpStatus::optimal);
    // x = y + 4, y >= 0, min x -> x = 4
    CHECK(*out.objective_value == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("equality-only problem") {
    // min x1  s.t.  x1 + x2 = 1, x1 + 2 x2 = 1.5, x >= 0
    LpProblem p;
    p.objective = {1.0, 0.0};
    p.E = mat(2, 2, {1.0, 1.0, 1.0, 2.0});
    p.d = {1.0, 1.5};
    p.lower = zeros(2);
    LpOutcome out = solve_lp(p);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK((*out.solution)[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((*out.solution)[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("redundant rows are harmless") {
    LpProblem p;
    p.objective = {-1.0, -1.0};
    p.G = mat(4, 2, {1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 1.0, 0.0});
    p.h = {1.0, 1.0, 2.0, 1.0};
    p.lower = zeros(2);
    LpOutcome out = solve_lp(p);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(*out.objective_value == doctest::Approx(-1.0).epsilon(1e-10));

    // redundant equality (duplicate row) leaves an artificial stuck at zero
    LpProblem q;
    q.objective = {1.0, 1.0};
    q.E = mat(2, 2, {1.0, 1.0, 1.0, 1.0});
    q.d = {1.0, 1.0};
    q.lower = zeros(2);
    out = solve_lp(q);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(*out.objective_value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("degenerate pricing does not cycle") {
    // classic 4-variable cycling instance; optimum -0.05 at (0.04, 0, 1, 0)
    LpProblem p;
    p.objective = {-0.75, 150.0, -0.02, 6.0};
    p.G = mat(3, 4,
              {0.25, -60.0, -1.0 / 25.0, 9.0,
               0.5, -90.0, -1.0 / 50.0, 3.0,
               0.0, 0.0, 1.0, 0.0});
    p.h = {0.0, 0.0, 1.0};
    p.lower = zeros(4);
    LpOutcome out = solve_lp(p);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(*out.objective_value == doctest::Approx(-0.05).epsilon(1e-9));
    CHECK((*out.solution)[0] == doctest::Approx(0.04).epsilon(1e-8));
    CHECK((*out.solution)[1] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK((*out.solution)[2] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((*out.solution)[3] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("solve is deterministic") {
    LpProblem p;
    p.objective = {-0.75, 150.0, -0.02, 6.0};
    p.G = mat(3, 4,
              {0.25, -60.0, -1.0 / 25.0, 9.0,
               0.5, -90.0, -1.0 / 50.0, 3.0,
               0.0, 0.0, 1.0, 0.0});
    p.h = {0.0, 0.0, 1.0};
    p.lower = zeros(4);
    LpOutcome a = solve_lp(p);
    LpOutcome b = solve_lp(p);
    REQUIRE(a.status == LpStatus::optimal);
    REQUIRE(b.status == LpStatus::optimal);
    CHECK(*a.solution == *b.solution);  // bitwise identical
    CHECK(*a.objective_value == *b.objective_value);
}

TEST_CASE("feasible_point satisfies every constraint") {
    LpProblem p;
    p.objective = {0.0, 0.0, 0.0};
    p.G = mat(2, 3, {1.0, 2.0, -1.0, -1.0, 0.0, 3.0});
    p.h = {4.0, 6.0};
    p.E = mat(1, 3, {1.0, 1.0, 1.0});
    p.d = {1.0};
    p.lower = zeros(3);
    LpOutcome out = feasible_point(p);
    REQUIRE(out.status == LpStatus::optimal);
    const std::vector<double>& x = *out.solution;
    double sum = x[0] + x[1] + x[2];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(x[0] + 2 * x[1] - x[2] <= 4.0 + 1e-9);
    CHECK(-x[0] + 3 * x[2] <= 6.0 + 1e-9);
    for (double v : x) CHECK(v >= -1e-9);
}

TEST_CASE("shape mismatches throw") {
    LpProblem p;
    p.objective = {1.0, 2.0};
    p.G = mat(1, 3, {1.0, 1.0, 1.0});
    p.h = {1.0};
    CHECK_THROWS_AS(solve_lp(p), std::invalid_argument);

    LpProblem q;
    q.objective = {1.0};
    q.G = mat(1, 1, {1.0});
    q.h = {1.0, 2.0};
    CHECK_THROWS_AS(solve_lp(q), std::invalid_argument);

    LpProblem r;
    r.objective = {1.0, 1.0};
    r.lower = zeros(1);
    CHECK_THROWS_AS(solve_lp(r), std::invalid_argument);
}
