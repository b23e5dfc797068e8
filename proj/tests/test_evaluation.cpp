#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "myopic/evaluation.h"
#include "myopic/model.h"

using namespace myopic;

TEST_CASE("seed mixing is deterministic and collision free in practice") {
    CHECK(mix_seed(1, 1) == mix_seed(1, 1));
    CHECK(mix_seed(1, 1) != mix_seed(1, 2));
    CHECK(mix_seed(1, 1) != mix_seed(2, 1));
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 25; ++m)
        for (std::uint64_t c = 0; c < 40; ++c) seen.insert(mix_seed(m, c));
    CHECK(seen.size() == 1000);
}

TEST_CASE("uniform draws live in [0,1) and reproduce by seed") {
    std::mt19937_64 gen(123);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = uniform01(gen);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    double mean = sum / n;
    double se = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(mean - 0.5) < 4 * se);

    std::mt19937_64 a(9), b(9);
    for (int i = 0; i < 50; ++i) CHECK(uniform01(a) == uniform01(b));
}

TEST_CASE("simplex sampler is uniform") {
    std::mt19937_64 gen(2024);
    const int n = 20000;
    double mean0 = 0.0;
    int above_half = 0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> pi = sample_belief_uniform(gen, 3);
        REQUIRE(pi.size() == 3);
        double s = 0.0;
        for (double v : pi) {
            REQUIRE(v >= 0.0);
            s += v;
        }
        REQUIRE(s == doctest::Approx(1.0).epsilon(1e-12));
        mean0 += pi[0];
        if (pi[0] > 0.5) ++above_half;
    }
    mean0 /= n;
    // coordinate mean 1/3, variance 1/18; tail P(pi_1 > 1/2) = (1/2)^2
    double se_mean = std::sqrt(1.0 / 18.0 / n);
    CHECK(std::abs(mean0 - 1.0 / 3.0) < 4 * se_mean);
    double se_tail = std::sqrt(0.25 * 0.75 / n);
    CHECK(std::abs(static_cast<double>(above_half) / n - 0.25) < 4 * se_tail);
}

TEST_CASE("categorical sampling matches the target frequencies") {
    std::mt19937_64 gen(55);
    double p[3] = {0.2, 0.5, 0.3};
    int counts[3] = {0, 0, 0};
    const int n = 30000;
    for (int i = 0; i < n; ++i) {
        int k = sample_categorical(gen, p, 3);
        REQUIRE(k >= 0);
        REQUIRE(k < 3);
        ++counts[k];
    }
    for (int k = 0; k < 3; ++k) {
        double se = std::sqrt(p[k] * (1 - p[k]) / n);
        CHECK(std::abs(static_cast<double>(counts[k]) / n - p[k]) < 4 * se);
    }
    double q[3] = {0.5, 0.0, 0.5};
    for (int i = 0; i < 2000; ++i) CHECK(sample_categorical(gen, q, 3) != 1);
}

TEST_CASE("overlap volume tracks the exact halfspace areas on the 3-state example") {
    // Exact polygon areas of the agreement region, percent of the simplex.
    struct Row {
        double rho, vol;
    };
    const Row expected[] = {{0.4, 95.558783}, {0.5, 94.120006}, {0.6, 92.500369},
                            {0.7, 90.663565}, {0.8, 88.562903}, {0.9, 86.137314}};
    PomdpModel m = builtin_example("1");
    for (const Row& row : expected) {
        m.discount = row.rho;
        BoundsEvaluator ev = BoundsEvaluator::make(m);
        VolumeEstimate v = estimate_overlap_volume(m, ev, nullptr, 100000, 1);
        CHECK(v.samples == 100000);
        CHECK(v.pinned > 0);
        CHECK(v.seed == 1);
        CHECK(!v.oracle_checked);
        CHECK(v.fraction == doctest::Approx(static_cast<double>(v.pinned) / v.samples));
        // 4.5 binomial standard errors of headroom around the exact area
        CHECK(std::abs(100.0 * v.fraction - row.vol) < 0.45);
    }
}

TEST_CASE("volume estimation is block seeded: thread count cannot change it") {
    PomdpModel m = builtin_example("1");
    BoundsEvaluator ev = BoundsEvaluator::make(m);
    VolumeEstimate v1 = estimate_overlap_volume(m, ev, nullptr, 200000, 42, 1);
    VolumeEstimate v4 = estimate_overlap_volume(m, ev, nullptr, 200000, 42, 4);
    CHECK(v1.pinned == v4.pinned);
    CHECK(v1.fraction == v4.fraction);
    CHECK(v1.std_error == v4.std_error);
    // and a different seed genuinely resamples
    VolumeEstimate other = estimate_overlap_volume(m, ev, nullptr, 200000, 43, 1);
    CHECK(v1.pinned != other.pinned);
}

TEST_CASE("pinned actions agree with a dynamic-programming oracle away from the boundary") {
    PomdpModel m = builtin_example("1");
    m.discount = 0.5;
    BoundsEvaluator ev = BoundsEvaluator::make(m);
    ValueFunctionGrid oracle = grid_value_iteration(m, 100, 1e-6);
    VolumeEstimate plain = estimate_overlap_volume(m, ev, nullptr, 30000, 7);
    VolumeEstimate checked = estimate_overlap_volume(m, ev, &oracle, 30000, 7);
    CHECK(checked.oracle_checked);
    CHECK(checked.pinned == plain.pinned);      // oracle never alters the count
    CHECK(checked.fraction == plain.fraction);
    // disagreements are confined to the grid-resolution band near the boundary
    CHECK(checked.oracle_disagreements <= checked.pinned / 40);
}

TEST_CASE("policy simulation: constant stage costs accumulate exactly") {
    PomdpModel m = builtin_example("1");
    m.discount = 0.5;
    const int horizon = 25;
    PolicyFn pol = [](const std::vector<double>&) { return 1; };
    StageCostFn cost = [](const std::vector<double>&, int) { return 1.5; };
    PriorFn prior = [](std::mt19937_64&) { return std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}; };
    SimulationReport rep = simulate_policy(m, pol, cost, prior, horizon, 10, 77);
    double want = 1.5 * (1.0 - std::pow(0.5, horizon)) / 0.5;
    CHECK(rep.mean == doctest::Approx(want).epsilon(1e-12));
    CHECK(rep.std_error == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(rep.runs == 10);
    CHECK(rep.horizon == horizon);
    CHECK(rep.resampled_observations == 0);
}

TEST_CASE("same master seed replays identical trajectories") {
    PomdpModel m = builtin_example("1");
    PolicyFn pol = [](const std::vector<double>& pi) { return pi[0] > 0.4 ? 1 : 2; };
    PriorFn prior = [](std::mt19937_64& gen) { return sample_belief_uniform(gen, 3); };
    std::vector<double> seen_a, seen_b;
    StageCostFn rec_a = [&seen_a](const std::vector<double>& pi, int a) {
        seen_a.push_back(pi[0]);
        seen_a.push_back(static_cast<double>(a));
        return pi[0];
    };
    StageCostFn rec_b = [&seen_b](const std::vector<double>& pi, int a) {
        seen_b.push_back(pi[0]);
        seen_b.push_back(static_cast<double>(a));
        return pi[0];
    };
    SimulationReport ra = simulate_policy(m, pol, rec_a, prior, 30, 5, 99);
    SimulationReport rb = simulate_policy(m, pol, rec_b, prior, 30, 5, 99);
    CHECK(ra.mean == rb.mean);
    CHECK(seen_a == seen_b);  // bitwise identical belief/action streams
}

TEST_CASE("percent loss: deterministic, labeled, and guarded when the region is everything") {
    PomdpModel m = builtin_example("1");
    m.discount = 0.5;
    BoundsEvaluator ev = BoundsEvaluator::make(m);
    ValueFunctionGrid oracle = grid_value_iteration(m, 40, 1e-6);
    LossOptions opt;
    opt.runs = 40;
    opt.horizon = 25;
    opt.seed = 3;

    std::vector<double> e3{0.0, 0.0, 1.0};
    LossEstimate fixed1 = percent_loss(m, ev, oracle, e3, opt);
    LossEstimate fixed2 = percent_loss(m, ev, oracle, e3, opt);
    CHECK(fixed1.pi0_kind == "fixed");
    CHECK(!fixed1.not_applicable);
    CHECK(fixed1.loss_percent == fixed2.loss_percent);
    CHECK(fixed1.numerator.mean == fixed2.numerator.mean);
    CHECK(fixed1.denominator.mean > 0.0);

    LossEstimate sampled = percent_loss(m, ev, oracle, std::nullopt, opt);
    CHECK(sampled.pi0_kind == "sampled-outside-overlap");
    CHECK(!sampled.not_applicable);
    // starting outside the region, the fallback action costs something
    CHECK(sampled.numerator.mean >= sampled.denominator.mean - 1e-9);
    CHECK(sampled.loss_percent >= -1e-9);

    // identical transition matrices pin every belief: sampling a prior
    // outside the region is impossible and must be flagged, not spun on
    PomdpModel deg = builtin_example("4", 0.5, 0.5);
    BoundsEvaluator dev = BoundsEvaluator::make(deg);
    ValueFunctionGrid dor = grid_value_iteration(deg, 20, 1e-6);
    LossEstimate na = percent_loss(deg, dev, dor, std::nullopt, opt);
    CHECK(na.not_applicable);
}

TEST_CASE("discount sweep renders deterministic csv") {
    SweepOptions opt;
    opt.rhos = {0.5, 0.9};
    opt.runs = 30;
    opt.horizon = 20;
    opt.vol_samples = 20000;
    opt.grid_d = 40;
    opt.seed = 5;
    opt.pi0_fixed = std::vector<double>{0.0, 0.0, 1.0};
    PomdpModel m = builtin_example("1");
    std::vector<SweepRow> rows1 = sweep_discount(m, opt);
    std::vector<SweepRow> rows2 = sweep_discount(m, opt);
    REQUIRE(rows1.size() == 2);
    for (const SweepRow& r : rows1) {
        CHECK(r.ok);
        CHECK(r.note.empty());
        CHECK(r.has_l1);
        CHECK(r.has_l2);
        CHECK(r.vol.samples == 20000);
        CHECK(r.vol.fraction > 0.5);
    }
    CHECK(rows1[0].rho == 0.5);
    CHECK(rows1[1].rho == 0.9);
    std::string csv1 = sweep_to_csv(rows1);
    std::string csv2 = sweep_to_csv(rows2);
    CHECK(csv1 == csv2);
    CHECK(csv1.rfind("rho,vol_S,L1,L2\n", 0) == 0);
    // two data lines after the header
    int newlines = 0;
    for (char c : csv1) newlines += (c == '\n');
    CHECK(newlines == 3);
}

TEST_CASE("parametric family sweep surfaces theta and summary extremes") {
    SweepOptions opt;
    opt.rhos = {0.5};
    opt.runs = 20;
    opt.horizon = 15;
    opt.vol_samples = 5000;
    opt.grid_d = 15;
    opt.seed = 2;
    opt.with_loss = false;
    std::vector<std::pair<double, double>> thetas = {{0.25, 0.35}, {0.05, 0.45}};
    std::vector<Example4Summary> summary;
    std::vector<Example4Cell> cells = sweep_example4(opt, thetas, &summary);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].theta1 == 0.25);
    CHECK(cells[0].theta2 == 0.35);
    CHECK(cells[1].theta1 == 0.05);
    CHECK(cells[1].theta2 == 0.45);
    for (const auto& c : cells) CHECK(c.row.ok);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].rho == 0.5);
    double hi = std::max(100.0 * cells[0].row.vol.fraction, 100.0 * cells[1].row.vol.fraction);
    double lo = std::min(100.0 * cells[0].row.vol.fraction, 100.0 * cells[1].row.vol.fraction);
    CHECK(summary[0].vol_best == doctest::Approx(hi).epsilon(1e-12));
    CHECK(summary[0].vol_worst == doctest::Approx(lo).epsilon(1e-12));

    std::string csv = example4_to_csv(cells);
    CHECK(csv.rfind("rho,vol_S,L1,L2,theta1,theta2\n", 0) == 0);
    CHECK(csv.find("0.250000,0.350000") != std::string::npos);
    // loss columns are NA when the sweep skips them
    CHECK(csv.find("NA,NA,0.250000") != std::string::npos);
}
