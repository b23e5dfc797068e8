#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "myopic/bounds.h"
#include "myopic/model.h"
#include "myopic/solver.h"

namespace myopic {

// Deterministic seed derivation: independent stream seed for (master, counter).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter);

// 53-bit uniform in [0, 1). Hand-rolled so results do not depend on the
// standard library's distribution implementations.
double uniform01(std::mt19937_64& gen);

// Uniform sample from the belief simplex via normalized exponential spacings.
std::vector<double> sample_belief_uniform(std::mt19937_64& gen, int num_states);

// Index in [0, n) drawn from the probability row p.
int sample_categorical(std::mt19937_64& gen, const double* p, int n);

struct VolumeEstimate {
    long samples = 0;
    long pinned = 0;
    double fraction = 0.0;    // pinned / samples
    double std_error = 0.0;   // binomial standard error of `fraction`
    std::uint64_t seed = 0;
    bool oracle_checked = false;
    long oracle_disagreements = 0;  // pinned samples where the oracle picks another action
};

// Monte-Carlo volume of the region where the myopic bounds agree. When
// `oracle` is non-null, the oracle's greedy action is compared against the
// pinned action at every pinned sample and disagreements are tallied
// separately (they do not change `fraction`). Block-seeded, so the result is
// identical for any `threads`.
VolumeEstimate estimate_overlap_volume(const PomdpModel& m, const BoundsEvaluator& ev,
                                       const ValueFunctionGrid* oracle, long samples,
                                       std::uint64_t seed, int threads = 1);

using PolicyFn = std::function<int(const std::vector<double>&)>;          // 1-based action
using StageCostFn = std::function<double(const std::vector<double>&, int)>;  // (belief, action)
using PriorFn = std::function<std::vector<double>(std::mt19937_64&)>;

struct SimulationReport {
    int runs = 0, horizon = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    long resampled_observations = 0;  // filter underflows retried with a fresh draw
};

// Discounted accumulation of stage_cost(belief_k, a_k) along simulated
// trajectories; the belief is propagated with the exact filter (continuous
// densities for gaussian kernels). Run r uses the generator seeded
// mix_seed(seed, r), so two policies simulated with the same master seed see
// common random numbers.
SimulationReport simulate_policy(const PomdpModel& m, const PolicyFn& policy,
                                 const StageCostFn& stage_cost, const PriorFn& prior, int horizon,
                                 int runs, std::uint64_t seed);

struct LossEstimate {
    double loss_percent = 0.0;
    SimulationReport numerator, denominator;
    std::string pi0_kind;  // "fixed" or "sampled-outside-overlap"
    bool not_applicable = false;
};

struct LossOptions {
    int runs = 1000;
    int horizon = 100;
    std::uint64_t seed = 1;
};

// Percentage loss of the bound-induced policy relative to the oracle under
// the surrogate stage cost: inside the overlap region both policies play the
// pinned action and pay its true cost; outside, the numerator plays action 1
// at its true cost while the denominator pays the per-state minimum cost.
// pi0_fixed: start every run there; otherwise every run samples a prior
// outside the overlap region (not_applicable when the region covers
// essentially everything).
LossEstimate percent_loss(const PomdpModel& m, const BoundsEvaluator& ev,
                          const ValueFunctionGrid& oracle,
                          const std::optional<std::vector<double>>& pi0_fixed,
                          const LossOptions& opt);

struct SweepOptions {
    std::vector<double> rhos = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int runs = 1000;
    int horizon = 100;
    long vol_samples = -1;  // -1: 10^6 when X <= 3 else 10^5
    int grid_d = -1;        // -1: 100 when X <= 3 else 12
    std::uint64_t seed = 1;
    int threads = 1;
    double eps_strict = 1e-8;
    double tol = 1e-4;
    bool with_loss = true;
    std::optional<std::vector<double>> pi0_fixed;  // L1 prior; L1 omitted when absent
};

struct SweepRow {
    double rho = 0.0;
    bool ok = false;
    std::string note;  // failed assumptions or errors
    VolumeEstimate vol;
    LossEstimate l1, l2;
    bool has_l1 = false, has_l2 = false;
};

std::vector<SweepRow> sweep_discount(PomdpModel m, const SweepOptions& opt);

struct Example4Cell {
    double theta1 = 0.0, theta2 = 0.0;
    SweepRow row;
};

struct Example4Summary {
    double rho = 0.0;
    double vol_best = 0.0, vol_worst = 0.0;  // percent; best = max
    double l1_best = 0.0, l1_worst = 0.0;    // percent; best = min
    double l2_best = 0.0, l2_worst = 0.0;
};

// Sweep of the 3-state parametric family over an admissible theta grid
// (default {0.05, 0.15, 0.25, 0.35, 0.45}^2 filtered to theta1 <= theta2).
std::vector<Example4Cell> sweep_example4(const SweepOptions& opt,
                                         const std::vector<std::pair<double, double>>& thetas = {},
                                         std::vector<Example4Summary>* summary = nullptr);

// CSV renderings (fixed formats, deterministic bytes).
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string example4_to_csv(const std::vector<Example4Cell>& cells);

}  // namespace myopic
