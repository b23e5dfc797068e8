#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "myopic/matrix.h"

namespace myopic {

// Observation kernel for one action. Discrete kernels carry an X x Y
// probability matrix directly. Gaussian kernels (y = s + noise, state s
// numbered 1..X) carry sigma and are quantized into `bins` cells of equal
// probability under the uniform mixture of the X state densities; the
// quantized matrix is stored in `probs` and the cell edges in `edges`.
struct ObservationKernel {
    enum class Kind { discrete, gaussian };
    Kind kind = Kind::discrete;
    Matrix probs;               // X x Y
    double sigma = 0.0;         // gaussian only
    int bins = 0;               // gaussian only
    std::vector<double> edges;  // gaussian only: interior cell edges, size bins-1

    int num_obs() const { return probs.cols; }
    // Continuous density of observation value y given 0-based state s (gaussian only).
    double density(int s, double y) const;
    // Cell index (0-based) containing continuous observation value y (gaussian only).
    int cell_of(double y) const;
};

struct PomdpModel {
    int num_states = 0;
    int num_actions = 0;
    double discount = 0.0;
    std::vector<Matrix> transitions;            // A matrices, X x X, rows sum to 1
    std::vector<ObservationKernel> observations;  // A kernels (may be identical)
    Matrix costs;                               // X x A

    int num_obs() const { return observations.empty() ? 0 : observations[0].num_obs(); }
};

struct ValidationIssue {
    std::string field;    // e.g. "transitions[0] row 2"
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Structural checks: shapes consistent, rows sum to 1 within tol, entries
// nonnegative, discount in [0, 1). Does not check the model assumptions.
ValidationReport validate_model(const PomdpModel& m, double tol = 1e-6);

struct ModelParseError : std::runtime_error {
    explicit ModelParseError(const std::string& what) : std::runtime_error(what) {}
};

// Built-in benchmark models. Ids: "1" (3-state, 2 actions, discrete
// observations), "2d" (10-state, discrete 10-cell kernel), "2g" (10-state,
// gaussian sigma = 1 kernel), "3" (8-state, 8 actions), "4" (3-state,
// transition parameters 0 <= theta1 <= theta2 <= 0.5, gaussian sigma = 1
// kernel). theta1/theta2 are only used by "4".
PomdpModel builtin_example(const std::string& id, double theta1 = 0.0, double theta2 = 0.0,
                           int gaussian_bins = 64);

// JSON (de)serialization. load_model throws ModelParseError on malformed
// input or on validation failure and names the offending field.
PomdpModel load_model(const std::string& json_text);
PomdpModel load_model_file(const std::string& path);
std::string serialize_model(const PomdpModel& m);

// Shared helper: quantized gaussian kernel (equal-probability cells under the
// uniform mixture over states 1..X).
ObservationKernel make_gaussian_kernel(int num_states, double sigma, int bins);

}  // namespace myopic
