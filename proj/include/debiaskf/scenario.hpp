#pragma once

// Multistatic-radar scenario: truth generation, first-scan initialization,
// and the Monte-Carlo driver that runs the EKF variants of all filters over
// the same measurement streams.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "debiaskf/askf.hpp"
#include "debiaskf/decoupled.hpp"
#include "debiaskf/radar_geom.hpp"
#include "debiaskf/records.hpp"
#include "debiaskf/rng.hpp"

namespace debiaskf {

struct ScenarioConfig {
    Geometry geometry;
    std::vector<Vec> target_pos;  // initial positions, m
    std::vector<Vec> target_vel;  // initial velocities, m/s

    double duration_s = 100.0;
    double dt_s = 1.0;
    double sigma_range = 30.0;      // m
    double sigma_vel = 1.5;         // m/s
    double sigma_bias = 300.0;      // m
    double sigma_accel = 0.5;       // m/s^2, process noise intensity
    double init_accel_sigma = 0.5;  // m/s^2, acceleration prior std at k=0
    int n_monte_carlo = 100;
    std::uint64_t seed = 20260810;
    std::string dynamic_model = "dwpa";

    int dims() const { return geometry.dims(); }
    int n_targets() const { return static_cast<int>(target_pos.size()); }
    int n_sensors() const { return geometry.n_sensors(); }
    int state_dim() const { return 3 * dims(); }
    int meas_dim() const { return 2 * n_sensors(); }
    // Scan count past the initial one; scans are at k = 0..n_steps().
    int n_steps() const;

    void validate() const;  // throws ConfigError
    static ScenarioConfig default_config();
    std::string to_text() const;
};

// Discrete Wiener-sequence acceleration model, per-axis (p, v, a) blocks:
//   F_axis = [[1, dt, dt^2/2], [0, 1, dt], [0, 0, 1]]
//   Q_axis = sigma_a^2 * g g^T with g = [dt^2/2, dt, 1]^T
TargetModel dwpa_model(double dt, double sigma_a, int dims);

struct TruthRecord {
    RunTruth truth;                             // bias + [step][target] state vectors
    std::vector<std::vector<Vec>> measurements; // [step][target] stacked (range, velocity)
};

TruthRecord simulate_truth(const ScenarioConfig& cfg, std::uint64_t run_index);

struct InitializedBranch {
    BranchBelief belief;
    Matrix coupling;  // bias-to-state error coupling C with P_tb = C P_b
};

// First-scan initialization: zero bias prior with sigma_bias^2 I covariance,
// Gauss-Newton position fit and linear velocity fit against the composite
// noise R + H_b P_b0 H_b^T, then P_t = G Rtilde G^T, P_tb = G H_b P_b0.
// Throws GaussNewtonDiverged.
InitializedBranch initialize_branch_from_first_scan(const Vec& z0, const Geometry& geom,
                                                    const ScenarioConfig& cfg);

// Joint prior with cross blocks C_m P_b0 C_n^T; satisfies the equivalence
// theorem's initial condition by construction.
AskfState askf_prior_from_branches(const std::vector<InitializedBranch>& branches,
                                   const FusedBias& fused0);

enum class FilterKind { askf, decoupled, approx };
const char* filter_name(FilterKind k);

struct McResult {
    std::vector<RunTruth> truth;                     // [run]
    std::map<FilterKind, FilterEstimates> estimates; // [run][step]
};

// Simulates n_monte_carlo runs, initializes every filter from the same
// first scan, and steps them over the same measurements. Runs execute in
// parallel (cap DEBIASKF_THREADS) and are bitwise independent of the
// schedule. shared_linearization makes the joint filter linearize at the
// decoupled branch predictions instead of its own.
McResult run_monte_carlo(const ScenarioConfig& cfg, const std::set<FilterKind>& filters,
                         bool shared_linearization = false);

}  // namespace debiaskf
