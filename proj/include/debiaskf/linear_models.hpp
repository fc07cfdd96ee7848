#pragma once

// Per-target dynamic and measurement models and their stacked (augmented)
// assembly. Targets all share one bias vector of dimension B; a sensor that
// does not see a target contributes zero rows in that target's H_b.

#include <vector>

#include "debiaskf/matrix.hpp"

namespace debiaskf {

struct TargetModel {
    Matrix f;  // S x S state transition
    Matrix q;  // S x S process noise covariance (symmetric PSD)
    int label = 0;

    int state_dim() const { return f.rows(); }
};

struct MeasModel {
    Matrix h_t;  // M x S
    Matrix h_b;  // M x B
    Matrix r;    // M x M, SPD

    int meas_dim() const { return h_t.rows(); }
    int state_dim() const { return h_t.cols(); }
    int bias_dim() const { return h_b.cols(); }

    // [H_t, H_b], the branch measurement matrix.
    Matrix stacked() const;
};

struct BiasModel {
    int dim = 0;
    Vec true_bias;  // simulation ground truth; constant over a run
};

// F = blkdiag{F_1, ..., F_N, I_B}, Q = blkdiag{Q_1, ..., Q_N, O_B}.
struct AugmentedDynamics {
    Matrix f;
    Matrix q;
};
AugmentedDynamics augment_dynamics(const std::vector<TargetModel>& models, int bias_dim);

// H with per-target blocks on the diagonal and the H_b blocks stacked in the
// trailing block column; R = blkdiag{R_1, ..., R_N}.
struct AugmentedMeasurement {
    Matrix h;
    Matrix r;
};
AugmentedMeasurement augment_measurement(const std::vector<MeasModel>& models);

}  // namespace debiaskf
