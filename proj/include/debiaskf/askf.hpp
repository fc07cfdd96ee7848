#pragma once

// Augmented-state Kalman filter over [x_1; ...; x_N; b]. This is the
// reference the decoupled bank is checked against. Pure functions over
// immutable states.

#include <vector>

#include "debiaskf/gaussian.hpp"
#include "debiaskf/linear_models.hpp"

namespace debiaskf {

struct AskfLayout {
    struct Slot {
        int target_id;
        int offset;
        int s_dim;
    };
    std::vector<Slot> targets;
    int bias_offset = 0;
    int bias_dim = 0;

    int total_dim() const { return bias_offset + bias_dim; }
    int n_targets() const { return static_cast<int>(targets.size()); }
    const Slot& slot(int idx) const { return targets[static_cast<size_t>(idx)]; }

    static AskfLayout make(const std::vector<int>& target_ids, const std::vector<int>& state_dims,
                           int bias_dim);
};

struct AskfState {
    AskfLayout layout;
    GaussianBelief belief;
};

AskfState askf_predict(const AskfState& state, const Matrix& f, const Matrix& q);

AskfState askf_update_gain(const AskfState& state, const Vec& z, const Matrix& h, const Matrix& r,
                           const Vec* zhat = nullptr);

AskfState askf_update_info(const AskfState& state, const Vec& z, const Matrix& h, const Matrix& r,
                           const Vec* zhat = nullptr);

// Every sub-block of the joint covariance in the target/bias partition.
// t[m][n] is the target m x target n cross block (t[n][m] = t[m][n]^T).
struct CrossBlocks {
    std::vector<std::vector<Matrix>> t;
    std::vector<Matrix> tb;
    Matrix b;
};
CrossBlocks extract_cross_blocks(const AskfState& state);

// Inverse of extract_cross_blocks, for round-trip checks and prior assembly.
Matrix assemble_cross_blocks(const CrossBlocks& blocks);

// Convenience accessors.
Vec askf_target_mean(const AskfState& state, int idx);
Vec askf_bias_mean(const AskfState& state);

}  // namespace debiaskf
