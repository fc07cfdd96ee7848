#pragma once

// The exactly decoupled Kalman filter: single-target branches over
// (x_t, b), information-space fusion of the per-branch bias posteriors,
// and feedback of the fused bias into every branch.
//
// Within one bank step, branch predictions/updates only read their own
// branch, fusion reads all branch results, and feedback only reads the
// immutable fused snapshot. Distinct branches may be processed
// concurrently; fusion is the synchronization barrier.

#include <map>
#include <optional>
#include <vector>

#include "debiaskf/gaussian.hpp"
#include "debiaskf/linear_models.hpp"

namespace debiaskf {

struct BranchBelief {
    int target_id = 0;
    Vec x_t;  // S
    Vec b;    // B
    PartitionedCov cov;

    int s_dim() const { return cov.s_dim(); }
    int b_dim() const { return cov.b_dim(); }

    GaussianBelief joint() const;
    static BranchBelief from_joint(int target_id, const GaussianBelief& belief, int s_dim);
};

struct FusedBias {
    Vec b_f;      // B
    Matrix p_fb;  // B x B, SPD
};

// Bias marginal of a branch, as handed to the fusion step.
struct BiasMarginal {
    Vec b;
    Matrix p_b;
};

// Eqs of motion for the branch: F_n = blkdiag{F_t, I}, Q_n = blkdiag{Q_t, O}.
// Bias mean and P_b pass through unchanged; P_tb <- F_t P_tb.
BranchBelief branch_predict(const BranchBelief& br, const TargetModel& model);

// Joint (S+B) measurement update with H_n = [H_t, H_b]. Gain form is the
// execution path; the information form exists for cross-validation.
BranchBelief branch_update(const BranchBelief& br, const Vec& z, const MeasModel& model,
                           const Vec* zhat = nullptr);
BranchBelief branch_update_info(const BranchBelief& br, const Vec& z, const MeasModel& model,
                                const Vec* zhat = nullptr);

// Information fusion of the branch bias posteriors against the fused prior:
//   P_fb^-1        = Pbar_fb^-1 + sum_n (P_bn^-1 - Pbar_bn^-1)
//   P_fb^-1 b_f    = Pbar_fb^-1 bbar_f + sum_n (P_bn^-1 b_n - Pbar_bn^-1 bbar_n)
// A single branch whose prior equals the fused prior passes through exactly.
// Throws LostPositivity when the fused information matrix is not SPD.
FusedBias fuse_bias(const FusedBias& fused_prior, const std::vector<BiasMarginal>& branch_priors,
                    const std::vector<BiasMarginal>& branch_posteriors);

// Feeds the fused bias back into a branch:
//   x_ft  = x_t + P_tb P_b^-1 (b_f - b_n)
//   P_ft  = P_t - P_tb P_b^-1 (P_b - P_fb) P_b^-1 P_tb^T
//   P_ftb = P_tb P_b^-1 P_fb
// and the bias belief becomes the fused one. A fused estimate equal to the
// branch's own is a fixed point and returns the branch unchanged.
BranchBelief feedback_update(const BranchBelief& br, const FusedBias& fused);

struct MeasurementInput {
    Vec z;
    MeasModel model;
    std::optional<Vec> zhat;  // EKF predicted measurement
};

struct FilterBank {
    std::map<int, BranchBelief> branches;  // ordered by target id
    FusedBias fused;
    int step_index = 0;
};

// One full cycle: predict -> update (branches with a measurement) ->
// fuse -> feedback. Branches without a measurement contribute no bias
// information but still receive the fused feedback. Branch errors are
// rethrown with the target id attached.
FilterBank bank_step(const FilterBank& bank, const std::map<int, MeasurementInput>& measurements,
                     const std::map<int, TargetModel>& dynamics);

// Lifecycle. add_branch requires the branch bias belief to match the fused
// one (within 1e-9); the caller is responsible for the cross structure
// P_tb = G H_b P_fb of its initialization gain.
FilterBank add_branch(const FilterBank& bank, const BranchBelief& init);
FilterBank remove_branch(const FilterBank& bank, int target_id);

}  // namespace debiaskf
