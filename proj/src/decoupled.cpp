#include "debiaskf/decoupled.hpp"

#include <string>

namespace debiaskf {

GaussianBelief BranchBelief::joint() const {
    Vec mean(s_dim() + b_dim());
    mean.set_segment(0, x_t);
    mean.set_segment(s_dim(), b);
    return {std::move(mean), cov.assemble()};
}

BranchBelief BranchBelief::from_joint(int target_id, const GaussianBelief& belief, int s_dim) {
    BranchBelief br;
    br.target_id = target_id;
    br.x_t = belief.mean.segment(0, s_dim);
    br.b = belief.mean.segment(s_dim, belief.dim() - s_dim);
    br.cov = PartitionedCov::split(belief.cov, s_dim);
    return br;
}

BranchBelief branch_predict(const BranchBelief& br, const TargetModel& model) {
    if (model.state_dim() != br.s_dim())
        throw DimensionMismatch("branch_predict: model S=" + std::to_string(model.state_dim()) +
                                " vs branch S=" + std::to_string(br.s_dim()));
    BranchBelief out = br;
    out.x_t = model.f * br.x_t;
    out.cov.t = symmetrize(mul_abt(model.f * br.cov.t, model.f) + model.q);
    out.cov.tb = model.f * br.cov.tb;
    // b and P_b unchanged: the bias is constant and noiseless.
    return out;
}

namespace {
BranchBelief branch_update_impl(const BranchBelief& br, const Vec& z, const MeasModel& model,
                                const Vec* zhat, bool info_form) {
    if (model.state_dim() != br.s_dim() || model.bias_dim() != br.b_dim())
        throw DimensionMismatch("branch_update: model dims vs branch");
    const Matrix h = model.stacked();
    const GaussianBelief prior = br.joint();
    const GaussianBelief post = info_form ? kf_update_info(prior, z, h, model.r, zhat)
                                          : kf_update_gain(prior, z, h, model.r, zhat);
    return BranchBelief::from_joint(br.target_id, post, br.s_dim());
}
}  // namespace

BranchBelief branch_update(const BranchBelief& br, const Vec& z, const MeasModel& model,
                           const Vec* zhat) {
    return branch_update_impl(br, z, model, zhat, false);
}

BranchBelief branch_update_info(const BranchBelief& br, const Vec& z, const MeasModel& model,
                                const Vec* zhat) {
    return branch_update_impl(br, z, model, zhat, true);
}

FusedBias fuse_bias(const FusedBias& fused_prior, const std::vector<BiasMarginal>& branch_priors,
                    const std::vector<BiasMarginal>& branch_posteriors) {
    if (branch_priors.size() != branch_posteriors.size())
        throw DimensionMismatch("fuse_bias: prior/posterior count mismatch");
    if (branch_priors.empty()) return fused_prior;  // prediction only, Eqs of a static bias

    // Single branch sharing the fused prior: fusion reduces to that branch's
    // posterior; taking it directly avoids an inverse round trip.
    if (branch_priors.size() == 1 && branch_priors[0].b == fused_prior.b_f &&
        branch_priors[0].p_b == fused_prior.p_fb) {
        return {branch_posteriors[0].b, branch_posteriors[0].p_b};
    }

    const Matrix prior_info = spd_inverse(fused_prior.p_fb);
    Matrix info = prior_info;
    Vec rhs = prior_info * fused_prior.b_f;
    bool any_contribution = false;
    for (size_t n = 0; n < branch_priors.size(); ++n) {
        const auto& pre = branch_priors[n];
        const auto& post = branch_posteriors[n];
        // An unchanged bias marginal (no measurement this step) contributes
        // exactly zero information.
        if (pre.b == post.b && pre.p_b == post.p_b) continue;
        const Matrix post_info = spd_inverse(post.p_b);
        const Matrix pre_info = spd_inverse(pre.p_b);
        info = info + (post_info - pre_info);
        rhs = rhs + (post_info * post.b - pre_info * pre.b);
        any_contribution = true;
    }
    if (!any_contribution) return fused_prior;
    info = symmetrize(info);
    try {
        Cholesky chol(info);
        Vec b_f = chol.solve(rhs);
        Matrix p_fb = chol.inverse();
        return {std::move(b_f), std::move(p_fb)};
    } catch (const NotSPD& e) {
        throw LostPositivity(std::string("fused bias information matrix not SPD: ") + e.what());
    }
}

BranchBelief feedback_update(const BranchBelief& br, const FusedBias& fused) {
    if (fused.b_f.size() != br.b_dim()) throw DimensionMismatch("feedback_update: bias dims");
    // No new information is a fixed point.
    if (fused.b_f == br.b && fused.p_fb == br.cov.b) return br;

    Matrix p_b_inv;
    try {
        p_b_inv = spd_inverse(br.cov.b);
    } catch (const NotSPD& e) {
        throw SingularBranchBias("branch " + std::to_string(br.target_id) + ": " + e.what());
    }
    const Matrix w = br.cov.tb * p_b_inv;  // P_tb P_b^-1, reused by all three formulas
    BranchBelief out = br;
    out.x_t = br.x_t + w * (fused.b_f - br.b);
    out.b = fused.b_f;
    out.cov.t = symmetrize(br.cov.t - mul_abt(w * (br.cov.b - fused.p_fb), w));
    out.cov.tb = w * fused.p_fb;
    out.cov.b = fused.p_fb;
    return out;
}

FilterBank bank_step(const FilterBank& bank, const std::map<int, MeasurementInput>& measurements,
                     const std::map<int, TargetModel>& dynamics) {
    FilterBank out;
    out.step_index = bank.step_index + 1;

    std::vector<BiasMarginal> priors, posteriors;
    std::vector<BranchBelief> updated;
    priors.reserve(bank.branches.size());
    posteriors.reserve(bank.branches.size());
    updated.reserve(bank.branches.size());

    // Ascending target-id order keeps fusion accumulation reproducible.
    for (const auto& [id, br] : bank.branches) {
        try {
            const auto dyn = dynamics.find(id);
            if (dyn == dynamics.end())
                throw DimensionMismatch("no dynamics model for this step");
            BranchBelief predicted = branch_predict(br, dyn->second);
            priors.push_back({predicted.b, predicted.cov.b});
            const auto meas = measurements.find(id);
            if (meas != measurements.end()) {
                const Vec* zhat = meas->second.zhat ? &*meas->second.zhat : nullptr;
                predicted = branch_update(predicted, meas->second.z, meas->second.model, zhat);
            }
            posteriors.push_back({predicted.b, predicted.cov.b});
            updated.push_back(std::move(predicted));
        } catch (const FilterError& e) {
            throw FilterError("target " + std::to_string(id) + ": " + e.what());
        }
    }

    // Fused prior prediction is the identity (constant bias).
    out.fused = fuse_bias(bank.fused, priors, posteriors);

    for (auto& br : updated) {
        try {
            out.branches.emplace(br.target_id, feedback_update(br, out.fused));
        } catch (const FilterError& e) {
            throw FilterError("target " + std::to_string(br.target_id) + ": " + e.what());
        }
    }
    return out;
}

FilterBank add_branch(const FilterBank& bank, const BranchBelief& init) {
    if (bank.branches.count(init.target_id))
        throw DuplicateTarget("target " + std::to_string(init.target_id) + " already tracked");
    const double mean_dev = rel_deviation(init.b, bank.fused.b_f, 1e-12);
    const double cov_dev = rel_deviation(init.cov.b, bank.fused.p_fb, 1e-12);
    if (mean_dev > 1e-9 || cov_dev > 1e-9)
        throw InconsistentBiasPrior("target " + std::to_string(init.target_id) +
                                    ": bias prior deviates from fused belief (mean " +
                                    std::to_string(mean_dev) + ", cov " + std::to_string(cov_dev) + ")");
    FilterBank out = bank;
    out.branches.emplace(init.target_id, init);
    return out;
}

FilterBank remove_branch(const FilterBank& bank, int target_id) {
    if (!bank.branches.count(target_id))
        throw UnknownTarget("target " + std::to_string(target_id) + " not tracked");
    FilterBank out = bank;
    out.branches.erase(target_id);
    // Fused bias keeps its accumulated information.
    return out;
}

}  // namespace debiaskf
