#include "debiaskf/baseline_approx.hpp"

#include <string>

namespace debiaskf {

namespace {
BranchBelief drop_cross(BranchBelief br) {
    br.cov.tb = Matrix::zero(br.s_dim(), br.b_dim());
    return br;
}
}  // namespace

FilterBank approx_bank_step(const FilterBank& bank,
                            const std::map<int, MeasurementInput>& measurements,
                            const std::map<int, TargetModel>& dynamics) {
    FilterBank out;
    out.step_index = bank.step_index + 1;

    std::vector<BiasMarginal> priors, posteriors;
    std::vector<BranchBelief> updated;
    for (const auto& [id, br] : bank.branches) {
        try {
            const auto dyn = dynamics.find(id);
            if (dyn == dynamics.end()) throw DimensionMismatch("no dynamics model for this step");
            BranchBelief predicted = branch_predict(br, dyn->second);
            priors.push_back({predicted.b, predicted.cov.b});
            const auto meas = measurements.find(id);
            if (meas != measurements.end()) {
                const Vec* zhat = meas->second.zhat ? &*meas->second.zhat : nullptr;
                predicted = branch_update(predicted, meas->second.z, meas->second.model, zhat);
                predicted = drop_cross(std::move(predicted));
            }
            posteriors.push_back({predicted.b, predicted.cov.b});
            updated.push_back(std::move(predicted));
        } catch (const FilterError& e) {
            throw FilterError("target " + std::to_string(id) + ": " + e.what());
        }
    }

    out.fused = fuse_bias(bank.fused, priors, posteriors);

    for (auto& br : updated) {
        try {
            out.branches.emplace(br.target_id, drop_cross(feedback_update(br, out.fused)));
        } catch (const FilterError& e) {
            throw FilterError("target " + std::to_string(br.target_id) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace debiaskf
