#pragma once

// Degraded baseline: same branch/fusion/feedback pipeline as the decoupled
// bank, but the target-bias cross covariance is discarded after every update
// boundary. The stored P_tb is all-zero after each step, so the feedback can
// only overwrite the bias belief, never correct the target state.
//
// This is a reimplementation of the "ignore the cross-correlation" idea, not
// a port of any particular prior code.

#include "debiaskf/decoupled.hpp"

namespace debiaskf {

FilterBank approx_bank_step(const FilterBank& bank,
                            const std::map<int, MeasurementInput>& measurements,
                            const std::map<int, TargetModel>& dynamics);

}  // namespace debiaskf
