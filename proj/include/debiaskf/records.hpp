#pragma once

// Flat record containers shared by the simulation driver, the metrics
// layer, and the CSV exporters. Indexing is [run][step][target].

#include <string>
#include <vector>

#include "debiaskf/matrix.hpp"

namespace debiaskf {

struct TargetEstimate {
    Vec x;     // full state mean
    Matrix p;  // full state covariance
};

struct StepEstimate {
    std::vector<TargetEstimate> targets;
    Vec bias;       // fused bias mean
    Matrix p_bias;  // fused bias covariance
};

using RunEstimates = std::vector<StepEstimate>;

struct FilterEstimates {
    std::string filter;
    std::vector<RunEstimates> runs;
};

struct RunTruth {
    Vec bias;                             // per-run constant bias vector
    std::vector<std::vector<Vec>> states; // [step][target] full state vectors
};

}  // namespace debiaskf
