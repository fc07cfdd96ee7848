#pragma once

#include <stdexcept>
#include <string>

namespace debiaskf {

// Every failure mode gets its own type so callers (and tests) can catch
// precisely. All carry a human-readable diagnostic.
struct FilterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : FilterError { using FilterError::FilterError; };
struct NonSquare : FilterError { using FilterError::FilterError; };
struct NotSPD : FilterError { using FilterError::FilterError; };
struct SingularBlock : FilterError { using FilterError::FilterError; };
struct SingularInnovation : FilterError { using FilterError::FilterError; };
struct SingularPrior : FilterError { using FilterError::FilterError; };
struct SingularCovariance : FilterError { using FilterError::FilterError; };
struct SingularBranchBias : FilterError { using FilterError::FilterError; };
struct LostPositivity : FilterError { using FilterError::FilterError; };
struct DuplicateTarget : FilterError { using FilterError::FilterError; };
struct UnknownTarget : FilterError { using FilterError::FilterError; };
struct InconsistentBiasPrior : FilterError { using FilterError::FilterError; };
struct DegenerateGeometry : FilterError { using FilterError::FilterError; };
struct GaussNewtonDiverged : FilterError { using FilterError::FilterError; };
struct EmptyInput : FilterError { using FilterError::FilterError; };
struct ConfigError : FilterError { using FilterError::FilterError; };

}  // namespace debiaskf
