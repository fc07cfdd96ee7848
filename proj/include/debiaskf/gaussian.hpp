#pragma once

// Gaussian estimate containers plus the textbook KF recursion in gain form
// and information form. Both the joint filter and the per-target branches
// run through these primitives, which is what makes their bit-level
// agreement on single-target systems possible.

#include "debiaskf/linalg.hpp"
#include "debiaskf/matrix.hpp"

namespace debiaskf {

inline constexpr double kSymTol = 1e-10;  // x max|entry|
inline constexpr double kPsdTol = 1e-10;  // x trace

struct GaussianBelief {
    Vec mean;
    Matrix cov;  // symmetrized on construction

    GaussianBelief() = default;
    GaussianBelief(Vec m, Matrix p);

    int dim() const { return mean.size(); }

    // Symmetry within kSymTol and eigenvalues >= -kPsdTol * trace.
    // Throws NotSPD; meant for tests and debug checkpoints, not hot loops.
    void validate() const;
};

// The (target, cross, bias) partition of a branch covariance.
struct PartitionedCov {
    Matrix t;   // S x S
    Matrix tb;  // S x B
    Matrix b;   // B x B

    int s_dim() const { return t.rows(); }
    int b_dim() const { return b.rows(); }

    Matrix assemble() const;
    static PartitionedCov split(const Matrix& p, int s);
};

// mean <- F mean, cov <- F cov F^T + Q (symmetrized).
GaussianBelief kf_predict(const GaussianBelief& prior, const Matrix& f, const Matrix& q);

// Gain-form measurement update. zhat overrides the predicted measurement
// (EKF path); default is H * mean. Throws SingularInnovation.
GaussianBelief kf_update_gain(const GaussianBelief& prior, const Vec& z, const Matrix& h,
                              const Matrix& r, const Vec* zhat = nullptr);

// Information-form update, algebraically identical to the gain form.
// Throws SingularPrior when the prior covariance cannot be inverted.
GaussianBelief kf_update_info(const GaussianBelief& prior, const Vec& z, const Matrix& h,
                              const Matrix& r, const Vec* zhat = nullptr);

}  // namespace debiaskf
