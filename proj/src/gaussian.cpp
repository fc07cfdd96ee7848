#include "debiaskf/gaussian.hpp"

#include <cmath>
#include <string>

namespace debiaskf {

GaussianBelief::GaussianBelief(Vec m, Matrix p) : mean(std::move(m)), cov(symmetrize(p)) {
    if (mean.size() != cov.rows())
        throw DimensionMismatch("belief: mean dim " + std::to_string(mean.size()) + " vs cov " +
                                std::to_string(cov.rows()));
}

void GaussianBelief::validate() const {
    const double scale = cov.max_abs();
    for (int i = 0; i < cov.rows(); ++i)
        for (int j = i + 1; j < cov.cols(); ++j)
            if (std::fabs(cov(i, j) - cov(j, i)) > kSymTol * scale)
                throw NotSPD("covariance asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    const auto ev = sym_eigenvalues(cov);
    const double floor = -kPsdTol * std::fabs(cov.trace());
    if (!ev.empty() && ev.front() < floor)
        throw NotSPD("covariance eigenvalue " + std::to_string(ev.front()) + " below " + std::to_string(floor));
    for (double x : mean)
        if (!std::isfinite(x)) throw NotSPD("non-finite mean entry");
}

Matrix PartitionedCov::assemble() const {
    const int s = s_dim(), bb = b_dim();
    if (tb.rows() != s || tb.cols() != bb || t.cols() != s || b.cols() != bb)
        throw DimensionMismatch("partitioned cov blocks inconsistent");
    Matrix p(s + bb, s + bb);
    p.set_block(0, 0, t);
    p.set_block(0, s, tb);
    p.set_block(s, 0, tb.transpose());
    p.set_block(s, s, b);
    return p;
}

PartitionedCov PartitionedCov::split(const Matrix& p, int s) {
    if (p.rows() != p.cols() || s < 0 || s > p.rows()) throw DimensionMismatch("partition split");
    const int bb = p.rows() - s;
    return {p.block(0, 0, s, s), p.block(0, s, s, bb), p.block(s, s, bb, bb)};
}

GaussianBelief kf_predict(const GaussianBelief& prior, const Matrix& f, const Matrix& q) {
    if (f.cols() != prior.dim() || q.rows() != f.rows())
        throw DimensionMismatch("kf_predict model dims");
    Vec mean = f * prior.mean;
    Matrix cov = symmetrize(mul_abt(f * prior.cov, f) + q);
    return {std::move(mean), std::move(cov)};
}

GaussianBelief kf_update_gain(const GaussianBelief& prior, const Vec& z, const Matrix& h,
                              const Matrix& r, const Vec* zhat) {
    if (h.cols() != prior.dim() || z.size() != h.rows() || r.rows() != h.rows())
        throw DimensionMismatch("kf_update dims");
    const Matrix pht = mul_abt(prior.cov, h);
    const Matrix s = symmetrize(h * pht + r);
    Matrix k;
    try {
        // S K^T = (P H^T)^T  =>  K = P H^T S^-1
        k = Cholesky(s).solve(pht.transpose()).transpose();
    } catch (const NotSPD& e) {
        throw SingularInnovation(std::string("innovation covariance not SPD: ") + e.what());
    }
    const Vec predicted = zhat ? *zhat : h * prior.mean;
    Vec mean = prior.mean + k * (z - predicted);
    Matrix cov = symmetrize((Matrix::identity(prior.dim()) - k * h) * prior.cov);
    return {std::move(mean), std::move(cov)};
}

GaussianBelief kf_update_info(const GaussianBelief& prior, const Vec& z, const Matrix& h,
                              const Matrix& r, const Vec* zhat) {
    if (h.cols() != prior.dim() || z.size() != h.rows() || r.rows() != h.rows())
        throw DimensionMismatch("kf_update dims");
    Matrix prior_info;
    try {
        prior_info = spd_inverse(prior.cov);
    } catch (const NotSPD& e) {
        throw SingularPrior(std::string("prior covariance not invertible: ") + e.what());
    }
    const Matrix r_inv = spd_inverse(r);
    const Matrix ht_rinv = mul_atb(h, r_inv);
    const Matrix info = symmetrize(prior_info + ht_rinv * h);
    // EKF keeps the innovation z - zhat; linear path reduces to H^T R^-1 z.
    const Vec z_eff = zhat ? z - *zhat + h * prior.mean : z;
    const Vec rhs = prior_info * prior.mean + ht_rinv * z_eff;
    Cholesky chol(info);
    Vec mean = chol.solve(rhs);
    Matrix cov = chol.inverse();
    return {std::move(mean), std::move(cov)};
}

}  // namespace debiaskf
