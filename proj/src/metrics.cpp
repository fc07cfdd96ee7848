#include "debiaskf/metrics.hpp"

#include <cmath>
#include <string>

#include "debiaskf/linalg.hpp"

namespace debiaskf {

namespace {

// Regularized lower incomplete gamma P(a, x): series expansion for
// x < a + 1, continued fraction (modified Lentz) otherwise.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int it = 0; it < 500; ++it) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

void check_nonempty(const FilterEstimates& est, const std::vector<RunTruth>& truth) {
    if (est.runs.empty() || truth.empty()) throw EmptyInput("no Monte-Carlo runs");
    if (est.runs.size() != truth.size())
        throw DimensionMismatch("estimate runs " + std::to_string(est.runs.size()) + " vs truth " +
                                std::to_string(truth.size()));
}

}  // namespace

double chi2_cdf(double x, double dof) { return gamma_p(0.5 * dof, 0.5 * x); }

double chi2_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0) || !(dof > 0.0)) throw FilterError("chi2_quantile domain");
    // Bracket then bisect; the CDF is monotone so this is unconditionally
    // convergent and accurate well past what the bounds need.
    double lo = 0.0;
    double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
    while (chi2_cdf(hi, dof) < p) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(mid, dof) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> nees_bounds(int n_runs, int dim, double confidence) {
    if (n_runs < 1 || dim < 1) throw EmptyInput("nees_bounds: n_runs*dim must be >= 1");
    const double dof = static_cast<double>(n_runs) * dim;
    const double tail = 0.5 * (1.0 - confidence);
    return {chi2_quantile(tail, dof) / n_runs, chi2_quantile(1.0 - tail, dof) / n_runs};
}

std::vector<MetricSeries> rmse_location(const FilterEstimates& est, const std::vector<RunTruth>& truth,
                                        const std::vector<int>& pos_idx) {
    check_nonempty(est, truth);
    const size_t n_runs = est.runs.size();
    const size_t n_steps = est.runs.front().size();
    const size_t n_targets = est.runs.front().front().targets.size();
    std::vector<MetricSeries> series(n_targets);
    for (size_t t = 0; t < n_targets; ++t) {
        series[t].metric = "rmse_location";
        series[t].filter = est.filter;
        series[t].id = static_cast<int>(t);
        series[t].values.assign(n_steps, 0.0);
    }
    for (size_t run = 0; run < n_runs; ++run) {
        for (size_t k = 0; k < n_steps; ++k) {
            for (size_t t = 0; t < n_targets; ++t) {
                const Vec& x = est.runs[run][k].targets[t].x;
                const Vec& xt = truth[run].states[k][t];
                double se = 0.0;
                for (int idx : pos_idx) {
                    const double e = x[idx] - xt[idx];
                    se += e * e;
                }
                series[t].values[k] += se;
            }
        }
    }
    for (auto& s : series)
        for (double& v : s.values) v = std::sqrt(v / static_cast<double>(n_runs));
    return series;
}

namespace {
MetricSeries rmse_bias_impl(const FilterEstimates& est, const std::vector<RunTruth>& truth,
                            double divisor, bool inside_root, const char* name) {
    check_nonempty(est, truth);
    const size_t n_runs = est.runs.size();
    const size_t n_steps = est.runs.front().size();
    MetricSeries s;
    s.metric = name;
    s.filter = est.filter;
    s.id = -1;
    s.values.assign(n_steps, 0.0);
    for (size_t run = 0; run < n_runs; ++run)
        for (size_t k = 0; k < n_steps; ++k) {
            const Vec err = est.runs[run][k].bias - truth[run].bias;
            s.values[k] += err.dot(err);
        }
    for (double& v : s.values) {
        const double mean_sq = v / static_cast<double>(n_runs);
        v = inside_root ? std::sqrt(mean_sq / divisor) : std::sqrt(mean_sq) / divisor;
    }
    return s;
}
}  // namespace

MetricSeries rmse_bias(const FilterEstimates& est, const std::vector<RunTruth>& truth, int n_sensors) {
    return rmse_bias_impl(est, truth, static_cast<double>(n_sensors), false, "rmse_bias");
}

MetricSeries rmse_bias_per_sensor(const FilterEstimates& est, const std::vector<RunTruth>& truth) {
    const int b = est.runs.empty() || est.runs.front().empty() ? 1 : est.runs.front().front().bias.size();
    return rmse_bias_impl(est, truth, static_cast<double>(b), true, "rmse_bias_per_sensor");
}

std::vector<MetricSeries> nees_location(const FilterEstimates& est, const std::vector<RunTruth>& truth,
                                        const std::vector<int>& pos_idx) {
    check_nonempty(est, truth);
    const size_t n_runs = est.runs.size();
    const size_t n_steps = est.runs.front().size();
    const size_t n_targets = est.runs.front().front().targets.size();
    const int d = static_cast<int>(pos_idx.size());
    const auto bounds = nees_bounds(static_cast<int>(n_runs), d);
    std::vector<MetricSeries> series(n_targets);
    for (size_t t = 0; t < n_targets; ++t) {
        series[t].metric = "nees_location";
        series[t].filter = est.filter;
        series[t].id = static_cast<int>(t);
        series[t].values.assign(n_steps, 0.0);
        series[t].bound_low = bounds.first;
        series[t].bound_high = bounds.second;
    }
    for (size_t run = 0; run < n_runs; ++run) {
        for (size_t k = 0; k < n_steps; ++k) {
            for (size_t t = 0; t < n_targets; ++t) {
                const auto& te = est.runs[run][k].targets[t];
                Vec err(d);
                Matrix cov(d, d);
                for (int i = 0; i < d; ++i) {
                    err[i] = te.x[pos_idx[static_cast<size_t>(i)]] -
                             truth[run].states[k][t][pos_idx[static_cast<size_t>(i)]];
                    for (int j = 0; j < d; ++j)
                        cov(i, j) = te.p(pos_idx[static_cast<size_t>(i)], pos_idx[static_cast<size_t>(j)]);
                }
                try {
                    series[t].values[k] += err.dot(spd_solve(symmetrize(cov), err));
                } catch (const NotSPD& e) {
                    throw SingularCovariance("nees_location run " + std::to_string(run) + " step " +
                                             std::to_string(k) + ": " + e.what());
                }
            }
        }
    }
    for (auto& s : series)
        for (double& v : s.values) v /= static_cast<double>(n_runs);
    return series;
}

MetricSeries nees_bias(const FilterEstimates& est, const std::vector<RunTruth>& truth) {
    check_nonempty(est, truth);
    const size_t n_runs = est.runs.size();
    const size_t n_steps = est.runs.front().size();
    const int b = est.runs.front().front().bias.size();
    const auto bounds = nees_bounds(static_cast<int>(n_runs), b);
    MetricSeries s;
    s.metric = "nees_bias";
    s.filter = est.filter;
    s.id = -1;
    s.values.assign(n_steps, 0.0);
    s.bound_low = bounds.first;
    s.bound_high = bounds.second;
    for (size_t run = 0; run < n_runs; ++run) {
        for (size_t k = 0; k < n_steps; ++k) {
            const Vec err = est.runs[run][k].bias - truth[run].bias;
            try {
                s.values[k] += err.dot(spd_solve(est.runs[run][k].p_bias, err));
            } catch (const NotSPD& e) {
                throw SingularCovariance("nees_bias run " + std::to_string(run) + " step " +
                                         std::to_string(k) + ": " + e.what());
            }
        }
    }
    for (double& v : s.values) v /= static_cast<double>(n_runs);
    return s;
}

}  // namespace debiaskf
