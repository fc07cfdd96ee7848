#pragma once

// RMSE and NEES across Monte-Carlo runs, with chi-square consistency
// bounds. Pure aggregation over immutable records.

#include <string>
#include <utility>
#include <vector>

#include "debiaskf/records.hpp"

namespace debiaskf {

struct MetricSeries {
    std::string metric;  // rmse_location, rmse_bias, nees_location, ...
    std::string filter;
    int id = 0;  // target or sensor-group id, -1 when not applicable
    std::vector<double> values;
    double bound_low = 0.0;   // NEES only
    double bound_high = 0.0;  // NEES only
};

// Per step, sqrt of the MC mean of the squared position-error norm, one
// series per target. pos_idx selects the position components of the state.
std::vector<MetricSeries> rmse_location(const FilterEstimates& est, const std::vector<RunTruth>& truth,
                                        const std::vector<int>& pos_idx);

// Per step, sqrt(MC mean of ||bias_err||^2) / divisor. The headline series
// divides by the sensor count (the plotted convention); the per-sensor
// variant divides the squared norm by B inside the root.
MetricSeries rmse_bias(const FilterEstimates& est, const std::vector<RunTruth>& truth, int n_sensors);
MetricSeries rmse_bias_per_sensor(const FilterEstimates& est, const std::vector<RunTruth>& truth);

// Per step, MC average of err^T Cov^-1 err on the position block / the bias.
std::vector<MetricSeries> nees_location(const FilterEstimates& est, const std::vector<RunTruth>& truth,
                                        const std::vector<int>& pos_idx);
MetricSeries nees_bias(const FilterEstimates& est, const std::vector<RunTruth>& truth);

// Two-sided confidence interval for the average NEES of n_runs samples of
// dimension dim: chi-square quantiles of n*d dof divided by n.
std::pair<double, double> nees_bounds(int n_runs, int dim, double confidence = 0.95);

// Chi-square CDF and quantile (numerical; validated against table values).
double chi2_cdf(double x, double dof);
double chi2_quantile(double p, double dof);

}  // namespace debiaskf
