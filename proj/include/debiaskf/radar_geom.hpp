#pragma once

// Bistatic measurement functions, their Jacobians, and the adapter that
// turns them into per-step linearized measurement models. Measurements per
// sensor are (range, velocity) pairs stacked sensor-major; only the range
// rows carry an additive sensor bias.
//
// State layout is per-axis (p, v, a) triplets: [px, vx, ax, py, vy, ay, ...].

#include <vector>

#include "debiaskf/linear_models.hpp"
#include "debiaskf/matrix.hpp"

namespace debiaskf {

struct Geometry {
    std::vector<Vec> transmitters;
    Vec receiver;

    int dims() const { return receiver.size(); }
    int n_sensors() const { return static_cast<int>(transmitters.size()); }
};

struct KinematicState {
    Vec r;  // position, m
    Vec v;  // velocity, m/s
    Vec a;  // acceleration, m/s^2

    int dims() const { return r.size(); }
};

// Distance below which the geometry is considered degenerate (Jacobian
// denominators blow up).
inline constexpr double kMinSensorDistance = 1.0;

// ||r - tx|| + ||r - rx||. Throws DegenerateGeometry near either station.
double bistatic_range(const Vec& r, const Vec& tx, const Vec& rx);

// v^T [ (tx - r)/||tx - r|| + (rx - r)/||rx - r|| ] — positive when closing
// on the transmitter/receiver pair, i.e. the negative rate of the bistatic
// range sum.
double bistatic_velocity(const Vec& r, const Vec& v, const Vec& tx, const Vec& rx);

// h(x): stacked [range_1, velocity_1, range_2, velocity_2, ...].
Vec bistatic_measurement(const KinematicState& x, const Geometry& geom);

// d h / d state, rows ordered like bistatic_measurement. Range rows have
// zero velocity and acceleration columns; velocity rows have zero
// acceleration columns.
Matrix measurement_jacobian(const KinematicState& x, const Geometry& geom);

struct EkfMeasurement {
    MeasModel model;
    Vec predicted;  // h(x_pred) + H_b bias_est
};

// Linearizes at x_pred and builds (H_t, H_b, R) plus the predicted
// measurement for the innovation. One bias column per sensor, entering the
// range row only. R = diag(sigma_range^2, sigma_vel^2, ...).
EkfMeasurement ekf_meas_model(const KinematicState& x_pred, const Geometry& geom,
                              double sigma_range, double sigma_vel, const Vec& bias_est);

// State-vector layout helpers.
Vec kinematic_to_state(const KinematicState& x);
KinematicState state_to_kinematic(const Vec& state, int dims);
std::vector<int> position_indices(int dims);
std::vector<int> velocity_indices(int dims);
std::vector<int> acceleration_indices(int dims);

}  // namespace debiaskf
