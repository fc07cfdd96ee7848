#include "debiaskf/radar_geom.hpp"

#include <cmath>
#include <string>

namespace debiaskf {

namespace {

double checked_distance(const Vec& r, const Vec& station, const char* what) {
    const double d = (r - station).norm();
    if (d < kMinSensorDistance)
        throw DegenerateGeometry(std::string(what) + " within " + std::to_string(kMinSensorDistance) +
                                 " m of target");
    return d;
}

}  // namespace

double bistatic_range(const Vec& r, const Vec& tx, const Vec& rx) {
    return checked_distance(r, tx, "transmitter") + checked_distance(r, rx, "receiver");
}

double bistatic_velocity(const Vec& r, const Vec& v, const Vec& tx, const Vec& rx) {
    const double dt = checked_distance(r, tx, "transmitter");
    const double dr = checked_distance(r, rx, "receiver");
    const Vec u = (tx - r) * (1.0 / dt) + (rx - r) * (1.0 / dr);
    return v.dot(u);
}

Vec bistatic_measurement(const KinematicState& x, const Geometry& geom) {
    Vec z(2 * geom.n_sensors());
    for (int s = 0; s < geom.n_sensors(); ++s) {
        const Vec& tx = geom.transmitters[static_cast<size_t>(s)];
        z[2 * s] = bistatic_range(x.r, tx, geom.receiver);
        z[2 * s + 1] = bistatic_velocity(x.r, x.v, tx, geom.receiver);
    }
    return z;
}

Matrix measurement_jacobian(const KinematicState& x, const Geometry& geom) {
    const int d = x.dims();
    const int state_dim = 3 * d;
    const auto pos_idx = position_indices(d);
    const auto vel_idx = velocity_indices(d);
    Matrix h(2 * geom.n_sensors(), state_dim);
    for (int s = 0; s < geom.n_sensors(); ++s) {
        const Vec& tx = geom.transmitters[static_cast<size_t>(s)];
        const double dist_t = checked_distance(x.r, tx, "transmitter");
        const double dist_r = checked_distance(x.r, geom.receiver, "receiver");
        const Vec ut = (x.r - tx) * (1.0 / dist_t);
        const Vec ur = (x.r - geom.receiver) * (1.0 / dist_r);

        // d range / d r = ut + ur; range has no velocity or acceleration
        // dependence.
        for (int i = 0; i < d; ++i) h(2 * s, pos_idx[static_cast<size_t>(i)]) = ut[i] + ur[i];

        // velocity = -v . (ut + ur):
        //   d/dv = -(ut + ur)
        //   d/dr = -[ (I - ut ut^T) v / dist_t + (I - ur ur^T) v / dist_r ]
        const double vdott = x.v.dot(ut);
        const double vdotr = x.v.dot(ur);
        for (int i = 0; i < d; ++i) {
            const double grad_t = (x.v[i] - vdott * ut[i]) / dist_t;
            const double grad_r = (x.v[i] - vdotr * ur[i]) / dist_r;
            h(2 * s + 1, pos_idx[static_cast<size_t>(i)]) = -(grad_t + grad_r);
            h(2 * s + 1, vel_idx[static_cast<size_t>(i)]) = -(ut[i] + ur[i]);
        }
    }
    return h;
}

EkfMeasurement ekf_meas_model(const KinematicState& x_pred, const Geometry& geom,
                              double sigma_range, double sigma_vel, const Vec& bias_est) {
    const int ns = geom.n_sensors();
    if (bias_est.size() != ns) throw DimensionMismatch("ekf_meas_model: bias dim vs sensors");
    EkfMeasurement out;
    out.model.h_t = measurement_jacobian(x_pred, geom);
    out.model.h_b = Matrix::zero(2 * ns, ns);
    out.model.r = Matrix::zero(2 * ns, 2 * ns);
    for (int s = 0; s < ns; ++s) {
        out.model.h_b(2 * s, s) = 1.0;
        out.model.r(2 * s, 2 * s) = sigma_range * sigma_range;
        out.model.r(2 * s + 1, 2 * s + 1) = sigma_vel * sigma_vel;
    }
    out.predicted = bistatic_measurement(x_pred, geom) + out.model.h_b * bias_est;
    return out;
}

Vec kinematic_to_state(const KinematicState& x) {
    const int d = x.dims();
    Vec s(3 * d);
    for (int i = 0; i < d; ++i) {
        s[3 * i] = x.r[i];
        s[3 * i + 1] = x.v[i];
        s[3 * i + 2] = x.a[i];
    }
    return s;
}

KinematicState state_to_kinematic(const Vec& state, int dims) {
    if (state.size() != 3 * dims) throw DimensionMismatch("state_to_kinematic: dim");
    KinematicState x{Vec(dims), Vec(dims), Vec(dims)};
    for (int i = 0; i < dims; ++i) {
        x.r[i] = state[3 * i];
        x.v[i] = state[3 * i + 1];
        x.a[i] = state[3 * i + 2];
    }
    return x;
}

std::vector<int> position_indices(int dims) {
    std::vector<int> idx(static_cast<size_t>(dims));
    for (int i = 0; i < dims; ++i) idx[static_cast<size_t>(i)] = 3 * i;
    return idx;
}

std::vector<int> velocity_indices(int dims) {
    std::vector<int> idx(static_cast<size_t>(dims));
    for (int i = 0; i < dims; ++i) idx[static_cast<size_t>(i)] = 3 * i + 1;
    return idx;
}

std::vector<int> acceleration_indices(int dims) {
    std::vector<int> idx(static_cast<size_t>(dims));
    for (int i = 0; i < dims; ++i) idx[static_cast<size_t>(i)] = 3 * i + 2;
    return idx;
}

}  // namespace debiaskf
