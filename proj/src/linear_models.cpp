#include "debiaskf/linear_models.hpp"

#include <string>

namespace debiaskf {

Matrix MeasModel::stacked() const {
    if (h_b.rows() != h_t.rows()) throw DimensionMismatch("MeasModel: H_t/H_b row mismatch");
    Matrix h(meas_dim(), state_dim() + bias_dim());
    h.set_block(0, 0, h_t);
    h.set_block(0, state_dim(), h_b);
    return h;
}

AugmentedDynamics augment_dynamics(const std::vector<TargetModel>& models, int bias_dim) {
    if (models.empty()) throw DimensionMismatch("augment_dynamics: no targets");
    if (bias_dim < 0) throw DimensionMismatch("augment_dynamics: negative bias dim");
    int total = bias_dim;
    for (const auto& m : models) {
        if (m.f.rows() != m.f.cols() || m.q.rows() != m.f.rows() || m.q.cols() != m.f.rows())
            throw DimensionMismatch("target model " + std::to_string(m.label) + " has inconsistent F/Q");
        total += m.state_dim();
    }
    Matrix f(total, total), q(total, total);
    int off = 0;
    for (const auto& m : models) {
        f.set_block(off, off, m.f);
        q.set_block(off, off, m.q);
        off += m.state_dim();
    }
    f.set_block(off, off, Matrix::identity(bias_dim));
    return {std::move(f), std::move(q)};
}

AugmentedMeasurement augment_measurement(const std::vector<MeasModel>& models) {
    if (models.empty()) throw DimensionMismatch("augment_measurement: no targets");
    const int bias_dim = models.front().bias_dim();
    int rows = 0, state_total = 0;
    for (const auto& m : models) {
        if (m.bias_dim() != bias_dim) throw DimensionMismatch("augment_measurement: bias dims differ");
        if (m.h_b.rows() != m.meas_dim() || m.r.rows() != m.meas_dim() || m.r.cols() != m.meas_dim())
            throw DimensionMismatch("augment_measurement: inconsistent model blocks");
        rows += m.meas_dim();
        state_total += m.state_dim();
    }
    Matrix h(rows, state_total + bias_dim);
    Matrix r(rows, rows);
    int row_off = 0, col_off = 0;
    for (const auto& m : models) {
        h.set_block(row_off, col_off, m.h_t);
        h.set_block(row_off, state_total, m.h_b);
        r.set_block(row_off, row_off, m.r);
        row_off += m.meas_dim();
        col_off += m.state_dim();
    }
    return {std::move(h), std::move(r)};
}

}  // namespace debiaskf
