#include "debiaskf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "debiaskf/baseline_approx.hpp"
#include "debiaskf/parallel.hpp"

namespace debiaskf {

int ScenarioConfig::n_steps() const {
    const double steps = duration_s / dt_s;
    const double rounded = std::round(steps);
    if (!(dt_s > 0.0) || std::fabs(steps - rounded) > 1e-9 || rounded < 1.0)
        throw ConfigError("duration_s / dt_s must be a positive integer number of steps");
    return static_cast<int>(rounded);
}

void ScenarioConfig::validate() const {
    if (geometry.receiver.size() < 2 || geometry.receiver.size() > 3)
        throw ConfigError("receiver must be 2-D or 3-D");
    for (const auto& tx : geometry.transmitters)
        if (tx.size() != dims()) throw ConfigError("transmitter dimensionality differs from receiver");
    if (n_sensors() < dims() + 1)
        throw ConfigError("need at least " + std::to_string(dims() + 1) + " transmitters for observability");
    if (target_pos.empty()) throw ConfigError("no targets configured");
    if (target_pos.size() != target_vel.size()) throw ConfigError("target pos/vel count mismatch");
    for (const auto& p : target_pos)
        if (p.size() != dims()) throw ConfigError("target position dimensionality");
    for (const auto& v : target_vel)
        if (v.size() != dims()) throw ConfigError("target velocity dimensionality");
    // Zero sigmas are legal for truth-only simulation; filtering needs SPD
    // noise and checks positivity separately.
    if (sigma_range < 0 || sigma_vel < 0 || sigma_bias < 0 || sigma_accel < 0)
        throw ConfigError("noise sigmas must be >= 0");
    if (!(init_accel_sigma > 0)) throw ConfigError("init_accel_sigma must be > 0");
    if (n_monte_carlo < 1) throw ConfigError("n_monte_carlo must be >= 1");
    if (dynamic_model != "dwpa") throw ConfigError("dynamic_model must be 'dwpa'");
    (void)n_steps();
}

ScenarioConfig ScenarioConfig::default_config() {
    // Receiver at the origin, five transmitters at 36-56 km with distinct
    // bearings. Targets start 57-61 km out and fly outbound at 130-145 m/s,
    // which keeps the first-scan fit well conditioned while the biases stay
    // weakly observable, as in the reference scenario.
    ScenarioConfig cfg;
    cfg.geometry.receiver = Vec{0.0, 0.0};
    cfg.geometry.transmitters = {Vec{40000.0, 10000.0}, Vec{-35000.0, 25000.0},
                                 Vec{10000.0, -45000.0}, Vec{-22000.0, -30000.0},
                                 Vec{25000.0, 50000.0}};
    cfg.target_pos = {Vec{48000.0, 30000.0}, Vec{42000.0, 44000.0}, Vec{56000.0, 24000.0}};
    cfg.target_vel = {Vec{110.0, 70.0}, Vec{60.0, 120.0}, Vec{140.0, 30.0}};
    return cfg;
}

namespace {
std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
std::string fmt(const Vec& v) {
    std::string s;
    for (int i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += fmt(v[i]);
    }
    return s;
}
}  // namespace

std::string ScenarioConfig::to_text() const {
    std::ostringstream os;
    os << "# debiaskf scenario\n";
    os << "dynamic_model = " << dynamic_model << "\n";
    os << "duration_s = " << fmt(duration_s) << "\n";
    os << "dt_s = " << fmt(dt_s) << "\n";
    os << "sigma_range_m = " << fmt(sigma_range) << "\n";
    os << "sigma_vel_mps = " << fmt(sigma_vel) << "\n";
    os << "sigma_bias_m = " << fmt(sigma_bias) << "\n";
    os << "sigma_accel_mps2 = " << fmt(sigma_accel) << "\n";
    os << "init_accel_sigma_mps2 = " << fmt(init_accel_sigma) << "\n";
    os << "n_monte_carlo = " << n_monte_carlo << "\n";
    os << "seed = " << seed << "\n";
    os << "receiver = " << fmt(geometry.receiver) << "\n";
    for (const auto& tx : geometry.transmitters) os << "transmitter = " << fmt(tx) << "\n";
    for (size_t t = 0; t < target_pos.size(); ++t)
        os << "target = " << fmt(target_pos[t]) << " " << fmt(target_vel[t]) << "\n";
    return os.str();
}

TargetModel dwpa_model(double dt, double sigma_a, int dims) {
    if (!(dt > 0.0)) throw ConfigError("dwpa_model: dt must be > 0");
    Matrix f_axis{{1.0, dt, 0.5 * dt * dt}, {0.0, 1.0, dt}, {0.0, 0.0, 1.0}};
    const Vec g{0.5 * dt * dt, dt, 1.0};
    Matrix q_axis = outer(g, g) * (sigma_a * sigma_a);
    std::vector<Matrix> fs(static_cast<size_t>(dims), f_axis);
    std::vector<Matrix> qs(static_cast<size_t>(dims), q_axis);
    TargetModel tm;
    tm.f = block_diag(fs);
    tm.q = block_diag(qs);
    return tm;
}

TruthRecord simulate_truth(const ScenarioConfig& cfg, std::uint64_t run_index) {
    cfg.validate();
    Rng rng(cfg.seed, run_index);
    const int d = cfg.dims();
    const int n_targets = cfg.n_targets();
    const int steps = cfg.n_steps();
    const TargetModel dyn = dwpa_model(cfg.dt_s, cfg.sigma_accel, d);
    const Vec g_axis{0.5 * cfg.dt_s * cfg.dt_s, cfg.dt_s, 1.0};

    TruthRecord rec;
    rec.truth.bias = rng.normal_vec(cfg.n_sensors(), cfg.sigma_bias);

    std::vector<Vec> x(static_cast<size_t>(n_targets));
    for (int t = 0; t < n_targets; ++t) {
        KinematicState ks{cfg.target_pos[static_cast<size_t>(t)], cfg.target_vel[static_cast<size_t>(t)],
                          rng.normal_vec(d, cfg.init_accel_sigma)};
        x[static_cast<size_t>(t)] = kinematic_to_state(ks);
    }

    Matrix h_b(cfg.meas_dim(), cfg.n_sensors());
    for (int s = 0; s < cfg.n_sensors(); ++s) h_b(2 * s, s) = 1.0;

    rec.truth.states.resize(static_cast<size_t>(steps + 1));
    rec.measurements.resize(static_cast<size_t>(steps + 1));
    for (int k = 0; k <= steps; ++k) {
        for (int t = 0; t < n_targets; ++t) {
            rec.truth.states[static_cast<size_t>(k)].push_back(x[static_cast<size_t>(t)]);
            const KinematicState ks = state_to_kinematic(x[static_cast<size_t>(t)], d);
            Vec z = bistatic_measurement(ks, cfg.geometry) + h_b * rec.truth.bias;
            for (int s = 0; s < cfg.n_sensors(); ++s) {
                z[2 * s] += cfg.sigma_range * rng.normal();
                z[2 * s + 1] += cfg.sigma_vel * rng.normal();
            }
            rec.measurements[static_cast<size_t>(k)].push_back(std::move(z));
        }
        if (k == steps) break;
        for (int t = 0; t < n_targets; ++t) {
            Vec next = dyn.f * x[static_cast<size_t>(t)];
            // Per-axis scalar acceleration increment: exactly the DWPA noise
            // with covariance sigma_a^2 g g^T.
            for (int axis = 0; axis < d; ++axis) {
                const double w = cfg.sigma_accel * rng.normal();
                for (int j = 0; j < 3; ++j) next[3 * axis + j] += g_axis[j] * w;
            }
            x[static_cast<size_t>(t)] = std::move(next);
        }
    }
    return rec;
}

namespace {

// Weighted Gauss-Newton pieces for the first-scan fit. Parameters are
// (position, velocity); the Jacobian columns come from the full-state
// Jacobian's position/velocity columns.
struct FirstScanProblem {
    const Geometry& geom;
    Matrix r_tilde;      // composite noise covariance
    Matrix w;            // R_tilde^-1
    Vec z;

    Vec residual(const Vec& p, const Vec& v) const {
        KinematicState ks{p, v, Vec(geom.dims())};
        return z - bistatic_measurement(ks, geom);
    }

    Matrix jacobian_pv(const Vec& p, const Vec& v) const {
        const int d = geom.dims();
        KinematicState ks{p, v, Vec(d)};
        const Matrix full = measurement_jacobian(ks, geom);
        const auto pos = position_indices(d);
        const auto vel = velocity_indices(d);
        Matrix j(full.rows(), 2 * d);
        for (int r = 0; r < full.rows(); ++r) {
            for (int i = 0; i < d; ++i) {
                j(r, i) = full(r, pos[static_cast<size_t>(i)]);
                j(r, d + i) = full(r, vel[static_cast<size_t>(i)]);
            }
        }
        return j;
    }

    double cost(const Vec& p, const Vec& v) const {
        const Vec r = residual(p, v);
        return r.dot(w * r);
    }
};

// Position-only fit on the range rows. Returns false when not converged.
bool gauss_newton_position(const FirstScanProblem& prob, Vec& p, int max_iter) {
    const int d = prob.geom.dims();
    const int ns = prob.geom.n_sensors();
    double prev_step = 1e300;
    int grew = 0;
    for (int it = 0; it < max_iter; ++it) {
        Matrix j(ns, d);
        Vec r(ns);
        for (int s = 0; s < ns; ++s) {
            const Vec& tx = prob.geom.transmitters[static_cast<size_t>(s)];
            r[s] = prob.z[2 * s] - bistatic_range(p, tx, prob.geom.receiver);
            const Vec ut = (p - tx) * (1.0 / (p - tx).norm());
            const Vec ur = (p - prob.geom.receiver) * (1.0 / (p - prob.geom.receiver).norm());
            for (int i = 0; i < d; ++i) j(s, i) = ut[i] + ur[i];
        }
        // Range rows share one composite weight, so plain normal equations.
        Matrix jtj = symmetrize(mul_atb(j, j));
        Vec delta;
        try {
            delta = spd_solve(jtj, j.transpose() * r);
        } catch (const NotSPD&) {
            return false;
        }
        p = p + delta;
        const double step = delta.norm();
        if (step < 1e-9 * (1.0 + p.norm())) return true;
        grew = step > prev_step ? grew + 1 : 0;
        if (grew >= 3) return false;
        prev_step = step;
    }
    return false;
}

Vec grid_seed(const FirstScanProblem& prob) {
    // Coarse lattice over the station bounding box, widened by half.
    const int d = prob.geom.dims();
    Vec lo = prob.geom.receiver, hi = prob.geom.receiver;
    for (const auto& tx : prob.geom.transmitters)
        for (int i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], tx[i]);
            hi[i] = std::max(hi[i], tx[i]);
        }
    for (int i = 0; i < d; ++i) {
        const double span = std::max(hi[i] - lo[i], 1000.0);
        lo[i] -= 1.5 * span;
        hi[i] += 1.5 * span;
    }
    const int knots = 13;
    Vec best = prob.geom.receiver;
    double best_cost = 1e300;
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (;;) {
        Vec p(d);
        for (int i = 0; i < d; ++i)
            p[i] = lo[i] + (hi[i] - lo[i]) * idx[static_cast<size_t>(i)] / (knots - 1);
        double cost = 0.0;
        bool ok = true;
        for (int s = 0; s < prob.geom.n_sensors() && ok; ++s) {
            try {
                const double e = prob.z[2 * s] -
                                 bistatic_range(p, prob.geom.transmitters[static_cast<size_t>(s)],
                                                prob.geom.receiver);
                cost += e * e;
            } catch (const DegenerateGeometry&) {
                ok = false;
            }
        }
        if (ok && cost < best_cost) {
            best_cost = cost;
            best = p;
        }
        int axis = 0;
        while (axis < d && ++idx[static_cast<size_t>(axis)] == knots) {
            idx[static_cast<size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == d) break;
    }
    return best;
}

}  // namespace

InitializedBranch initialize_branch_from_first_scan(const Vec& z0, const Geometry& geom,
                                                    const ScenarioConfig& cfg) {
    const int d = geom.dims();
    const int ns = geom.n_sensors();
    if (z0.size() != 2 * ns) throw DimensionMismatch("first scan measurement size");
    if (ns < d + 1) throw DegenerateGeometry("too few sensors for first-scan position fit");

    Matrix h_b(2 * ns, ns);
    Matrix r(2 * ns, 2 * ns);
    for (int s = 0; s < ns; ++s) {
        h_b(2 * s, s) = 1.0;
        r(2 * s, 2 * s) = cfg.sigma_range * cfg.sigma_range;
        r(2 * s + 1, 2 * s + 1) = cfg.sigma_vel * cfg.sigma_vel;
    }
    const Matrix p_b0 = Matrix::identity(ns) * (cfg.sigma_bias * cfg.sigma_bias);
    FirstScanProblem prob{geom, Matrix(), Matrix(), z0};
    prob.r_tilde = symmetrize(r + h_b * p_b0 * h_b.transpose());
    prob.w = spd_inverse(prob.r_tilde);

    // Stage 1: position from the range rows, centroid seed with a coarse
    // grid fallback.
    Vec p = geom.receiver;
    for (const auto& tx : geom.transmitters) p = p + tx;
    p = p * (1.0 / (ns + 1));
    if (!gauss_newton_position(prob, p, 50)) {
        p = grid_seed(prob);
        if (!gauss_newton_position(prob, p, 50))
            throw GaussNewtonDiverged("first-scan position fit did not converge");
    }

    // Stage 2: velocities are linear given the position.
    Matrix a(ns, d);
    Vec nu(ns);
    for (int s = 0; s < ns; ++s) {
        const Vec& tx = geom.transmitters[static_cast<size_t>(s)];
        const Vec u = (tx - p) * (1.0 / (tx - p).norm()) +
                      (geom.receiver - p) * (1.0 / (geom.receiver - p).norm());
        for (int i = 0; i < d; ++i) a(s, i) = u[i];
        nu[s] = z0[2 * s + 1];
    }
    Vec v = spd_solve(symmetrize(mul_atb(a, a)), a.transpose() * nu);

    // Stage 3: a few joint polish iterations under the composite weights.
    double prev_step = 1e300;
    for (int it = 0; it < 50; ++it) {
        const Matrix j = prob.jacobian_pv(p, v);
        const Matrix jtw = mul_atb(j, prob.w);
        const Vec delta = spd_solve(symmetrize(jtw * j), jtw * prob.residual(p, v));
        Vec dp(d), dv(d);
        for (int i = 0; i < d; ++i) {
            dp[i] = delta[i];
            dv[i] = delta[d + i];
        }
        p = p + dp;
        v = v + dv;
        const double step = delta.norm();
        if (step < 1e-9 * (1.0 + p.norm() + v.norm())) break;
        if (it == 49 || (it > 5 && step > 10.0 * prev_step))
            throw GaussNewtonDiverged("first-scan joint fit did not converge");
        prev_step = step;
    }

    // Gain at the converged linearization: G = (J^T W J)^-1 J^T W, embedded
    // into the full state with zero acceleration rows.
    const Matrix j = prob.jacobian_pv(p, v);
    const Matrix jtw = mul_atb(j, prob.w);
    const Matrix gain_pv = spd_solve(symmetrize(jtw * j), jtw);  // 2d x M
    const auto pos = position_indices(d);
    const auto vel = velocity_indices(d);
    const auto acc = acceleration_indices(d);
    Matrix gain(3 * d, 2 * ns);
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < 2 * ns; ++c) {
            gain(pos[static_cast<size_t>(i)], c) = gain_pv(i, c);
            gain(vel[static_cast<size_t>(i)], c) = gain_pv(d + i, c);
        }

    Matrix p_t = symmetrize(gain * prob.r_tilde * gain.transpose());
    for (int i = 0; i < d; ++i)
        p_t(acc[static_cast<size_t>(i)], acc[static_cast<size_t>(i)]) =
            cfg.init_accel_sigma * cfg.init_accel_sigma;

    // Estimation-error coupling: with e_x = G (H_b db + w) and e_b = -db,
    // E[e_x e_b^T] = -G H_b P_b. The squared structure C P_b C^T of the
    // cross-target blocks is unaffected by the sign.
    InitializedBranch out;
    out.coupling = -(gain * h_b);
    KinematicState ks{p, v, Vec(d)};
    out.belief.target_id = 0;
    out.belief.x_t = kinematic_to_state(ks);
    out.belief.b = Vec(ns);
    out.belief.cov = {p_t, out.coupling * p_b0, p_b0};
    return out;
}

AskfState askf_prior_from_branches(const std::vector<InitializedBranch>& branches,
                                   const FusedBias& fused0) {
    if (branches.empty()) throw EmptyInput("askf_prior_from_branches: no branches");
    const int n = static_cast<int>(branches.size());
    CrossBlocks blocks;
    blocks.b = fused0.p_fb;
    blocks.t.resize(static_cast<size_t>(n));
    std::vector<int> ids, dims;
    int total = fused0.b_f.size();
    for (int i = 0; i < n; ++i) {
        const auto& br = branches[static_cast<size_t>(i)];
        ids.push_back(br.belief.target_id);
        dims.push_back(br.belief.s_dim());
        total += br.belief.s_dim();
        for (int k = 0; k < n; ++k) {
            const auto& other = branches[static_cast<size_t>(k)];
            blocks.t[static_cast<size_t>(i)].push_back(
                k == i ? br.belief.cov.t
                       : br.coupling * fused0.p_fb * other.coupling.transpose());
        }
        blocks.tb.push_back(br.belief.cov.tb);
    }
    Vec mean(total);
    int off = 0;
    for (const auto& br : branches) {
        mean.set_segment(off, br.belief.x_t);
        off += br.belief.s_dim();
    }
    mean.set_segment(off, fused0.b_f);
    AskfState state;
    state.layout = AskfLayout::make(ids, dims, fused0.b_f.size());
    state.belief = GaussianBelief(std::move(mean), assemble_cross_blocks(blocks));
    return state;
}

const char* filter_name(FilterKind k) {
    switch (k) {
        case FilterKind::askf: return "askf";
        case FilterKind::decoupled: return "decoupled";
        case FilterKind::approx: return "approx";
    }
    return "?";
}

namespace {

// Predicted measurement for a filter mean, linearized at lin: h(lin) +
// H_t (x - x_lin) + H_b b. With lin equal to the filter's own predicted
// state this is the standard first-order EKF innovation reference.
Vec ekf_zhat(const KinematicState& lin, const Geometry& geom, const MeasModel& model,
             const Vec& x_mean, const Vec& b_mean) {
    const Vec dx = x_mean - kinematic_to_state(lin);
    return bistatic_measurement(lin, geom) + model.h_t * dx + model.h_b * b_mean;
}

StepEstimate snapshot_bank(const FilterBank& bank) {
    StepEstimate e;
    for (const auto& [id, br] : bank.branches) e.targets.push_back({br.x_t, br.cov.t});
    e.bias = bank.fused.b_f;
    e.p_bias = bank.fused.p_fb;
    return e;
}

StepEstimate snapshot_askf(const AskfState& state) {
    StepEstimate e;
    const CrossBlocks blocks = extract_cross_blocks(state);
    for (int n = 0; n < state.layout.n_targets(); ++n)
        e.targets.push_back({askf_target_mean(state, n),
                             blocks.t[static_cast<size_t>(n)][static_cast<size_t>(n)]});
    e.bias = askf_bias_mean(state);
    e.p_bias = blocks.b;
    return e;
}

}  // namespace

McResult run_monte_carlo(const ScenarioConfig& cfg, const std::set<FilterKind>& filters,
                         bool shared_linearization) {
    cfg.validate();
    if (!(cfg.sigma_range > 0) || !(cfg.sigma_vel > 0) || !(cfg.sigma_bias > 0))
        throw ConfigError("filtering requires sigma_range, sigma_vel, sigma_bias > 0");
    const int n_runs = cfg.n_monte_carlo;
    const int n_steps = cfg.n_steps();
    const int n_targets = cfg.n_targets();
    const int d = cfg.dims();

    McResult result;
    result.truth.resize(static_cast<size_t>(n_runs));
    for (FilterKind k : filters) {
        result.estimates[k].filter = filter_name(k);
        result.estimates[k].runs.resize(static_cast<size_t>(n_runs));
    }

    const TargetModel dyn = dwpa_model(cfg.dt_s, cfg.sigma_accel, d);
    std::map<int, TargetModel> dyn_map;
    for (int t = 0; t < n_targets; ++t) {
        TargetModel tm = dyn;
        tm.label = t;
        dyn_map.emplace(t, std::move(tm));
    }
    const AugmentedDynamics aug = augment_dynamics(
        [&] {
            std::vector<TargetModel> v;
            for (int t = 0; t < n_targets; ++t) v.push_back(dyn_map.at(t));
            return v;
        }(),
        cfg.n_sensors());

    parallel_for(n_runs, [&](int run) {
        try {
            TruthRecord tr = simulate_truth(cfg, static_cast<std::uint64_t>(run));

            std::vector<InitializedBranch> inits;
            for (int t = 0; t < n_targets; ++t) {
                InitializedBranch ib = initialize_branch_from_first_scan(
                    tr.measurements[0][static_cast<size_t>(t)], cfg.geometry, cfg);
                ib.belief.target_id = t;
                inits.push_back(std::move(ib));
            }
            const FusedBias fused0{Vec(cfg.n_sensors()),
                                   Matrix::identity(cfg.n_sensors()) * (cfg.sigma_bias * cfg.sigma_bias)};

            FilterBank bank;
            bank.fused = fused0;
            for (const auto& ib : inits) bank.branches.emplace(ib.belief.target_id, ib.belief);

            FilterBank approx_bank = bank;
            for (auto& [id, br] : approx_bank.branches)
                br.cov.tb = Matrix::zero(br.s_dim(), br.b_dim());

            AskfState askf;
            const bool want_askf = filters.count(FilterKind::askf) > 0;
            if (want_askf) askf = askf_prior_from_branches(inits, fused0);

            auto record = [&](FilterKind k, const StepEstimate& e) {
                auto it = result.estimates.find(k);
                if (it != result.estimates.end())
                    it->second.runs[static_cast<size_t>(run)].push_back(e);
            };
            record(FilterKind::decoupled, snapshot_bank(bank));
            record(FilterKind::approx, snapshot_bank(approx_bank));
            if (want_askf) record(FilterKind::askf, snapshot_askf(askf));

            for (int k = 1; k <= n_steps; ++k) {
                const auto& z_step = tr.measurements[static_cast<size_t>(k)];

                // Decoupled branches: linearize at their own predictions.
                std::vector<KinematicState> branch_lin;
                std::map<int, MeasurementInput> bank_meas;
                for (int t = 0; t < n_targets; ++t) {
                    const BranchBelief pred = branch_predict(bank.branches.at(t), dyn_map.at(t));
                    const KinematicState lin = state_to_kinematic(pred.x_t, d);
                    EkfMeasurement ekf =
                        ekf_meas_model(lin, cfg.geometry, cfg.sigma_range, cfg.sigma_vel, pred.b);
                    bank_meas.emplace(t, MeasurementInput{z_step[static_cast<size_t>(t)],
                                                          ekf.model, std::move(ekf.predicted)});
                    branch_lin.push_back(lin);
                }
                bank = bank_step(bank, bank_meas, dyn_map);
                record(FilterKind::decoupled, snapshot_bank(bank));

                if (filters.count(FilterKind::approx)) {
                    std::map<int, MeasurementInput> approx_meas;
                    for (int t = 0; t < n_targets; ++t) {
                        const BranchBelief pred =
                            branch_predict(approx_bank.branches.at(t), dyn_map.at(t));
                        const KinematicState lin = state_to_kinematic(pred.x_t, d);
                        EkfMeasurement ekf = ekf_meas_model(lin, cfg.geometry, cfg.sigma_range,
                                                            cfg.sigma_vel, pred.b);
                        approx_meas.emplace(t, MeasurementInput{z_step[static_cast<size_t>(t)],
                                                                ekf.model, std::move(ekf.predicted)});
                    }
                    approx_bank = approx_bank_step(approx_bank, approx_meas, dyn_map);
                    record(FilterKind::approx, snapshot_bank(approx_bank));
                }

                if (want_askf) {
                    askf = askf_predict(askf, aug.f, aug.q);
                    const Vec b_pred = askf_bias_mean(askf);
                    std::vector<MeasModel> models;
                    Vec z_all(n_targets * cfg.meas_dim());
                    Vec zhat_all(n_targets * cfg.meas_dim());
                    for (int t = 0; t < n_targets; ++t) {
                        const Vec x_pred = askf_target_mean(askf, t);
                        const KinematicState lin = shared_linearization
                                                       ? branch_lin[static_cast<size_t>(t)]
                                                       : state_to_kinematic(x_pred, d);
                        EkfMeasurement ekf = ekf_meas_model(lin, cfg.geometry, cfg.sigma_range,
                                                            cfg.sigma_vel, b_pred);
                        zhat_all.set_segment(t * cfg.meas_dim(),
                                             ekf_zhat(lin, cfg.geometry, ekf.model, x_pred, b_pred));
                        z_all.set_segment(t * cfg.meas_dim(), z_step[static_cast<size_t>(t)]);
                        models.push_back(std::move(ekf.model));
                    }
                    const AugmentedMeasurement am = augment_measurement(models);
                    askf = askf_update_gain(askf, z_all, am.h, am.r, &zhat_all);
                    record(FilterKind::askf, snapshot_askf(askf));
                }
            }
            result.truth[static_cast<size_t>(run)] = std::move(tr.truth);
        } catch (const FilterError& e) {
            throw FilterError("run " + std::to_string(run) + ": " + e.what());
        }
    });
    return result;
}

}  // namespace debiaskf
