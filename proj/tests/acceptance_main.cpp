// Acceptance suite. Runs every headline requirement end to end and prints
// one PASS/FAIL line per criterion; exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "debiaskf/baseline_approx.hpp"
#include "debiaskf/complexity.hpp"
#include "debiaskf/equivalence.hpp"
#include "debiaskf/metrics.hpp"
#include "debiaskf/scenario.hpp"
#include "oracles.hpp"

using namespace debiaskf;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!pass) ++g_failures;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_spd(Rng& rng, int n) {
    const Matrix e = rng.random_matrix(n, n);
    return symmetrize(mul_abt(e, e) + Matrix::identity(n) * 0.5);
}

// ---------------------------------------------------------------- 1 & 2
void criteria_equivalence_and_lemma() {
    const auto t0 = std::chrono::steady_clock::now();
    const int n_set[] = {1, 2, 3, 4};
    const int s_set[] = {2, 4, 6};
    const int b_set[] = {1, 3, 5};
    const int m_set[] = {2, 4};
    Rng rng(20260810);

    double worst = 0.0, worst_lemma = 0.0, worst_info = 0.0;
    std::string worst_shape;
    for (int c = 0; c < 20; ++c) {
        const int n = n_set[c % 4], s = s_set[c % 3], b = b_set[(c / 2) % 3], m = m_set[c % 2];
        LinearSystem sys = make_random_system(rng, n, s, b, m);
        const EquivalenceReport rep = run_equivalence(sys, 50, 1000 + static_cast<std::uint64_t>(c));
        if (rep.max_overall() > worst) {
            worst = rep.max_overall();
            worst_shape = "N=" + std::to_string(n) + ",S=" + std::to_string(s) + ",B=" +
                          std::to_string(b) + ",M=" + std::to_string(m);
        }
        worst_lemma = std::max(worst_lemma, rep.lemma_residual);
        worst_info = std::max(worst_info, rep.cross_info_residual);
    }

    // Negative control: a 10% cross-covariance perturbation must visibly
    // break the agreement on a multi-target system.
    Rng rng_neg(99);
    LinearSystem neg = make_random_system(rng_neg, 3, 4, 3, 2);
    perturb_initial_cross(neg, 0, 0.10);
    const double broken = run_equivalence(neg, 50, 4242).max_overall();

    const double elapsed = seconds_since(t0);
    const bool pass1 = worst < 1e-8 && broken > 1e-4 && elapsed < 10.0;
    report(1, "exact equivalence of decoupled bank and joint filter", pass1,
           "max rel dev " + num(worst) + " at " + worst_shape + ", perturbed control " +
               num(broken) + ", " + num(elapsed) + " s");

    const bool pass2 = worst_lemma < 1e-8 && worst_info < 1e-8;
    report(2, "cross-covariance lemma and zero cross-information", pass2,
           "lemma residual " + num(worst_lemma) + ", info off-diagonal " +
               num(worst_info));
}

// -------------------------------------------------------------------- 3
void criterion_duality() {
    Rng rng(31337);
    double worst_joint = 0.0, worst_branch = 0.0, worst_feedback = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        {  // joint filter update, gain vs information form
            const int n = rng.uniform_int(2, 8), m = rng.uniform_int(1, 6);
            GaussianBelief prior(rng.normal_vec(n), random_spd(rng, n));
            const Matrix h = rng.random_matrix(m, n);
            const Matrix r = random_spd(rng, m);
            const Vec z = rng.normal_vec(m);
            const GaussianBelief a = kf_update_gain(prior, z, h, r);
            const GaussianBelief b = kf_update_info(prior, z, h, r);
            worst_joint = std::max({worst_joint, rel_deviation(a.mean, b.mean),
                                    rel_deviation(a.cov, b.cov)});
        }
        {  // branch update, gain vs information form
            const int s = rng.uniform_int(1, 5), b = rng.uniform_int(1, 4), m = rng.uniform_int(1, 5);
            BranchBelief br;
            br.target_id = 0;
            br.x_t = rng.normal_vec(s);
            br.b = rng.normal_vec(b);
            br.cov = PartitionedCov::split(random_spd(rng, s + b), s);
            const MeasModel model{rng.random_matrix(m, s), rng.random_matrix(m, b), random_spd(rng, m)};
            const Vec z = rng.normal_vec(m);
            const BranchBelief g = branch_update(br, z, model);
            const BranchBelief i = branch_update_info(br, z, model);
            worst_branch = std::max({worst_branch, rel_deviation(g.x_t, i.x_t),
                                     rel_deviation(g.cov.assemble(), i.cov.assemble())});
        }
        {  // feedback covariance vs its information-form identity
            const int s = rng.uniform_int(1, 5), b = rng.uniform_int(1, 4);
            BranchBelief br;
            br.target_id = 0;
            br.x_t = rng.normal_vec(s);
            br.b = rng.normal_vec(b);
            br.cov = PartitionedCov::split(random_spd(rng, s + b), s);
            const Matrix p_b_inv = spd_inverse(br.cov.b);
            const Matrix p_fb = spd_inverse(symmetrize(p_b_inv + random_spd(rng, b)));
            const BranchBelief out = feedback_update(br, {rng.normal_vec(b), p_fb});
            const Matrix lhs = spd_inverse(out.cov.assemble());
            Matrix add(s + b, s + b);
            add.set_block(s, s, spd_inverse(p_fb) - p_b_inv);
            const Matrix rhs = spd_inverse(br.cov.assemble()) + add;
            worst_feedback = std::max(worst_feedback, rel_deviation(lhs, rhs));
        }
    }
    const bool pass = worst_joint < 1e-9 && worst_branch < 1e-9 && worst_feedback < 1e-9;
    report(3, "gain/information duality and feedback identity", pass,
           "joint " + num(worst_joint) + ", branch " + num(worst_branch) +
               ", feedback " + num(worst_feedback));
}

// ---------------------------------------------------------------- 4 & 5
void criteria_scenario() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig cfg = ScenarioConfig::default_config();
    const std::set<FilterKind> filters{FilterKind::decoupled, FilterKind::approx};
    const McResult mc = run_monte_carlo(cfg, filters);
    const auto pos_idx = position_indices(cfg.dims());

    const auto& dec = mc.estimates.at(FilterKind::decoupled);
    const auto& apx = mc.estimates.at(FilterKind::approx);
    const double dec_rmse = rmse_bias(dec, mc.truth, cfg.n_sensors()).values.back();
    const double apx_rmse = rmse_bias(apx, mc.truth, cfg.n_sensors()).values.back();
    const double improvement = (apx_rmse - dec_rmse) / apx_rmse;
    const double elapsed = seconds_since(t0);

    const bool pass4 = dec_rmse >= 7.0 && dec_rmse <= 25.0 && apx_rmse >= 35.0 && apx_rmse <= 120.0 &&
                       improvement >= 0.60 && elapsed < 120.0;
    report(4, "scenario bias RMSE endpoints and improvement", pass4,
           "decoupled " + num(dec_rmse) + " m, approx " + num(apx_rmse) +
               " m, improvement " + num(100.0 * improvement) + "%, " +
               num(elapsed) + " s");

    // Criterion 5: fraction of steps after step 10 with average NEES inside
    // the two-sided 95% bounds.
    auto inside_fraction = [](const MetricSeries& s) {
        int inside = 0, total = 0;
        for (size_t k = 11; k < s.values.size(); ++k) {
            ++total;
            if (s.values[k] >= s.bound_low && s.values[k] <= s.bound_high) ++inside;
        }
        return static_cast<double>(inside) / total;
    };
    double dec_worst = 1.0, apx_worst_loc = 0.0;
    for (const auto& s : nees_location(dec, mc.truth, pos_idx))
        dec_worst = std::min(dec_worst, inside_fraction(s));
    dec_worst = std::min(dec_worst, inside_fraction(nees_bias(dec, mc.truth)));
    for (const auto& s : nees_location(apx, mc.truth, pos_idx))
        apx_worst_loc = std::max(apx_worst_loc, inside_fraction(s));
    const double apx_bias_frac = inside_fraction(nees_bias(apx, mc.truth));

    const bool pass5 = dec_worst >= 0.80 && apx_worst_loc <= 0.30 && apx_bias_frac <= 0.30;
    report(5, "NEES consistency of decoupled vs approx baseline", pass5,
           "decoupled min inside-fraction " + num(dec_worst) +
               ", approx location max " + num(apx_worst_loc) + ", approx bias " +
               num(apx_bias_frac));
}

// -------------------------------------------------------------------- 6
void criterion_complexity() {
    const CountModel shape{0, 6, 5, 2};
    auto count = [&](long long n) {
        CountModel cm = shape;
        cm.n_targets = n;
        return decoupled_mult_count(cm);
    };
    const bool affine = (count(2) - count(1) == count(3) - count(2)) &&
                        (count(16) - count(8) == 8 * (count(3) - count(2)));

    const CountModel radar_shape{3, 6, 5, 10};
    const bool count_order = askf_mult_count(radar_shape) > decoupled_mult_count(radar_shape);

    const std::vector<int> sweep{2, 4, 8, 16, 32};
    const BenchResult dec = scaling_benchmark(BenchFilter::decoupled, sweep, shape, 80.0, 2026);
    const BenchResult askf = scaling_benchmark(BenchFilter::askf, sweep, shape, 80.0, 2026);

    const bool pass = affine && count_order && dec.loglog_slope <= 1.3 && askf.loglog_slope >= 2.0;
    report(6, "complexity: affine counts and wall-clock scaling", pass,
           std::string("affine ") + (affine ? "yes" : "NO") + ", counts ordered " +
               (count_order ? "yes" : "NO") + ", slopes decoupled " +
               num(dec.loglog_slope) + " / joint " + num(askf.loglog_slope));
}

// -------------------------------------------------------------------- 7
void criterion_micro() {
    // One-target bank vs joint filter: identical numbers, same code paths.
    Rng rng(777);
    bool one_target_exact = true;
    {
        LinearSystem sys = make_random_system(rng, 1, 3, 2, 3);
        FilterBank bank = sys.bank0;
        AskfState askf = sys.askf0;
        const auto aug_d = augment_dynamics(sys.dynamics, sys.b_dim);
        const auto aug_m = augment_measurement(sys.meas);
        std::map<int, TargetModel> dyn{{0, sys.dynamics[0]}};
        for (int k = 0; k < 30; ++k) {
            const Vec z = rng.normal_vec(sys.m_dim);
            bank = bank_step(bank, {{0, MeasurementInput{z, sys.meas[0], std::nullopt}}}, dyn);
            askf = askf_update_gain(askf_predict(askf, aug_d.f, aug_d.q), z, aug_m.h, aug_m.r);
            const CrossBlocks blocks = extract_cross_blocks(askf);
            const BranchBelief& br = bank.branches.at(0);
            one_target_exact = one_target_exact && br.x_t == askf_target_mean(askf, 0) &&
                               bank.fused.b_f == askf_bias_mean(askf) && br.cov.t == blocks.t[0][0] &&
                               br.cov.tb == blocks.tb[0] && bank.fused.p_fb == blocks.b;
        }
    }

    // Jacobians against central differences over 1000 random states.
    Geometry geom;
    geom.receiver = Vec{0.0, 0.0};
    geom.transmitters = {Vec{40000.0, 10000.0}, Vec{-35000.0, 25000.0}, Vec{10000.0, -45000.0},
                         Vec{-22000.0, -30000.0}, Vec{25000.0, 50000.0}};
    int jac_failures = 0;
    double worst_vel = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        KinematicState x{rng.normal_vec(2, 20000.0), rng.normal_vec(2, 120.0), rng.normal_vec(2, 1.0)};
        bool near = (x.r - geom.receiver).norm() < 2000.0;
        for (const auto& tx : geom.transmitters) near = near || (x.r - tx).norm() < 2000.0;
        if (near) continue;
        const Matrix jac = measurement_jacobian(x, geom);
        const Vec state = kinematic_to_state(x);
        // Row-wise comparison: position columns differenced at 1e-3 m,
        // velocity columns at 1e-4 m/s.
        for (int row = 0; row < jac.rows(); ++row) {
            double diff_sq = 0.0, fd_sq = 0.0;
            for (int col = 0; col < state.size(); ++col) {
                if (col % 3 == 2) {
                    if (jac(row, col) != 0.0) ++jac_failures;  // acceleration columns stay zero
                    continue;
                }
                const double h = col % 3 == 1 ? 1e-4 : 1e-3;
                const double fd = oracle::central_diff(
                    [&](double t) {
                        Vec s = state;
                        s[col] = t;
                        return bistatic_measurement(state_to_kinematic(s, 2), geom)[row];
                    },
                    state[col], h);
                diff_sq += (jac(row, col) - fd) * (jac(row, col) - fd);
                fd_sq += fd * fd;
            }
            if (std::sqrt(diff_sq) > 1e-5 * std::sqrt(fd_sq) + 1e-7) ++jac_failures;
        }
        // Measured velocity vs the closing rate from finite differences at
        // the 1e-4 s step; rates below the oracle's resolution are skipped.
        for (int s = 0; s < geom.n_sensors(); ++s) {
            const Vec& tx = geom.transmitters[static_cast<size_t>(s)];
            const double fd = oracle::central_diff(
                [&](double t) { return bistatic_range(x.r + x.v * t, tx, geom.receiver); }, 0.0, 1e-4);
            const double got = bistatic_velocity(x.r, x.v, tx, geom.receiver);
            if (std::fabs(fd) > 0.5)
                worst_vel = std::max(worst_vel, std::fabs(got + fd) / std::fabs(fd));
        }
    }

    const bool pass = one_target_exact && jac_failures == 0 && worst_vel < 1e-6;
    report(7, "micro oracles: one-target identity, Jacobian and rate checks", pass,
           std::string("one-target exact ") + (one_target_exact ? "yes" : "NO") + ", jacobian failures " +
               std::to_string(jac_failures) + ", velocity rel err " + num(worst_vel));
}

}  // namespace

int main() {
    std::printf("debiaskf acceptance suite\n");
    criteria_equivalence_and_lemma();
    criterion_duality();
    criteria_scenario();
    criterion_complexity();
    criterion_micro();
    std::printf("%d criteria failed\n", g_failures);
    return g_failures;
}
