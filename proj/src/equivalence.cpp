#include "debiaskf/equivalence.hpp"

#include <algorithm>
#include <cmath>

namespace debiaskf {

namespace {

// Spectral radius estimate by power iteration, enough to scale F stable.
double spectral_radius(const Matrix& a, Rng& rng) {
    Vec v = rng.normal_vec(a.rows());
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
        Vec w = a * v;
        lambda = w.norm();
        if (lambda < 1e-30) return 0.0;
        v = w * (1.0 / lambda);
    }
    return lambda;
}

Matrix random_spd(Rng& rng, int n, double diag_boost) {
    const Matrix e = rng.random_matrix(n, n, 1.0 / std::sqrt(static_cast<double>(n)));
    return symmetrize(mul_abt(e, e) + Matrix::identity(n) * diag_boost);
}

}  // namespace

LinearSystem make_random_system(Rng& rng, int n_targets, int s_dim, int b_dim, int m_dim) {
    LinearSystem sys;
    sys.n_targets = n_targets;
    sys.s_dim = s_dim;
    sys.b_dim = b_dim;
    sys.m_dim = m_dim;

    for (int n = 0; n < n_targets; ++n) {
        TargetModel tm;
        tm.label = n;
        tm.f = rng.random_matrix(s_dim, s_dim, 1.0 / std::sqrt(static_cast<double>(s_dim)));
        const double rho = spectral_radius(tm.f, rng);
        if (rho > 1e-6) tm.f = tm.f * (0.97 / rho);
        tm.q = random_spd(rng, s_dim, 0.05);
        sys.dynamics.push_back(std::move(tm));

        MeasModel mm;
        mm.h_t = rng.random_matrix(m_dim, s_dim, 1.0);
        mm.h_b = rng.random_matrix(m_dim, b_dim, 1.0);
        mm.r = random_spd(rng, m_dim, 0.5);
        sys.meas.push_back(std::move(mm));
    }

    sys.true_bias = rng.normal_vec(b_dim);
    for (int n = 0; n < n_targets; ++n) sys.true_states.push_back(rng.normal_vec(s_dim));

    // Prior: b ~ (b0, P_b); per-target x ~ (x0_n, D_n + C_n P_b C_n^T) with
    // cross blocks P_tb_n = C_n P_b and P_tmn = C_m P_b C_n^T. The diagonal
    // boost in D_n keeps the joint positive definite with enough slack for
    // the negative-control perturbation.
    const Matrix p_b = random_spd(rng, b_dim, 1.0);
    const Vec b0 = sys.true_bias + rng.normal_vec(b_dim, 0.5);
    std::vector<Matrix> c(static_cast<size_t>(n_targets));
    std::vector<Matrix> d(static_cast<size_t>(n_targets));
    for (int n = 0; n < n_targets; ++n) {
        c[static_cast<size_t>(n)] = rng.random_matrix(s_dim, b_dim, 0.4);
        const Matrix cpc = symmetrize(c[static_cast<size_t>(n)] * p_b *
                                      c[static_cast<size_t>(n)].transpose());
        d[static_cast<size_t>(n)] = random_spd(rng, s_dim, 1.0 + cpc.trace());
    }

    sys.bank0.fused = {b0, p_b};
    CrossBlocks prior;
    prior.b = p_b;
    prior.t.resize(static_cast<size_t>(n_targets));
    Vec joint_mean(n_targets * s_dim + b_dim);
    std::vector<int> ids, dims;
    for (int n = 0; n < n_targets; ++n) {
        const Matrix p_tb = c[static_cast<size_t>(n)] * p_b;
        const Matrix p_t = symmetrize(d[static_cast<size_t>(n)] +
                                      c[static_cast<size_t>(n)] * p_b *
                                          c[static_cast<size_t>(n)].transpose());
        const Vec x0 = sys.true_states[static_cast<size_t>(n)] + rng.normal_vec(s_dim, 0.5);

        BranchBelief br;
        br.target_id = n;
        br.x_t = x0;
        br.b = b0;
        br.cov = {p_t, p_tb, p_b};
        sys.bank0.branches.emplace(n, std::move(br));

        for (int m = 0; m < n_targets; ++m)
            prior.t[static_cast<size_t>(n)].push_back(
                m == n ? p_t
                       : c[static_cast<size_t>(n)] * p_b * c[static_cast<size_t>(m)].transpose());
        prior.tb.push_back(p_tb);
        joint_mean.set_segment(n * s_dim, x0);
        ids.push_back(n);
        dims.push_back(s_dim);
    }
    joint_mean.set_segment(n_targets * s_dim, b0);

    sys.askf0.layout = AskfLayout::make(ids, dims, b_dim);
    sys.askf0.belief = GaussianBelief(joint_mean, assemble_cross_blocks(prior));
    Cholesky check(sys.askf0.belief.cov);  // construction must be PD
    (void)check;
    return sys;
}

void perturb_initial_cross(LinearSystem& sys, int target_idx, double rel) {
    auto it = sys.bank0.branches.find(target_idx);
    if (it == sys.bank0.branches.end()) throw UnknownTarget("perturb_initial_cross");
    it->second.cov.tb = it->second.cov.tb * (1.0 + rel);

    const auto& slot = sys.askf0.layout.slot(target_idx);
    Matrix p = sys.askf0.belief.cov;
    const Matrix tb = p.block(slot.offset, sys.askf0.layout.bias_offset, slot.s_dim,
                              sys.askf0.layout.bias_dim) *
                      (1.0 + rel);
    p.set_block(slot.offset, sys.askf0.layout.bias_offset, tb);
    p.set_block(sys.askf0.layout.bias_offset, slot.offset, tb.transpose());
    sys.askf0.belief = GaussianBelief(sys.askf0.belief.mean, p);
    Cholesky check(sys.askf0.belief.cov);  // must stay PD after perturbation
    (void)check;
}

double EquivalenceReport::max_overall() const {
    return std::max({max_mean_dev, max_pt_dev, max_ptb_dev, max_bias_dev, max_pfb_dev});
}

EquivalenceReport run_equivalence(const LinearSystem& sys, int steps, std::uint64_t meas_seed) {
    Rng rng(meas_seed, 0x9e3779b97f4a7c15ull);
    EquivalenceReport rep;

    std::vector<Vec> x_true = sys.true_states;
    FilterBank bank = sys.bank0;
    AskfState askf = sys.askf0;

    const auto aug_dyn = augment_dynamics(sys.dynamics, sys.b_dim);
    const auto aug_meas = augment_measurement(sys.meas);

    std::map<int, TargetModel> dyn_map;
    for (const auto& tm : sys.dynamics) dyn_map.emplace(tm.label, tm);

    // Lower Cholesky factors color the unit-normal draws.
    std::vector<Matrix> q_l, r_l;
    for (const auto& tm : sys.dynamics) q_l.push_back(Cholesky(tm.q).lower());
    for (const auto& mm : sys.meas) r_l.push_back(Cholesky(mm.r).lower());

    for (int k = 1; k <= steps; ++k) {
        // Truth propagation and measurement generation.
        std::map<int, MeasurementInput> meas_map;
        Vec z_all(sys.n_targets * sys.m_dim);
        for (int n = 0; n < sys.n_targets; ++n) {
            const auto& tm = sys.dynamics[static_cast<size_t>(n)];
            const auto& mm = sys.meas[static_cast<size_t>(n)];
            x_true[static_cast<size_t>(n)] = tm.f * x_true[static_cast<size_t>(n)] +
                                             q_l[static_cast<size_t>(n)] * rng.normal_vec(sys.s_dim);
            const Vec w = r_l[static_cast<size_t>(n)] * rng.normal_vec(sys.m_dim);
            const Vec z = mm.h_t * x_true[static_cast<size_t>(n)] + mm.h_b * sys.true_bias + w;
            z_all.set_segment(n * sys.m_dim, z);
            meas_map.emplace(n, MeasurementInput{z, mm, std::nullopt});
        }

        bank = bank_step(bank, meas_map, dyn_map);
        askf = askf_predict(askf, aug_dyn.f, aug_dyn.q);

        // Lemma quantities on the predicted joint covariance: the cross
        // structure survives prediction and the target-target blocks of the
        // predicted information matrix vanish.
        {
            const Matrix info = spd_inverse(askf.belief.cov);
            const double info_norm = info.frobenius_norm();
            for (int m = 0; m < sys.n_targets; ++m)
                for (int n = m + 1; n < sys.n_targets; ++n) {
                    const auto& sm = askf.layout.slot(m);
                    const auto& sn = askf.layout.slot(n);
                    const double off =
                        info.block(sm.offset, sn.offset, sm.s_dim, sn.s_dim).frobenius_norm();
                    rep.cross_info_residual = std::max(rep.cross_info_residual, off / info_norm);
                }
            const CrossBlocks pred = extract_cross_blocks(askf);
            const Matrix pb_inv = spd_inverse(pred.b);
            for (int m = 0; m < sys.n_targets; ++m)
                for (int n = m + 1; n < sys.n_targets; ++n) {
                    const Matrix implied = pred.tb[static_cast<size_t>(m)] * pb_inv *
                                           pred.tb[static_cast<size_t>(n)].transpose();
                    const Matrix& actual = pred.t[static_cast<size_t>(m)][static_cast<size_t>(n)];
                    const double resid =
                        (actual - implied).frobenius_norm() / (actual.frobenius_norm() + 1e-4);
                    rep.lemma_residual = std::max(rep.lemma_residual, resid);
                }
        }

        askf = askf_update_gain(askf, z_all, aug_meas.h, aug_meas.r);

        // Posterior lemma identity.
        {
            const CrossBlocks blocks = extract_cross_blocks(askf);
            const Matrix pb_inv = spd_inverse(blocks.b);
            for (int m = 0; m < sys.n_targets; ++m)
                for (int n = m + 1; n < sys.n_targets; ++n) {
                    const Matrix implied = blocks.tb[static_cast<size_t>(m)] * pb_inv *
                                           blocks.tb[static_cast<size_t>(n)].transpose();
                    const Matrix& actual = blocks.t[static_cast<size_t>(m)][static_cast<size_t>(n)];
                    // Normalized so that residual <= 1e-8 is equivalent to
                    // ||diff|| <= 1e-8 ||actual|| + 1e-12.
                    const double resid =
                        (actual - implied).frobenius_norm() / (actual.frobenius_norm() + 1e-4);
                    rep.lemma_residual = std::max(rep.lemma_residual, resid);
                }
        }

        // Block-by-block deviation between the two filters.
        const CrossBlocks blocks = extract_cross_blocks(askf);
        double step_worst = 0.0;
        for (int n = 0; n < sys.n_targets; ++n) {
            const BranchBelief& br = bank.branches.at(n);
            const double dm = rel_deviation(br.x_t, askf_target_mean(askf, n));
            const double dpt = rel_deviation(br.cov.t, blocks.t[static_cast<size_t>(n)][static_cast<size_t>(n)]);
            const double dptb = rel_deviation(br.cov.tb, blocks.tb[static_cast<size_t>(n)]);
            rep.max_mean_dev = std::max(rep.max_mean_dev, dm);
            rep.max_pt_dev = std::max(rep.max_pt_dev, dpt);
            rep.max_ptb_dev = std::max(rep.max_ptb_dev, dptb);
            step_worst = std::max({step_worst, dm, dpt, dptb});
        }
        const double db = rel_deviation(bank.fused.b_f, askf_bias_mean(askf));
        const double dpb = rel_deviation(bank.fused.p_fb, blocks.b);
        rep.max_bias_dev = std::max(rep.max_bias_dev, db);
        rep.max_pfb_dev = std::max(rep.max_pfb_dev, dpb);
        step_worst = std::max({step_worst, db, dpb});
        if (step_worst >= rep.max_overall()) rep.worst_step = k;
    }
    return rep;
}

}  // namespace debiaskf
