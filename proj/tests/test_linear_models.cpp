#include <doctest.h>

#include "debiaskf/linalg.hpp"
#include "debiaskf/linear_models.hpp"
#include "debiaskf/rng.hpp"

using namespace debiaskf;

TEST_CASE("augment_dynamics basic assemblies") {
    TargetModel t1{Matrix::identity(2), Matrix{{0.3, 0.0}, {0.0, 0.3}}, 0};
    const auto aug = augment_dynamics({t1}, 1);
    CHECK(aug.f == Matrix::identity(3));
    CHECK(aug.q.block(0, 0, 2, 2) == t1.q);
    CHECK(aug.q(2, 2) == 0.0);

    TargetModel a{Matrix{{2.0}}, Matrix{{0.0}}, 0};
    TargetModel b{Matrix{{3.0}}, Matrix{{0.0}}, 1};
    const auto two = augment_dynamics({a, b}, 1);
    CHECK(two.f == Matrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 1}});
}

TEST_CASE("augment_dynamics sizes NS+B") {
    Rng rng(3);
    std::vector<TargetModel> models;
    for (int n = 0; n < 3; ++n) {
        const Matrix e = rng.random_matrix(6, 6);
        models.push_back({rng.random_matrix(6, 6), symmetrize(mul_abt(e, e)), n});
    }
    const auto aug = augment_dynamics(models, 5);
    CHECK(aug.f.rows() == 23);
    CHECK(aug.f.block(18, 18, 5, 5) == Matrix::identity(5));
    // bias rows/cols of Q are exactly zero
    for (int i = 18; i < 23; ++i)
        for (int j = 0; j < 23; ++j) {
            CHECK(aug.q(i, j) == 0.0);
            CHECK(aug.q(j, i) == 0.0);
        }
}

TEST_CASE("augment_measurement structure") {
    MeasModel single{Matrix{{1.0, 0.5}}, Matrix{{1.0}}, Matrix{{1.0}}};
    const auto one = augment_measurement({single});
    CHECK(one.h == Matrix{{1.0, 0.5, 1.0}});

    MeasModel s1{Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{1.0}}};
    MeasModel s2{Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{1.0}}};
    const auto two = augment_measurement({s1, s2});
    CHECK(two.h == Matrix{{1, 0, 1}, {0, 1, 1}});
}

TEST_CASE("augment_measurement zero pattern on a large shape") {
    Rng rng(5);
    std::vector<MeasModel> models;
    for (int n = 0; n < 3; ++n) {
        const Matrix e = rng.random_matrix(10, 10);
        models.push_back({rng.random_matrix(10, 6), rng.random_matrix(10, 5),
                          symmetrize(mul_abt(e, e) + Matrix::identity(10))});
    }
    const auto aug = augment_measurement(models);
    CHECK(aug.h.rows() == 30);
    CHECK(aug.h.cols() == 23);
    // Naive reconstruction: target blocks on the diagonal, H_b in the last
    // block column, zero elsewhere.
    for (int n = 0; n < 3; ++n)
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 23; ++j) {
                const double got = aug.h(n * 10 + i, j);
                double want = 0.0;
                if (j >= n * 6 && j < (n + 1) * 6) want = models[static_cast<size_t>(n)].h_t(i, j - n * 6);
                if (j >= 18) want = models[static_cast<size_t>(n)].h_b(i, j - 18);
                CHECK(got == want);
            }
    CHECK_THROWS_AS(augment_measurement({models[0], MeasModel{rng.random_matrix(4, 6),
                                                              rng.random_matrix(4, 2),
                                                              Matrix::identity(4)}}),
                    DimensionMismatch);
}

TEST_CASE("augmented and per-target simulation produce identical sequences") {
    // Same noise draws fed through both forms of Eqs of motion/measurement.
    Rng rng(7);
    const int s = 2, b = 1, m = 2, n_targets = 2, steps = 10;
    std::vector<TargetModel> dyn;
    std::vector<MeasModel> meas;
    for (int n = 0; n < n_targets; ++n) {
        dyn.push_back({rng.random_matrix(s, s, 0.4), Matrix::identity(s) * 0.1, n});
        meas.push_back({rng.random_matrix(m, s), rng.random_matrix(m, b), Matrix::identity(m)});
    }
    const auto aug_d = augment_dynamics(dyn, b);
    const auto aug_m = augment_measurement(meas);
    const Vec bias = rng.normal_vec(b);

    std::vector<Vec> x_sep{rng.normal_vec(s), rng.normal_vec(s)};
    Vec x_aug(n_targets * s + b);
    for (int n = 0; n < n_targets; ++n) x_aug.set_segment(n * s, x_sep[static_cast<size_t>(n)]);
    x_aug.set_segment(n_targets * s, bias);

    for (int k = 0; k < steps; ++k) {
        std::vector<Vec> process(static_cast<size_t>(n_targets));
        std::vector<Vec> meas_noise(static_cast<size_t>(n_targets));
        for (int n = 0; n < n_targets; ++n) {
            process[static_cast<size_t>(n)] = rng.normal_vec(s, 0.3);
            meas_noise[static_cast<size_t>(n)] = rng.normal_vec(m, 0.5);
        }
        Vec v_aug(n_targets * s + b);
        for (int n = 0; n < n_targets; ++n) v_aug.set_segment(n * s, process[static_cast<size_t>(n)]);
        x_aug = aug_d.f * x_aug + v_aug;
        Vec z_aug = aug_m.h * x_aug;
        for (int n = 0; n < n_targets; ++n) {
            x_sep[static_cast<size_t>(n)] =
                dyn[static_cast<size_t>(n)].f * x_sep[static_cast<size_t>(n)] + process[static_cast<size_t>(n)];
            const Vec z_sep = meas[static_cast<size_t>(n)].h_t * x_sep[static_cast<size_t>(n)] +
                              meas[static_cast<size_t>(n)].h_b * bias + meas_noise[static_cast<size_t>(n)];
            Vec z_aug_n = z_aug.segment(n * m, m) + meas_noise[static_cast<size_t>(n)];
            CHECK(z_sep == z_aug_n);
        }
    }
}
