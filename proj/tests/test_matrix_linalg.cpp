#include <doctest.h>

#include "debiaskf/linalg.hpp"
#include "debiaskf/rng.hpp"
#include "oracles.hpp"

using namespace debiaskf;

namespace {
Matrix random_spd(Rng& rng, int n) {
    const Matrix e = rng.random_matrix(n, n);
    return symmetrize(mul_abt(e, e) + Matrix::identity(n) * 0.5);
}
}  // namespace

TEST_CASE("symmetrize") {
    CHECK(symmetrize(Matrix::identity(3)) == Matrix::identity(3));
    const Matrix m{{1, 2}, {0, 1}};
    const Matrix want{{1, 1}, {1, 1}};
    CHECK(symmetrize(m) == want);
    // fixed point on symmetric input, and idempotent
    Rng rng(5);
    const Matrix s = random_spd(rng, 6);
    CHECK(symmetrize(s) == s);
    const Matrix sym = symmetrize(rng.random_matrix(6, 6));
    CHECK(symmetrize(sym) == sym);
    CHECK_THROWS_AS(symmetrize(Matrix(2, 3)), NonSquare);
}

TEST_CASE("spd_solve against identity and scalar cases") {
    Rng rng(7);
    const Matrix b = rng.random_matrix(4, 3);
    CHECK(rel_deviation(spd_solve(Matrix::identity(4), b), b) < 1e-15);
    const Matrix p{{4.0}};
    const Matrix rhs{{2.0}};
    CHECK(spd_solve(p, rhs)(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("spd_solve matches Gauss-Jordan oracle and meets residual bound") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(1, 12);
        const Matrix p = random_spd(rng, n);
        const Matrix b = rng.random_matrix(n, rng.uniform_int(1, 4));
        const Matrix x = spd_solve(p, b);
        CHECK(rel_deviation(x, oracle::naive_matmul(oracle::gauss_jordan_inverse(p), b)) < 1e-9);
        CHECK((oracle::naive_matmul(p, x) - b).frobenius_norm() <= 1e-9 * b.frobenius_norm() + 1e-12);
        // P X = P  =>  X = I
        CHECK(rel_deviation(spd_solve(p, p), Matrix::identity(n)) < 1e-9);
    }
}

TEST_CASE("cholesky rejects non-SPD input") {
    CHECK_THROWS_AS(spd_solve(Matrix{{1, 0}, {0, -1}}, Matrix::identity(2)), NotSPD);
    CHECK_THROWS_AS(spd_solve(Matrix{{0}}, Matrix{{1}}), NotSPD);
}

TEST_CASE("block_inverse identity case") {
    const Matrix one{{1.0}};
    const Matrix zero{{0.0}};
    CHECK(rel_deviation(block_inverse(one, zero, zero, one), Matrix::identity(2)) < 1e-15);
}

TEST_CASE("block_inverse 2x2 against adjugate") {
    // [[2,1],[1,2]]^-1 = (1/3) [[2,-1],[-1,2]]
    const Matrix got = block_inverse(Matrix{{2.0}}, Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{2.0}});
    const Matrix want{{2.0 / 3.0, -1.0 / 3.0}, {-1.0 / 3.0, 2.0 / 3.0}};
    CHECK(rel_deviation(got, want) < 1e-15);
}

TEST_CASE("block_inverse matches Gauss-Jordan oracle and inverts") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const int s = rng.uniform_int(1, 5), b = rng.uniform_int(1, 4);
        const Matrix full = random_spd(rng, s + b);
        const Matrix a = full.block(0, 0, s, s);
        const Matrix u = full.block(0, s, s, b);
        const Matrix v = full.block(s, 0, b, s);
        const Matrix d = full.block(s, s, b, b);
        const Matrix inv = block_inverse(a, u, v, d);
        CHECK(rel_deviation(inv, oracle::gauss_jordan_inverse(full)) < 1e-10);
        CHECK(rel_deviation(oracle::naive_matmul(inv, full), Matrix::identity(s + b)) < 1e-10);
    }
}

TEST_CASE("block_inverse flags singular blocks") {
    const Matrix ok{{1.0}};
    const Matrix zero{{0.0}};
    CHECK_THROWS_AS(block_inverse(ok, zero, zero, zero), SingularBlock);
    // Schur complement A - U D^-1 V = 0
    CHECK_THROWS_AS(block_inverse(Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{1.0}}),
                    SingularBlock);
}

TEST_CASE("jacobi eigenvalues on known spectra") {
    const auto ev = sym_eigenvalues(Matrix{{2, 1}, {1, 2}});
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
    Rng rng(17);
    const Matrix p = random_spd(rng, 8);
    const auto spd_ev = sym_eigenvalues(p);
    CHECK(spd_ev.front() > 0.0);
    double tr = 0.0;
    for (double v : spd_ev) tr += v;
    CHECK(tr == doctest::Approx(p.trace()).epsilon(1e-10));
}

TEST_CASE("dimension mismatches throw") {
    CHECK_THROWS_AS(Matrix(2, 3) * Matrix(2, 3), DimensionMismatch);
    CHECK_THROWS_AS(Matrix(2, 3) + Matrix(3, 2), DimensionMismatch);
    CHECK_THROWS_AS((Vec{1.0, 2.0} + Vec{1.0}), DimensionMismatch);
}

TEST_CASE("condition estimate gate on the partitioned inversion") {
    // cond ~ 1e13: rejected; cond ~ 1e10: accepted
    const Matrix ill = Matrix::diagonal(Vec{1.0, 1e-13});
    const Matrix ok = Matrix::diagonal(Vec{1.0, 1e-10});
    const Matrix a = Matrix::identity(1);
    const Matrix u = Matrix::zero(1, 2), v = Matrix::zero(2, 1);
    CHECK_THROWS_AS(block_inverse(a, u, v, ill), SingularBlock);
    const Matrix inv = block_inverse(a, u, v, ok);
    CHECK(inv(2, 2) == doctest::Approx(1e10));
}
