#pragma once

#include <cstdint>
#include <random>

#include "debiaskf/matrix.hpp"

namespace debiaskf {

// Thin deterministic wrapper; every Monte-Carlo run owns one, derived from
// (seed, run index), so results do not depend on scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        gen_.seed(seq);
    }

    double normal() { return normal_(gen_); }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
    int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen_); }

    Vec normal_vec(int n, double sigma = 1.0) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = sigma * normal();
        return v;
    }

    Matrix random_matrix(int r, int c, double scale = 1.0) {
        Matrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = scale * normal();
        return m;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace debiaskf
