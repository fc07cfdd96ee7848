#pragma once

// Factorizations and the partitioned inversion shared by every filter.
// Inverses go through factorized solves; an explicit inverse is formed only
// where the algorithms reuse it. Numerical singularity is a hard error,
// never a silent regularization.

#include <vector>

#include "debiaskf/matrix.hpp"

namespace debiaskf {

// Condition-estimate ceiling before an inversion is declared singular.
inline constexpr double kCondLimit = 1e12;

// (P + P^T)/2. Throws NonSquare.
Matrix symmetrize(const Matrix& p);

// Lower-triangular Cholesky factor of an SPD matrix. Throws NotSPD when a
// pivot is non-positive or non-finite (covariance collapse).
class Cholesky {
public:
    explicit Cholesky(const Matrix& p);

    Vec solve(const Vec& b) const;
    Matrix solve(const Matrix& b) const;
    Matrix inverse() const;  // symmetrized
    const Matrix& lower() const { return l_; }
    int dim() const { return l_.rows(); }

private:
    Matrix l_;
};

// X with P X = B for SPD P. Throws NotSPD.
Matrix spd_solve(const Matrix& p, const Matrix& b);
Vec spd_solve(const Matrix& p, const Vec& b);
Matrix spd_inverse(const Matrix& p);

// LU with partial pivoting for the general (possibly unsymmetric) blocks of
// the partitioned inversion. cond1_estimate() is ||A||_1 * ||A^-1||_1.
class PivotedLU {
public:
    explicit PivotedLU(const Matrix& a);  // SingularBlock on zero pivot

    Vec solve(const Vec& b) const;
    Matrix solve(const Matrix& b) const;
    Matrix inverse() const;
    double cond1_estimate() const;

private:
    Matrix lu_;
    std::vector<int> piv_;
    double norm1_in_ = 0.0;
};

// Inverse of [[A, U], [V, D]] assembled blockwise from D^-1 and the Schur
// complement (A - U D^-1 V)^-1. Throws SingularBlock when D or the Schur
// complement has condition estimate above kCondLimit.
Matrix block_inverse(const Matrix& a, const Matrix& u, const Matrix& v, const Matrix& d);

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
std::vector<double> sym_eigenvalues(const Matrix& s);

// max ||A-B||-style relative deviation used throughout the test harnesses:
// ||a - b||_F / (max(||a||_F, ||b||_F) + floor).
double rel_deviation(const Matrix& a, const Matrix& b, double floor = 1e-300);
double rel_deviation(const Vec& a, const Vec& b, double floor = 1e-300);

}  // namespace debiaskf
