#include "debiaskf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace debiaskf {

Matrix symmetrize(const Matrix& p) {
    if (p.rows() != p.cols()) throw NonSquare("symmetrize: " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
    Matrix r(p.rows(), p.cols());
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j) r(i, j) = 0.5 * (p(i, j) + p(j, i));
    return r;
}

Cholesky::Cholesky(const Matrix& p) : l_(p.rows(), p.cols()) {
    if (p.rows() != p.cols()) throw NonSquare("cholesky of non-square matrix");
    const int n = p.rows();
    for (int j = 0; j < n; ++j) {
        double d = p(j, j);
        for (int k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            throw NotSPD("cholesky pivot " + std::to_string(j) + " = " + std::to_string(d));
        const double ljj = std::sqrt(d);
        l_(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = p(i, j);
            for (int k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
            l_(i, j) = s / ljj;
        }
    }
}

Vec Cholesky::solve(const Vec& b) const {
    const int n = dim();
    if (b.size() != n) throw DimensionMismatch("cholesky solve rhs");
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l_(i, k) * y[k];
        y[i] = s / l_(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n; ++k) s -= l_(k, i) * y[k];
        y[i] = s / l_(i, i);
    }
    return y;
}

Matrix Cholesky::solve(const Matrix& b) const {
    if (b.rows() != dim()) throw DimensionMismatch("cholesky solve rhs rows");
    Matrix x(b.rows(), b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        Vec col = b.col(j);
        Vec sol = solve(col);
        for (int i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

Matrix Cholesky::inverse() const { return symmetrize(solve(Matrix::identity(dim()))); }

Matrix spd_solve(const Matrix& p, const Matrix& b) { return Cholesky(p).solve(b); }
Vec spd_solve(const Matrix& p, const Vec& b) { return Cholesky(p).solve(b); }
Matrix spd_inverse(const Matrix& p) { return Cholesky(p).inverse(); }

PivotedLU::PivotedLU(const Matrix& a) : lu_(a), piv_(static_cast<size_t>(a.rows())) {
    if (a.rows() != a.cols()) throw NonSquare("LU of non-square matrix");
    norm1_in_ = a.norm1();
    const int n = a.rows();
    for (int i = 0; i < n; ++i) piv_[static_cast<size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::fabs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best))
            throw SingularBlock("LU pivot " + std::to_string(k) + " is zero");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(piv_[static_cast<size_t>(k)], piv_[static_cast<size_t>(p)]);
        }
        const double pivot = lu_(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / pivot;
            lu_(i, k) = f;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Vec PivotedLU::solve(const Vec& b) const {
    const int n = lu_.rows();
    if (b.size() != n) throw DimensionMismatch("LU solve rhs");
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        double s = b[piv_[static_cast<size_t>(i)]];
        for (int k = 0; k < i; ++k) s -= lu_(i, k) * y[k];
        y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n; ++k) s -= lu_(i, k) * y[k];
        y[i] = s / lu_(i, i);
    }
    return y;
}

Matrix PivotedLU::solve(const Matrix& b) const {
    if (b.rows() != lu_.rows()) throw DimensionMismatch("LU solve rhs rows");
    Matrix x(b.rows(), b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        Vec sol = solve(b.col(j));
        for (int i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

Matrix PivotedLU::inverse() const { return solve(Matrix::identity(lu_.rows())); }

double PivotedLU::cond1_estimate() const { return norm1_in_ * inverse().norm1(); }

namespace {
Matrix checked_inverse(const Matrix& m, const char* what) {
    PivotedLU lu(m);
    const double cond = lu.cond1_estimate();
    if (!(cond < kCondLimit))
        throw SingularBlock(std::string(what) + " condition estimate " + std::to_string(cond));
    return lu.inverse();
}
}  // namespace

Matrix block_inverse(const Matrix& a, const Matrix& u, const Matrix& v, const Matrix& d) {
    const int s = a.rows();
    const int b = d.rows();
    if (a.cols() != s || d.cols() != b || u.rows() != s || u.cols() != b || v.rows() != b || v.cols() != s)
        throw DimensionMismatch("block_inverse: inconsistent partition");
    const Matrix d_inv = checked_inverse(d, "D block");
    const Matrix schur = a - u * d_inv * v;
    const Matrix schur_inv = checked_inverse(schur, "Schur complement");

    Matrix out(s + b, s + b);
    out.set_block(0, 0, schur_inv);
    const Matrix tr = -(schur_inv * u * d_inv);
    out.set_block(0, s, tr);
    out.set_block(s, 0, -(d_inv * v * schur_inv));
    out.set_block(s, s, d_inv + d_inv * v * schur_inv * u * d_inv);
    return out;
}

std::vector<double> sym_eigenvalues(const Matrix& s) {
    if (s.rows() != s.cols()) throw NonSquare("sym_eigenvalues");
    Matrix a = symmetrize(s);
    const int n = a.rows();
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-300) break;
        const double scale = a.max_abs();
        if (off < (scale * scale) * 1e-30) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) <= scale * 1e-18) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

double rel_deviation(const Matrix& a, const Matrix& b, double floor) {
    return (a - b).frobenius_norm() / (std::max(a.frobenius_norm(), b.frobenius_norm()) + floor);
}

double rel_deviation(const Vec& a, const Vec& b, double floor) {
    return (a - b).norm() / (std::max(a.norm(), b.norm()) + floor);
}

}  // namespace debiaskf
