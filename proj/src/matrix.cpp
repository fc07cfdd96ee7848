#include "debiaskf/matrix.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "debiaskf/kernels.hpp"

namespace debiaskf {

namespace {
[[noreturn]] void dim_fail(const char* op, int ar, int ac, int br, int bc) {
    throw DimensionMismatch(std::string(op) + ": " + std::to_string(ar) + "x" + std::to_string(ac) +
                            " vs " + std::to_string(br) + "x" + std::to_string(bc));
}
}  // namespace

Vec Vec::operator+(const Vec& o) const {
    if (size() != o.size()) dim_fail("vec add", size(), 1, o.size(), 1);
    Vec r(size());
    kernels::add(data(), o.data(), r.data(), size());
    return r;
}

Vec Vec::operator-(const Vec& o) const {
    if (size() != o.size()) dim_fail("vec sub", size(), 1, o.size(), 1);
    Vec r(size());
    kernels::sub(data(), o.data(), r.data(), size());
    return r;
}

Vec Vec::operator*(double s) const {
    Vec r(size());
    kernels::scale(data(), s, r.data(), size());
    return r;
}

double Vec::dot(const Vec& o) const {
    if (size() != o.size()) dim_fail("dot", size(), 1, o.size(), 1);
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += d_[static_cast<size_t>(i)] * o[i];
    return s;
}

double Vec::norm() const { return std::sqrt(dot(*this)); }

double Vec::max_abs() const {
    double m = 0.0;
    for (double x : d_) m = std::max(m, std::fabs(x));
    return m;
}

Vec Vec::segment(int off, int len) const {
    if (off < 0 || len < 0 || off + len > size()) dim_fail("segment", off, len, size(), 1);
    Vec r(len);
    std::memcpy(r.data(), data() + off, sizeof(double) * static_cast<size_t>(len));
    return r;
}

void Vec::set_segment(int off, const Vec& v) {
    if (off < 0 || off + v.size() > size()) dim_fail("set_segment", off, v.size(), size(), 1);
    std::memcpy(data() + off, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
}

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
    d_.assign(static_cast<size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    d_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw DimensionMismatch("ragged initializer");
        d_.insert(d_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vec& d) {
    Matrix m(d.size(), d.size());
    for (int i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) dim_fail("matmul", rows_, cols_, o.rows_, o.cols_);
    Matrix r(rows_, o.cols_);
    kernels::gemm_nn(data(), o.data(), r.data(), rows_, cols_, o.cols_);
    return r;
}

Vec Matrix::operator*(const Vec& v) const {
    if (cols_ != v.size()) dim_fail("matvec", rows_, cols_, v.size(), 1);
    Vec r(rows_);
    kernels::gemm_nn(data(), v.data(), r.data(), rows_, cols_, 1);
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) dim_fail("mat add", rows_, cols_, o.rows_, o.cols_);
    Matrix r(rows_, cols_);
    kernels::add(data(), o.data(), r.data(), rows_ * cols_);
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) dim_fail("mat sub", rows_, cols_, o.rows_, o.cols_);
    Matrix r(rows_, cols_);
    kernels::sub(data(), o.data(), r.data(), rows_ * cols_);
    return r;
}

Matrix Matrix::operator*(double s) const {
    Matrix r(rows_, cols_);
    kernels::scale(data(), s, r.data(), rows_ * cols_);
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::block(int i0, int j0, int r, int c) const {
    if (i0 < 0 || j0 < 0 || r < 0 || c < 0 || i0 + r > rows_ || j0 + c > cols_)
        dim_fail("block", i0 + r, j0 + c, rows_, cols_);
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        std::memcpy(&m(i, 0), data() + static_cast<size_t>(i0 + i) * cols_ + j0,
                    sizeof(double) * static_cast<size_t>(c));
    return m;
}

void Matrix::set_block(int i0, int j0, const Matrix& m) {
    if (i0 < 0 || j0 < 0 || i0 + m.rows_ > rows_ || j0 + m.cols_ > cols_)
        dim_fail("set_block", i0 + m.rows_, j0 + m.cols_, rows_, cols_);
    for (int i = 0; i < m.rows_; ++i)
        std::memcpy(data() + static_cast<size_t>(i0 + i) * cols_ + j0, m.data() + static_cast<size_t>(i) * m.cols_,
                    sizeof(double) * static_cast<size_t>(m.cols_));
}

Vec Matrix::row(int i) const {
    Vec r(cols_);
    std::memcpy(r.data(), data() + static_cast<size_t>(i) * cols_, sizeof(double) * static_cast<size_t>(cols_));
    return r;
}

Vec Matrix::col(int j) const {
    Vec c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Vec Matrix::diagonal() const {
    const int n = std::min(rows_, cols_);
    Vec d(n);
    for (int i = 0; i < n; ++i) d[i] = (*this)(i, i);
    return d;
}

double Matrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : d_) s += x * x;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : d_) m = std::max(m, std::fabs(x));
    return m;
}

double Matrix::norm1() const {
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows_; ++i) s += std::fabs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

Matrix mul_abt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw DimensionMismatch("mul_abt: inner dims");
    Matrix r(a.rows(), b.rows());
    kernels::gemm_nt(a.data(), b.data(), r.data(), a.rows(), a.cols(), b.rows());
    return r;
}

Matrix mul_atb(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("mul_atb: inner dims");
    Matrix r(a.cols(), b.cols());
    kernels::gemm_tn(a.data(), b.data(), r.data(), a.rows(), a.cols(), b.cols());
    return r;
}

Matrix outer(const Vec& a, const Vec& b) {
    Matrix r(a.size(), b.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j) r(i, j) = a[i] * b[j];
    return r;
}

Matrix block_diag(const std::vector<Matrix>& ms) {
    int r = 0, c = 0;
    for (const auto& m : ms) {
        r += m.rows();
        c += m.cols();
    }
    Matrix out(r, c);
    int i0 = 0, j0 = 0;
    for (const auto& m : ms) {
        out.set_block(i0, j0, m);
        i0 += m.rows();
        j0 += m.cols();
    }
    return out;
}

}  // namespace debiaskf
