#pragma once

// Small dense row-major matrices and vectors. Arithmetic routes through the
// kernel layer. Everything is value-semantic; nothing here mutates shared
// state, so instances are safe to read from any number of threads.

#include <initializer_list>
#include <vector>

#include "debiaskf/errors.hpp"

namespace debiaskf {

class Vec {
public:
    Vec() = default;
    explicit Vec(int n) : d_(static_cast<size_t>(check_len(n)), 0.0) {}
    Vec(std::initializer_list<double> xs) : d_(xs) {}

    static Vec zero(int n) { return Vec(n); }

    int size() const { return static_cast<int>(d_.size()); }
    double& operator[](int i) { return d_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return d_[static_cast<size_t>(i)]; }
    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }
    auto begin() { return d_.begin(); }
    auto end() { return d_.end(); }
    auto begin() const { return d_.begin(); }
    auto end() const { return d_.end(); }

    Vec operator+(const Vec& o) const;
    Vec operator-(const Vec& o) const;
    Vec operator*(double s) const;
    Vec operator-() const { return *this * -1.0; }

    double dot(const Vec& o) const;
    double norm() const;
    double max_abs() const;

    Vec segment(int off, int len) const;
    void set_segment(int off, const Vec& v);

    friend bool operator==(const Vec& a, const Vec& b) { return a.d_ == b.d_; }

private:
    static int check_len(int n) {
        if (n < 0) throw DimensionMismatch("negative vector length");
        return n;
    }
    std::vector<double> d_;
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }
    static Matrix identity(int n);
    static Matrix diagonal(const Vec& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }
    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }

    Matrix operator*(const Matrix& o) const;
    Vec operator*(const Vec& v) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(double s) const;
    Matrix operator-() const { return *this * -1.0; }

    Matrix transpose() const;
    Matrix block(int i0, int j0, int r, int c) const;
    void set_block(int i0, int j0, const Matrix& m);
    Vec row(int i) const;
    Vec col(int j) const;
    Vec diagonal() const;

    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    double norm1() const;  // max absolute column sum

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> d_;
};

inline Matrix operator*(double s, const Matrix& m) { return m * s; }

// A * B^T and A^T * B without materializing the transpose.
Matrix mul_abt(const Matrix& a, const Matrix& b);
Matrix mul_atb(const Matrix& a, const Matrix& b);

// Outer product a b^T.
Matrix outer(const Vec& a, const Vec& b);

// blockdiag{ms...}; empty list gives a 0x0 matrix.
Matrix block_diag(const std::vector<Matrix>& ms);

}  // namespace debiaskf
