#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace netrisk {

// Minimal dense row-major matrix. The library works at desk scale
// (n up to a few thousand); no sparse structure is attempted.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix operator*(const Matrix& rhs) const {
    assert(cols_ == rhs.rows_);
    Matrix out(rows_, rhs.cols_);
    for (int r = 0; r < rows_; ++r) {
      for (int k = 0; k < cols_; ++k) {
        const double a = (*this)(r, k);
        if (a == 0.0) continue;
        for (int c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
      }
    }
    return out;
  }

  std::vector<double> operator*(const std::vector<double>& v) const {
    assert(static_cast<int>(v.size()) == cols_);
    std::vector<double> out(rows_, 0.0);
    for (int r = 0; r < rows_; ++r) {
      double acc = 0.0;
      for (int c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
      out[r] = acc;
    }
    return out;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  double trace() const {
    double s = 0.0;
    for (int i = 0; i < rows_ && i < cols_; ++i) s += (*this)(i, i);
    return s;
  }

  std::vector<double> column(int c) const {
    std::vector<double> out(rows_);
    for (int r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  const std::vector<double>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace netrisk
