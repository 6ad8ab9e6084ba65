#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace neumann {

/// Row-major dense matrix of doubles. A default-constructed matrix is 0x0
/// and holds no storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  double* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

  DenseMatrix transpose() const;
  double frobenius_norm() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Kernel {
  Reference,  // triple loop, serial
  Blocked,    // cache-blocked, serial
  Parallel,   // cache-blocked, OpenMP over row blocks
};

std::string_view kernel_name(Kernel k);
Kernel parse_kernel(std::string_view s);

/// C = A * B. Every kernel accumulates each entry over k in ascending order
/// from zero, so all three produce bitwise identical results.
void multiply_into(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c, Kernel kernel);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, Kernel kernel = Kernel::Blocked);

double relative_frobenius_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace neumann
