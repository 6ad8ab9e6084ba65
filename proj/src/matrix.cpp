#include "neumann/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "neumann/error.hpp"

namespace neumann {

namespace {

constexpr std::size_t kBlockI = 32;
constexpr std::size_t kBlockK = 128;
constexpr std::size_t kBlockJ = 512;

void check_product(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("multiply: inner dimensions differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + ")");
}

void reference_kernel(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
}

// One block of rows [i0, i1): i-k-j order with k blocks ascending.
void blocked_rows(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c, std::size_t i0,
                  std::size_t i1) {
  const std::size_t m = a.cols(), p = b.cols();
  for (std::size_t i = i0; i < i1; ++i) std::fill_n(c.row(i), p, 0.0);
  for (std::size_t k0 = 0; k0 < m; k0 += kBlockK) {
    const std::size_t k1 = std::min(m, k0 + kBlockK);
    for (std::size_t j0 = 0; j0 < p; j0 += kBlockJ) {
      const std::size_t j1 = std::min(p, j0 + kBlockJ);
      for (std::size_t i = i0; i < i1; ++i) {
        double* __restrict ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t k = k0; k < k1; ++k) {
          const double aik = ai[k];
          const double* __restrict bk = b.row(k);
          for (std::size_t j = j0; j < j1; ++j) ci[j] += aik * bk[j];
        }
      }
    }
  }
}

void blocked_kernel(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  for (std::size_t i0 = 0; i0 < a.rows(); i0 += kBlockI)
    blocked_rows(a, b, c, i0, std::min(a.rows(), i0 + kBlockI));
}

void parallel_kernel(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  const auto blocks = static_cast<std::int64_t>((a.rows() + kBlockI - 1) / kBlockI);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    const std::size_t i0 = static_cast<std::size_t>(blk) * kBlockI;
    blocked_rows(a, b, c, i0, std::min(a.rows(), i0 + kBlockI));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Reference: return "reference";
    case Kernel::Blocked: return "blocked";
    case Kernel::Parallel: return "parallel";
  }
  return "?";
}

Kernel parse_kernel(std::string_view s) {
  if (s == "reference") return Kernel::Reference;
  if (s == "blocked") return Kernel::Blocked;
  if (s == "parallel") return Kernel::Parallel;
  throw ParseError("unknown kernel '" + std::string(s) + "'");
}

void multiply_into(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c, Kernel kernel) {
  check_product(a, b);
  if (c.rows() != a.rows() || c.cols() != b.cols()) c = DenseMatrix(a.rows(), b.cols());
  switch (kernel) {
    case Kernel::Reference: reference_kernel(a, b, c); break;
    case Kernel::Blocked: blocked_kernel(a, b, c); break;
    case Kernel::Parallel: parallel_kernel(a, b, c); break;
  }
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, Kernel kernel) {
  DenseMatrix c(a.rows(), b.cols());
  multiply_into(a, b, c, kernel);
  return c;
}

double relative_frobenius_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("relative_frobenius_diff: shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    num += d * d;
    den += b.data()[i] * b.data()[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace neumann
