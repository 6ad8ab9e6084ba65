#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "neumann/matrix.hpp"
#include "neumann/slp.hpp"

namespace neumann {

/// Matrix ring for SLP evaluation with an instrumented product counter.
struct MatrixRing {
  using value_type = DenseMatrix;

  Kernel kernel = Kernel::Blocked;
  std::uint64_t muls = 0;

  DenseMatrix one(const DenseMatrix& like) const { return DenseMatrix::identity(like.rows()); }
  DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) const { return a + b; }
  DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) const { return a - b; }
  DenseMatrix mul(const DenseMatrix& a, const DenseMatrix& b) {
    ++muls;
    return multiply(a, b, kernel);
  }
};

struct SpectralEstimate {
  double value = 0;
  unsigned iterations = 0;
  bool low_confidence = false;  // power iteration did not settle within max_iters
};

/// Power iteration on B from the normalized all-ones vector.
SpectralEstimate spectral_radius_estimate(const DenseMatrix& b, unsigned max_iters = 1000,
                                          double tol = 1e-10);

/// ||I - A * A_hat||_F
double residual(const DenseMatrix& a, const DenseMatrix& a_hat, Kernel kernel = Kernel::Blocked);

/// Q * D * Q^T with D uniform in [0.1, 1.9] and Q orthogonal, both drawn from
/// a mt19937_64 seeded with `seed`. Symmetric with eigenvalues in (0, 2).
DenseMatrix random_test_matrix(std::size_t n, std::uint64_t seed);

struct NeumannReport {
  std::size_t n = 0;
  std::uint64_t terms = 0;
  std::string strategy;
  std::string plan_hash;
  std::uint64_t matrix_muls = 0;
  double wall_time = 0;  // seconds, evaluation only
  double residual_fro = 0;
  double spectral_radius_est = 0;
  bool spectral_low_confidence = false;
};

struct InvertOptions {
  bool allow_divergent = false;
  Kernel kernel = Kernel::Blocked;
  std::string strategy_label = "custom";
  unsigned power_iters = 1000;
  double power_tol = 1e-10;
};

struct InversionResult {
  DenseMatrix inverse;
  NeumannReport report;
};

/// Evaluates the plan at B = I - A: the truncated Neumann series for A^{-1}.
InversionResult neumann_invert(const DenseMatrix& a, std::uint64_t terms, const SlpProgram& plan,
                               const InvertOptions& options = {});

struct BenchConfig {
  std::vector<std::size_t> sizes{50, 100, 250, 500};
  std::vector<std::uint64_t> terms{5, 6, 7, 8, 9};
  unsigned replicates = 100;
  std::uint64_t seed = 1;
  Kernel kernel = Kernel::Blocked;
};

struct BenchRow {
  std::size_t size = 0;
  std::uint64_t terms = 0;
  std::string fast_strategy;
  std::string direct_hash;
  std::string fast_hash;
  std::uint64_t direct_muls = 0;
  std::uint64_t fast_muls = 0;
  double direct_mean = 0, direct_sd = 0;
  double fast_mean = 0, fast_sd = 0;
  double speedup = 0;  // direct_mean / fast_mean
  double residual_direct = 0, residual_fast = 0;
  double path_rel_diff = 0;  // ||direct - fast||_F / ||direct||_F
};

/// Seed of the test matrix used for one size in a benchmark run.
std::uint64_t bench_matrix_seed(std::uint64_t seed, std::size_t size);

/// Direct (Horner) against fast (auto plan) evaluation on one seeded matrix
/// per size. One untimed warm-up pair precedes the timed replicates.
std::vector<BenchRow> run_bench(const BenchConfig& config,
                                const std::function<void(const BenchRow&)>& on_row = {});

// Matrix files. CSV: one row per line, comma separated. Binary: "NMAT",
// uint32 version (1), uint64 rows, uint64 cols, then rows*cols float64,
// all little-endian, row-major.
DenseMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const DenseMatrix& m, const std::string& path);
DenseMatrix read_matrix_binary(const std::string& path);
void write_matrix_binary(const DenseMatrix& m, const std::string& path);
/// Binary when the file starts with the magic, CSV otherwise.
DenseMatrix read_matrix(const std::string& path);
/// Binary for a ".nmat" or ".bin" extension, CSV otherwise.
void write_matrix(const DenseMatrix& m, const std::string& path);

}  // namespace neumann
