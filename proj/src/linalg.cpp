#include "neumann/linalg.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "neumann/error.hpp"
#include "neumann/planner.hpp"

namespace neumann {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> mat_vec(const DenseMatrix& m, const std::vector<double>& v) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* r = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += r[j] * v[j];
    out[i] = acc;
  }
  return out;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Uniform in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller on two raw draws; fixed here so matrices match across standard libraries.
double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit(rng);  // (0, 1]
  const double u2 = unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

constexpr char kMagic[4] = {'N', 'M', 'A', 'T'};
constexpr std::uint32_t kBinaryVersion = 1;

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is, const std::string& path) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T)))
    throw ParseError(path + ": truncated binary matrix");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

SpectralEstimate spectral_radius_estimate(const DenseMatrix& b, unsigned max_iters, double tol) {
  if (!b.square()) throw DimensionError("spectral_radius_estimate: matrix must be square");
  SpectralEstimate est;
  if (b.rows() == 0) return est;
  std::vector<double> v(b.rows(), 1.0 / std::sqrt(static_cast<double>(b.rows())));
  double prev = -1.0;
  for (unsigned it = 1; it <= max_iters; ++it) {
    std::vector<double> w = mat_vec(b, v);
    const double lambda = norm2(w);
    est.value = lambda;
    est.iterations = it;
    if (lambda == 0.0) return est;
    if (std::abs(lambda - prev) <= tol * std::max(1.0, lambda)) return est;
    prev = lambda;
    for (double& x : w) x /= lambda;
    v = std::move(w);
  }
  est.low_confidence = true;
  return est;
}

double residual(const DenseMatrix& a, const DenseMatrix& a_hat, Kernel kernel) {
  if (!a.square() || a.rows() != a_hat.rows() || a.cols() != a_hat.cols())
    throw DimensionError("residual: dimension mismatch");
  DenseMatrix r = DenseMatrix::identity(a.rows());
  r -= multiply(a, a_hat, kernel);
  return r.frobenius_norm();
}

DenseMatrix random_test_matrix(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("random_test_matrix: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> d(n);
  for (double& x : d) x = 0.1 + 1.8 * unit(rng);

  // Columns of q: Gram-Schmidt (two passes) on Gaussian columns.
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (auto& col : q)
    for (double& x : col) x = gaussian(rng);
  for (std::size_t j = 0; j < n; ++j) {
    auto& v = q[j];
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < j; ++i) {
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += q[i][k] * v[k];
        for (std::size_t k = 0; k < n; ++k) v[k] -= dot * q[i][k];
      }
    const double nv = norm2(v);
    if (nv == 0.0) throw ConvergenceError("random_test_matrix: degenerate Gaussian draw");
    for (double& x : v) x /= nv;
  }

  DenseMatrix qd(n, n), qt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      qd(i, j) = q[j][i] * d[j];
      qt(j, i) = q[j][i];
    }
  DenseMatrix a = multiply(qd, qt);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = s;
      a(j, i) = s;
    }
  return a;
}

InversionResult neumann_invert(const DenseMatrix& a, std::uint64_t terms, const SlpProgram& plan,
                               const InvertOptions& options) {
  if (!a.square() || a.empty()) throw DimensionError("neumann_invert: matrix must be square and non-empty");
  if (!a.all_finite()) throw DomainError("neumann_invert: matrix has non-finite entries");
  if (plan.series_length() != terms)
    throw DomainError("neumann_invert: plan computes " + std::to_string(plan.series_length()) +
                      " terms, requested " + std::to_string(terms));

  const DenseMatrix b = DenseMatrix::identity(a.rows()) - a;
  const SpectralEstimate rho = spectral_radius_estimate(b, options.power_iters, options.power_tol);
  if (rho.value >= 1.0 && !options.allow_divergent) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", rho.value);
    throw ConvergenceError(std::string("neumann_invert: spectral radius estimate of I - A is ") + buf +
                           " (>= 1); series diverges");
  }

  MatrixRing ring{options.kernel, 0};
  const auto t0 = Clock::now();
  DenseMatrix inv = eval(plan, b, ring);
  const double elapsed = seconds_since(t0);
  if (ring.muls != plan.declared_muls())
    throw StructuralError("neumann_invert: executed " + std::to_string(ring.muls) +
                          " products, plan declares " + std::to_string(plan.declared_muls()));

  NeumannReport report;
  report.n = a.rows();
  report.terms = terms;
  report.strategy = options.strategy_label;
  report.plan_hash = plan_hash(plan);
  report.matrix_muls = ring.muls;
  report.wall_time = elapsed;
  report.residual_fro = residual(a, inv, options.kernel);
  report.spectral_radius_est = rho.value;
  report.spectral_low_confidence = rho.low_confidence;
  return {std::move(inv), std::move(report)};
}

std::uint64_t bench_matrix_seed(std::uint64_t seed, std::size_t size) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(size)));
}

std::vector<BenchRow> run_bench(const BenchConfig& config,
                                const std::function<void(const BenchRow&)>& on_row) {
  if (config.replicates == 0) throw DomainError("bench: replicates must be >= 1");
  std::vector<BenchRow> rows;
  for (std::size_t size : config.sizes) {
    const DenseMatrix a = random_test_matrix(size, bench_matrix_seed(config.seed, size));
    const DenseMatrix b = DenseMatrix::identity(size) - a;
    for (std::uint64_t n : config.terms) {
      const SlpProgram direct = horner_program(n);
      const PlanReport fast = plan_auto(n);

      BenchRow row;
      row.size = size;
      row.terms = n;
      row.fast_strategy = fast.strategy.to_string();
      row.direct_hash = plan_hash(direct);
      row.fast_hash = plan_hash(fast.program);
      row.direct_muls = direct.declared_muls();
      row.fast_muls = fast.program.declared_muls();

      // Warm-up pair, also the matrices checked for agreement.
      MatrixRing ring{config.kernel, 0};
      const DenseMatrix d = eval(direct, b, ring);
      const DenseMatrix f = eval(fast.program, b, ring);
      row.residual_direct = residual(a, d, config.kernel);
      row.residual_fast = residual(a, f, config.kernel);
      row.path_rel_diff = relative_frobenius_diff(f, d);

      std::vector<double> td, tf;
      td.reserve(config.replicates);
      tf.reserve(config.replicates);
      for (unsigned r = 0; r < config.replicates; ++r) {
        // Alternate the order so drift does not favour one path.
        const bool direct_first = r % 2 == 0;
        for (int leg = 0; leg < 2; ++leg) {
          const bool run_direct = (leg == 0) == direct_first;
          MatrixRing timed{config.kernel, 0};
          const auto t0 = Clock::now();
          DenseMatrix out = eval(run_direct ? direct : fast.program, b, timed);
          (run_direct ? td : tf).push_back(seconds_since(t0));
        }
      }
      mean_sd(td, row.direct_mean, row.direct_sd);
      mean_sd(tf, row.fast_mean, row.fast_sd);
      row.speedup = row.fast_mean > 0 ? row.direct_mean / row.fast_mean : 0.0;
      if (on_row) on_row(row);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

DenseMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      std::size_t s = pos, e = end;
      while (s < e && (line[s] == ' ' || line[s] == '\t')) ++s;
      while (e > s && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
      if (s < e && line[s] == '+') ++s;
      double v = 0;
      const auto [ptr, ec] = std::from_chars(line.data() + s, line.data() + e, v);
      if (ec != std::errc() || ptr != line.data() + e || s == e)
        throw ParseError(path + ":" + std::to_string(lineno) + ": bad number '" +
                         line.substr(pos, end - pos) + "'");
      data.push_back(v);
      ++count;
      if (end == line.size()) break;
      pos = end + 1;
    }
    if (rows == 0) cols = count;
    else if (count != cols)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                       " columns, found " + std::to_string(count));
    ++rows;
  }
  if (rows == 0) throw ParseError(path + ": empty matrix");
  DenseMatrix m(rows, cols);
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

void write_matrix_csv(const DenseMatrix& m, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw ParseError("cannot write " + path);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      std::fprintf(f, "%.17g%c", m(i, j), j + 1 == m.cols() ? '\n' : ',');
  if (std::fclose(f) != 0) throw ParseError("cannot write " + path);
}

DenseMatrix read_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError(path + ": not a binary matrix file");
  const auto version = get_le<std::uint32_t>(in, path);
  if (version != kBinaryVersion)
    throw ParseError(path + ": unsupported binary matrix version " + std::to_string(version));
  const auto rows = get_le<std::uint64_t>(in, path);
  const auto cols = get_le<std::uint64_t>(in, path);
  if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20) || rows * cols > (1ull << 31))
    throw ParseError(path + ": implausible dimensions");
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = std::bit_cast<double>(get_le<std::uint64_t>(in, path));
  return m;
}

void write_matrix_binary(const DenseMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kBinaryVersion);
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.cols());
  for (double v : m.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw ParseError("cannot write " + path);
}

DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0) return read_matrix_binary(path);
  return read_matrix_csv(path);
}

void write_matrix(const DenseMatrix& m, const std::string& path) {
  auto ends_with = [&](std::string_view s) {
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".nmat") || ends_with(".bin")) write_matrix_binary(m, path);
  else write_matrix_csv(m, path);
}

}  // namespace neumann
