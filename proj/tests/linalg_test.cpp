#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "neumann/error.hpp"
#include "neumann/linalg.hpp"
#include "neumann/planner.hpp"

using namespace neumann;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("neumann_test_" + name)).string();
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("identity input gives identity inverse") {
  const DenseMatrix i = DenseMatrix::identity(6);
  for (std::uint64_t n : {1u, 5u, 9u}) {
    const auto res = neumann_invert(i, n, plan_auto(n).program);
    CHECK(res.inverse == i);
    CHECK(res.report.residual_fro == 0.0);
    CHECK(res.report.spectral_radius_est == 0.0);
  }
}

TEST_CASE("scalar 0.5 with five terms") {
  const DenseMatrix a(1, 1, 0.5);
  const auto res = neumann_invert(a, 5, plan_auto(5).program);
  CHECK(res.inverse(0, 0) == 1.9375);
}

TEST_CASE("scalar embedding: 1x1 matrices agree exactly with scalar evaluation") {
  for (double v : {0.1, 0.37, 0.5, 1.2, 1.9})
    for (std::uint64_t n = 1; n <= 12; ++n) {
      const SlpProgram p = plan_auto(n).program;
      const auto res = neumann_invert(DenseMatrix(1, 1, v), n, p);
      CHECK(res.inverse(0, 0) == eval(p, 1.0 - v));
    }
}

TEST_CASE("N = 9: fast plan uses 4 products, Horner 7") {
  const DenseMatrix a = random_test_matrix(20, 3);
  CHECK(neumann_invert(a, 9, plan_auto(9).program).report.matrix_muls == 4);
  CHECK(neumann_invert(a, 9, horner_program(9)).report.matrix_muls == 7);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(neumann_invert(DenseMatrix(2, 3), 5, plan_auto(5).program), DimensionError);
  CHECK_THROWS_AS(neumann_invert(DenseMatrix::identity(2), 6, plan_auto(5).program), DomainError);
  const DenseMatrix far(2, 2, 0.0);  // B = I, rho = 1
  CHECK_THROWS_AS(neumann_invert(far, 5, plan_auto(5).program), ConvergenceError);
  InvertOptions opt;
  opt.allow_divergent = true;
  CHECK(neumann_invert(far, 5, plan_auto(5).program, opt).inverse(0, 0) == 5.0);
}

TEST_CASE("spectral radius estimate") {
  CHECK(spectral_radius_estimate(DenseMatrix(3, 3)).value == 0.0);
  const double d[] = {0.9, 0.1};
  const auto e = spectral_radius_estimate(DenseMatrix::diagonal(d), 1000, 1e-12);
  CHECK(e.value == doctest::Approx(0.9).epsilon(1e-9));
  CHECK_FALSE(e.low_confidence);
  // rotation: no dominant real eigenvalue, norm ratio is exact anyway
  DenseMatrix rot(2, 2);
  rot(0, 1) = -0.5;
  rot(1, 0) = 0.5;
  CHECK(spectral_radius_estimate(rot).value == doctest::Approx(0.5));
  CHECK_THROWS_AS(spectral_radius_estimate(DenseMatrix(2, 3)), DimensionError);
  // unsettled iteration is flagged
  const double close[] = {0.9, -0.8999};
  CHECK(spectral_radius_estimate(DenseMatrix::diagonal(close), 5, 1e-14).low_confidence);
}

TEST_CASE("random test matrices") {
  const DenseMatrix a = random_test_matrix(50, 11);
  CHECK(a == random_test_matrix(50, 11));
  CHECK_FALSE(a == random_test_matrix(50, 12));
  CHECK(a == a.transpose());
  CHECK(spectral_radius_estimate(DenseMatrix::identity(50) - a).value <= 0.9 + 1e-9);
  const DenseMatrix s = random_test_matrix(1, 5);
  CHECK(s(0, 0) >= 0.1);
  CHECK(s(0, 0) <= 1.9);
  CHECK_THROWS_AS(random_test_matrix(0, 1), DomainError);
}

TEST_CASE("residuals") {
  const DenseMatrix i = DenseMatrix::identity(4);
  CHECK(residual(i, i) == 0.0);
  const double d[] = {0.5, 2.0, 4.0};
  const double dinv[] = {2.0, 0.5, 0.25};
  CHECK(residual(DenseMatrix::diagonal(d), DenseMatrix::diagonal(dinv)) == 0.0);
  CHECK_THROWS_AS(residual(i, DenseMatrix::identity(3)), DimensionError);
}

TEST_CASE("property: residual decreases in N and paths agree") {
  for (std::size_t n : {30u, 50u}) {
    const DenseMatrix a = random_test_matrix(n, 100 + n);
    double prev = INFINITY;
    for (std::uint64_t terms = 5; terms <= 9; ++terms) {
      const auto fast = neumann_invert(a, terms, plan_auto(terms).program);
      const auto direct = neumann_invert(a, terms, horner_program(terms));
      CHECK(relative_frobenius_diff(fast.inverse, direct.inverse) < 1e-8);
      CHECK(fast.report.residual_fro < prev);
      prev = fast.report.residual_fro;
    }
  }
}

TEST_CASE("kernel choice does not change the inverse") {
  const DenseMatrix a = random_test_matrix(40, 9);
  InvertOptions opt;
  opt.kernel = Kernel::Reference;
  const auto r = neumann_invert(a, 7, plan_auto(7).program, opt);
  opt.kernel = Kernel::Parallel;
  CHECK(neumann_invert(a, 7, plan_auto(7).program, opt).inverse == r.inverse);
}

TEST_CASE("matrix files round trip") {
  const DenseMatrix a = random_test_matrix(7, 2);
  const std::string csv = temp_path("m.csv"), bin = temp_path("m.nmat");
  write_matrix(a, csv);
  write_matrix(a, bin);
  CHECK(read_matrix(csv) == a);
  CHECK(read_matrix(bin) == a);
  CHECK(read_matrix_binary(bin) == a);
  // header layout
  std::ifstream in(bin, std::ios::binary);
  char head[24];
  in.read(head, 24);
  CHECK(std::string(head, 4) == "NMAT");
  CHECK(head[4] == 1);
  CHECK(head[8] == 7);
  CHECK(std::filesystem::file_size(bin) == 24 + 7 * 7 * 8);
  std::filesystem::remove(csv);
  std::filesystem::remove(bin);
}

TEST_CASE("malformed matrix files") {
  const std::string p = temp_path("bad.csv");
  {
    std::ofstream(p) << "1,2\n3\n";
  }
  CHECK_THROWS_AS(read_matrix(p), ParseError);
  {
    std::ofstream(p) << "1,x\n";
  }
  CHECK_THROWS_AS(read_matrix(p), ParseError);
  {
    std::ofstream(p) << "\n";
  }
  CHECK_THROWS_AS(read_matrix(p), ParseError);
  {
    std::ofstream(p) << " 1, 2\r\n3 ,4\n\n";
  }
  CHECK(read_matrix(p).rows() == 2);
  std::filesystem::remove(p);
  CHECK_THROWS_AS(read_matrix(temp_path("missing.csv")), ParseError);
}

TEST_CASE("small benchmark run reports counts and agreement") {
  BenchConfig cfg;
  cfg.sizes = {20};
  cfg.terms = {5, 9};
  cfg.replicates = 3;
  const auto rows = run_bench(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].direct_muls == 3);
  CHECK(rows[0].fast_muls == 2);
  CHECK(rows[1].direct_muls == 7);
  CHECK(rows[1].fast_muls == 4);
  for (const auto& r : rows) {
    CHECK(r.path_rel_diff < 1e-8);
    CHECK(r.direct_mean > 0);
    CHECK(r.fast_mean > 0);
  }
  CHECK(bench_matrix_seed(1, 50) == bench_matrix_seed(1, 50));
  CHECK(bench_matrix_seed(1, 50) != bench_matrix_seed(2, 50));
}

}
