#include "doctest.h"

#include <random>
#include <tuple>

#include "neumann/error.hpp"
#include "neumann/matrix.hpp"

using namespace neumann;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(r, c);
  for (double& x : m.data()) x = u(rng);
  return m;
}

}  // namespace

TEST_SUITE("matrix") {

TEST_CASE("basic operations") {
  const DenseMatrix i3 = DenseMatrix::identity(3);
  CHECK(i3(0, 0) == 1.0);
  CHECK(i3(0, 1) == 0.0);
  const double d[] = {1, 2, 3};
  const DenseMatrix dg = DenseMatrix::diagonal(d);
  CHECK(multiply(dg, i3) == dg);
  CHECK((dg - dg).frobenius_norm() == 0.0);
  CHECK(dg.transpose() == dg);
  CHECK((dg + i3)(2, 2) == 4.0);
  CHECK(dg.all_finite());
  CHECK_THROWS_AS(dg + DenseMatrix(2, 2), DimensionError);
  CHECK_THROWS_AS(multiply(DenseMatrix(2, 3), DenseMatrix(2, 3)), DimensionError);
}

TEST_CASE("kernels are bitwise identical") {
  for (auto [n, m, p] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{{1, 1, 1}, {7, 13, 5}, {33, 129, 65}, {100, 100, 100},
                        {257, 300, 520}}) {
    const DenseMatrix a = random_matrix(n, m, n * 7 + m), b = random_matrix(m, p, p * 3 + 1);
    const DenseMatrix r = multiply(a, b, Kernel::Reference);
    CHECK(multiply(a, b, Kernel::Blocked) == r);
    CHECK(multiply(a, b, Kernel::Parallel) == r);
  }
}

TEST_CASE("multiply_into reuses or reshapes the destination") {
  const DenseMatrix a = random_matrix(4, 4, 1);
  DenseMatrix c;
  multiply_into(a, a, c, Kernel::Blocked);
  CHECK(c.rows() == 4);
  CHECK(c == multiply(a, a, Kernel::Reference));
}

TEST_CASE("kernel names") {
  for (Kernel k : {Kernel::Reference, Kernel::Blocked, Kernel::Parallel}) CHECK(parse_kernel(kernel_name(k)) == k);
  CHECK_THROWS_AS(parse_kernel("gpu"), ParseError);
}

TEST_CASE("relative difference") {
  const DenseMatrix a = DenseMatrix::identity(4);
  DenseMatrix b = a;
  b(0, 0) = 1.0 + 1e-9;
  CHECK(relative_frobenius_diff(b, a) == doctest::Approx(0.5e-9));
  CHECK(relative_frobenius_diff(a, a) == 0.0);
}

}
