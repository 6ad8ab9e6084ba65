#pragma once

// Exact solution of sparse integer linear systems by p-adic lifting.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace neumann::detail {

struct SparseRow {
  std::vector<std::uint32_t> cols;
  std::vector<std::int64_t> vals;
};

/// Solves A x = b for nonsingular square A. Returns x as (numerators,
/// common denominator), verified exactly. Throws ConvergenceError when the
/// system is singular modulo every tried prime or lifting does not settle.
struct RationalSolution {
  std::vector<mpz_class> numerators;
  mpz_class denominator;
};

RationalSolution solve_rational(const std::vector<SparseRow>& rows,
                                const std::vector<std::int64_t>& rhs);

/// n/d with |n|, d <= sqrt(m/2) and n = a*d mod m, if one exists.
bool rational_reconstruct(const mpz_class& a, const mpz_class& m, mpz_class& num,
                          mpz_class& den);

}  // namespace neumann::detail
