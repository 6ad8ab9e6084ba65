#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "neumann/slp.hpp"

namespace neumann {

/// Dense univariate polynomial with arbitrary precision integer coefficients.
/// Coefficient i multiplies x^i; the vector never has trailing zeros.
class DensePoly {
 public:
  DensePoly() = default;
  explicit DensePoly(std::vector<mpz_class> coeffs);

  static DensePoly constant(long c);
  static DensePoly monomial(std::uint64_t degree);
  /// 1 + x + ... + x^(n-1)
  static DensePoly series(std::uint64_t n);

  const std::vector<mpz_class>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  std::int64_t degree() const noexcept { return static_cast<std::int64_t>(c_.size()) - 1; }
  mpz_class coeff(std::uint64_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }

  /// True iff this equals 1 + x + ... + x^(n-1).
  bool is_series(std::uint64_t n) const;
  mpz_class evaluate(const mpz_class& x) const;
  std::string to_string() const;

  friend DensePoly operator+(const DensePoly& a, const DensePoly& b);
  friend DensePoly operator-(const DensePoly& a, const DensePoly& b);
  friend DensePoly operator*(const DensePoly& a, const DensePoly& b);
  friend bool operator==(const DensePoly& a, const DensePoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<mpz_class> c_;
};

/// Upper bound on the series length accepted by the polynomial oracle.
inline constexpr std::uint64_t kOracleMaxDegree = std::uint64_t{1} << 24;

/// Exact symbolic evaluation of `program` over Z[x]. Uses checked 64-bit
/// coefficients and falls back to GMP integers on overflow.
DensePoly eval_poly_oracle(const SlpProgram& program);

/// True iff the program's output is exactly 1 + x + ... + x^(N-1).
bool oracle_check(const SlpProgram& program);

/// Exponents k >= 1 for which some register holds exactly x^k, mapped to the
/// first such register.
std::map<std::uint64_t, Reg> monomial_registers(const SlpProgram& program);

}  // namespace neumann
