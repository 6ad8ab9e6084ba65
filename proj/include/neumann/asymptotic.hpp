#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace neumann {

inline constexpr unsigned kMaxDigits = 50;

struct AsymptoticResult {
  std::string k;            // rounded to `digits` decimals
  std::string coefficient;  // 1/log2(k), same rounding
  double k_value = 0;
  double coefficient_value = 0;
  unsigned digits = 0;
  unsigned terms_used = 0;
  double error_bound = 0;  // bound on |k_computed - k|
};

/// k = exp(sum_{n>=0} 2^{-n-1} ln(1 + y_n^{-2})) with y_0 = 1, summed until
/// the error bound drops below 10^{-digits-2}. digits in [1, 50].
AsymptoticResult compute_k(unsigned digits);

/// Same series truncated after `terms` terms (y_0 .. y_{terms-1}).
AsymptoticResult compute_k_with_terms(unsigned terms, unsigned digits = 20);

/// y_n with y_0 = 1, y_{n+1} = y_n^2 + 1, exact for any n.
mpz_class recurrence_term(unsigned n);

enum class FloorStatus { Match, Mismatch, Undecided };

struct FloorRow {
  unsigned n = 0;
  mpz_class y;
  std::optional<mpz_class> floor_value;  // set only when certified
  FloorStatus status = FloorStatus::Undecided;
};

/// Checks floor(k^(2^n)) == y_n for n = 0..n_max (n_max <= 6) using
/// outward-rounded interval arithmetic at `precision_bits`.
std::vector<FloorRow> verify_floor_identity(unsigned n_max, unsigned precision_bits = 256);

/// 2^n / log2(y_n) for 1 <= n <= 6.
double coefficient_for_recurrence_level(unsigned n);

}  // namespace neumann
