#include "doctest.h"

#include <cmath>

#include "neumann/asymptotic.hpp"
#include "neumann/error.hpp"

using namespace neumann;

TEST_SUITE("asymptotic") {

TEST_CASE("published constants to 14 digits") {
  const AsymptoticResult r = compute_k(14);
  CHECK(r.k == "1.50283680104976");
  CHECK(r.coefficient == "1.70158214004473");
  CHECK(r.error_bound < 1e-16);
}

TEST_CASE("30 digits match the mpmath oracle (frozen)") {
  // tests/oracle/derive_frozen.py
  const AsymptoticResult r = compute_k(29);
  CHECK(r.k == "1.50283680104975649975293642373");
  CHECK(r.coefficient == "1.70158214004473318110827889498");
}

TEST_CASE("50 digits are stable against 40") {
  const AsymptoticResult a = compute_k(50), b = compute_k(40);
  CHECK(a.k.substr(0, 40) == b.k.substr(0, 40));
  CHECK(a.k.size() == 52);
  CHECK_THROWS_AS(compute_k(0), DomainError);
  CHECK_THROWS_AS(compute_k(51), DomainError);
}

TEST_CASE("truncation error shrinks doubly exponentially") {
  const double truth = compute_k(20).k_value;
  double prev = 1.0;
  for (unsigned t = 1; t <= 5; ++t) {
    const AsymptoticResult r = compute_k_with_terms(t);
    const double err = std::abs(r.k_value - truth);
    CHECK(err <= r.error_bound + 1e-15);
    CHECK(r.error_bound < prev);
    prev = r.error_bound;
  }
  CHECK(compute_k_with_terms(5).error_bound < 1e-12);
  CHECK_THROWS_AS(compute_k_with_terms(0), DomainError);
}

TEST_CASE("recurrence terms") {
  CHECK(recurrence_term(0) == 1);
  CHECK(recurrence_term(4) == 677);
  CHECK(recurrence_term(6) == mpz_class("210066388901"));
  CHECK(recurrence_term(8) == recurrence_term(7) * recurrence_term(7) + 1);
}

TEST_CASE("floor identity certified for n <= 6") {
  const auto rows = verify_floor_identity(6);
  REQUIRE(rows.size() == 7);
  for (const auto& row : rows) {
    CAPTURE(row.n);
    CHECK(row.status == FloorStatus::Match);
    REQUIRE(row.floor_value.has_value());
    CHECK(*row.floor_value == row.y);
  }
  CHECK_THROWS_AS(verify_floor_identity(7), DomainError);
}

TEST_CASE("low precision leaves large n undecided rather than wrong") {
  for (const auto& row : verify_floor_identity(6, 40))
    CHECK(row.status != FloorStatus::Mismatch);
}

TEST_CASE("per-level coefficients decrease toward the limit") {
  const double limit = compute_k(14).coefficient_value;
  double prev = 3.0;
  for (unsigned n = 1; n <= 6; ++n) {
    const double c = coefficient_for_recurrence_level(n);
    CHECK(c < prev);
    CHECK(c > limit);
    prev = c;
  }
  CHECK(coefficient_for_recurrence_level(1) == doctest::Approx(2.0));
}

}
