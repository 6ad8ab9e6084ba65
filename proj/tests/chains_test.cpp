#include "doctest.h"

#include "neumann/chains.hpp"
#include "neumann/error.hpp"
#include "neumann/poly.hpp"

using namespace neumann;

namespace {

constexpr std::uint64_t kPrime = 1000000007;

struct ModRing {
  using value_type = std::uint64_t;
  static std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) { return a * b % kPrime; }
  static std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (a %= kPrime; e; e >>= 1, a = mul_mod(a, a))
      if (e & 1) r = mul_mod(r, a);
    return r;
  }
  std::uint64_t one(std::uint64_t) const { return 1; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % kPrime; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + kPrime - b) % kPrime; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return mul_mod(a, b); }
};

}  // namespace

TEST_SUITE("chains") {

TEST_CASE("small chains: published counts") {
  // f(2)=0, f(3)=1, f(5)=2, f(7)=3, f(11)=4
  const std::pair<std::uint64_t, std::uint64_t> expected[] = {{1, 0}, {2, 0}, {3, 1}, {5, 2}, {7, 3}, {11, 4}};
  for (auto [p, muls] : expected) {
    CAPTURE(p);
    REQUIRE(has_small_chain(p));
    const ChainEntry e = chain_for_small(p);
    CHECK(e.size == p);
    CHECK(e.muls == muls);
    CHECK(e.program.declared_muls() == muls);
    CHECK(oracle_check(e.program));
    CHECK(e.powers.at(1) == e.program.input());
  }
  CHECK_FALSE(has_small_chain(13));
  CHECK_THROWS_AS(chain_for_small(13), DomainError);
}

TEST_CASE("corrected chain for 11 is tagged") {
  CHECK(chain_for_small(11).provenance == Provenance::TableCorrected);
  CHECK(chain_for_small(7).provenance == Provenance::Table);
}

TEST_CASE("printed fixtures fail the oracle with the same counts as the corrected chains") {
  const ChainEntry p11 = printed_chain_f11();
  CHECK(p11.provenance == Provenance::PrintedFixture);
  CHECK(p11.program.declared_muls() == 4);
  CHECK_FALSE(oracle_check(p11.program));
  // right value at x = 1, wrong coefficients
  CHECK(eval(p11.program, 1L) == 11);
  const ChainEntry p26 = printed_chain_f26();
  CHECK(p26.program.declared_muls() == 6);
  CHECK_FALSE(oracle_check(p26.program));
  CHECK(eval(p26.program, 1L) == 30);

  CHECK(oracle_check(chain_for_small(11).program));
  CHECK(chain_for_small(11).muls == 4);
  CHECK(oracle_check(recurrence_chain(3).program));
  CHECK(recurrence_chain(3).muls == 6);
}

TEST_CASE("parity rule chains") {
  for (std::uint64_t p = 1; p <= 200; ++p) {
    CAPTURE(p);
    const ChainEntry e = binary_chain(p);
    CHECK(oracle_check(e.program));
    CHECK(e.provenance == Provenance::BinaryRule);
  }
  // 2*floor(log2 p) - 2 + popcount-ish bound: never worse than Horner
  for (std::uint64_t p = 3; p <= 200; ++p) CHECK(binary_chain(p).muls <= p - 2);
  CHECK(binary_chain(8).muls == 4);
  CHECK(binary_chain(16).muls == 6);
}

TEST_CASE("recurrence family y_{n+1} = y_n^2 + 1") {
  const std::uint64_t y[] = {1, 2, 5, 26, 677, 458330, 210066388901ULL};
  for (unsigned n = 0; n <= 6; ++n) CHECK(recurrence_value(n) == y[n]);
  CHECK_THROWS_AS(recurrence_value(7), DomainError);
  for (unsigned n = 1; n <= 4; ++n) {
    CAPTURE(n);
    const ChainEntry e = recurrence_chain(n);
    CHECK(e.size == y[n]);
    CHECK(e.muls == (1u << n) - 2);
    CHECK(oracle_check(e.program));
  }
  // y_5 and y_6 are too long for the dense oracle; compare with
  // (x^N - 1)/(x - 1) in the integers modulo a prime instead
  for (unsigned n : {5u, 6u}) {
    const ChainEntry e = recurrence_chain(n);
    CHECK(e.muls == (1u << n) - 2);
    for (std::uint64_t x : {2u, 3u, 12345u, 999999u}) {
      ModRing ring;
      const std::uint64_t got = eval(e.program, x, ring);
      const std::uint64_t expect = ModRing::mul_mod(ModRing::pow_mod(x, y[n]) + kPrime - 1,
                                                    ModRing::pow_mod(x - 1, kPrime - 2));
      CHECK(got == expect);
    }
  }
}

TEST_CASE("next power extension yields x^P") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u}) {
    const SlpProgram ext = next_power_extension(chain_for_small(p));
    const DensePoly got = eval_poly_oracle(ext);
    CHECK(got == DensePoly::monomial(p));
    CHECK(ext.declared_muls() == chain_for_small(p).muls + 1);
  }
}

TEST_CASE("provenance names round trip") {
  for (Provenance p : {Provenance::Table, Provenance::TableCorrected, Provenance::BinaryRule,
                       Provenance::Recurrence, Provenance::PrintedFixture})
    CHECK(parse_provenance(provenance_name(p)) == p);
  CHECK_THROWS_AS(parse_provenance("NOPE"), ParseError);
}

}
