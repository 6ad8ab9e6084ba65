#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

#include "neumann/slp.hpp"

namespace neumann {

enum class Provenance {
  Table,           // small-size chain used as printed
  TableCorrected,  // small-size chain whose printed form was repaired
  BinaryRule,      // parity recursion on x^2
  Recurrence,      // y_{n+1} = y_n^2 + 1 family
  PrintedFixture,  // printed chain kept only as a negative fixture
};

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view s);

struct ChainEntry {
  std::uint64_t size = 1;
  SlpProgram program;
  std::uint64_t muls = 0;
  Provenance provenance = Provenance::Table;
  /// Registers of `program` holding pure powers x^k (k >= 1). Always
  /// contains the input as x^1; other powers are detected only for small
  /// sizes.
  std::map<std::uint64_t, Reg> powers;
};

/// Sizes with a hand-built minimal chain: 1, 2, 3, 5, 7, 11.
bool has_small_chain(std::uint64_t p);
ChainEntry chain_for_small(std::uint64_t p);

/// f(P,x) by the parity rule:
///   odd P:  1 + (x + x^2) * f((P-1)/2, x^2)
///   even P: (1 + x) * f(P/2, x^2)
/// bottoming out at f(2) = 1 + x and f(3) = 1 + x + x^2.
ChainEntry binary_chain(std::uint64_t p);

/// Small chain when one exists, otherwise binary_chain.
ChainEntry best_chain(std::uint64_t p);

inline constexpr unsigned kMaxRecurrenceIndex = 6;

/// y_0 = 1, y_{n+1} = y_n^2 + 1 for n <= 6.
std::uint64_t recurrence_value(unsigned n);

/// Chain for f(y_n, x) with 2^n - 2 multiplications, built from
/// f(y_{k+1}, x) = 1 + (z - 1) * f(y_k, z - u), u = f(y_k, x), z = 1 + x*u.
ChainEntry recurrence_chain(unsigned n);

/// Emits x^P given f(P, x). With `x_times_f` (a register holding x*f) this is
/// free: x*f - f + 1. Otherwise one multiplication: f*(x - 1) + 1.
Reg emit_next_power(ProgramBuilder& b, Reg x, Reg f, std::optional<Reg> x_times_f = {});

/// The chain followed by the next-power step; output holds x^P.
SlpProgram next_power_extension(const ChainEntry& entry);

/// Printed forms that fail the oracle.
/// f(11): 1 + (x+y)(1 + (x+y)(1+w)), y = x^2, w = y^2.
ChainEntry printed_chain_f11();
/// f(26): (1 + x*f(5,x)) * f(5, x^5); sums to 30 at x = 1.
ChainEntry printed_chain_f26();

}  // namespace neumann
