#include "neumann/chains.hpp"

#include <string>

#include "neumann/poly.hpp"

namespace neumann {

namespace {

constexpr std::uint64_t kPowerScanLimit = 4096;

ChainEntry make_entry(ProgramBuilder&& b, Reg out, std::uint64_t size, Provenance prov) {
  SlpProgram program = std::move(b).finish(out, size);
  ChainEntry e{size, program, program.declared_muls(), prov, {}};
  if (size <= kPowerScanLimit) e.powers = monomial_registers(program);
  e.powers[1] = program.input();
  return e;
}

Reg emit_binary(ProgramBuilder& b, Reg x, std::uint64_t p) {
  if (p == 1) return b.one();
  if (p == 2) return b.add_one(x);
  Reg y = b.mul(x, x);
  if (p == 3) return b.add(b.add_one(x), y);
  Reg inner = emit_binary(b, y, p / 2);
  if (p % 2 == 1) return b.add_one(b.mul(b.add(x, y), inner));
  return b.mul(b.add_one(x), inner);
}

Reg emit_recurrence(ProgramBuilder& b, Reg x, unsigned n) {
  if (n == 0) return b.one();
  if (n == 1) return b.add_one(x);
  Reg u = emit_recurrence(b, x, n - 1);
  Reg z = b.add_one(b.mul(x, u));
  Reg v = b.sub(z, u);  // x^{y_{n-1}}
  Reg w = emit_recurrence(b, v, n - 1);
  return b.add_one(b.mul(b.sub(z, b.one()), w));
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Table: return "TABLE1";
    case Provenance::TableCorrected: return "TABLE1_CORRECTED";
    case Provenance::BinaryRule: return "BINARY_RULE";
    case Provenance::Recurrence: return "RECURRENCE";
    case Provenance::PrintedFixture: return "PRINTED_FIXTURE";
  }
  return "?";
}

Provenance parse_provenance(std::string_view s) {
  for (auto p : {Provenance::Table, Provenance::TableCorrected, Provenance::BinaryRule,
                 Provenance::Recurrence, Provenance::PrintedFixture})
    if (provenance_name(p) == s) return p;
  throw ParseError("unknown provenance '" + std::string(s) + "'");
}

bool has_small_chain(std::uint64_t p) {
  return p == 1 || p == 2 || p == 3 || p == 5 || p == 7 || p == 11;
}

ChainEntry chain_for_small(std::uint64_t p) {
  ProgramBuilder b;
  Reg x = b.input();
  switch (p) {
    case 1:
      return make_entry(std::move(b), b.one(), 1, Provenance::Table);
    case 2:
      return make_entry(std::move(b), b.add_one(x), 2, Provenance::Table);
    case 3: {
      Reg y = b.mul(x, x);
      return make_entry(std::move(b), b.add(b.add_one(x), y), 3, Provenance::Table);
    }
    case 5: {
      // 1 + (1+y)(x+y)
      Reg y = b.mul(x, x);
      Reg out = b.add_one(b.mul(b.add_one(y), b.add(x, y)));
      return make_entry(std::move(b), out, 5, Provenance::Table);
    }
    case 7: {
      // 1 + (x+y)(1+y+w)
      Reg y = b.mul(x, x);
      Reg w = b.mul(y, y);
      Reg out = b.add_one(b.mul(b.add(x, y), b.add(b.add_one(y), w)));
      return make_entry(std::move(b), out, 7, Provenance::Table);
    }
    case 11: {
      // 1 + (x+y)(1 + (1+w)(y+w))
      Reg y = b.mul(x, x);
      Reg w = b.mul(y, y);
      Reg inner = b.add_one(b.mul(b.add_one(w), b.add(y, w)));
      Reg out = b.add_one(b.mul(b.add(x, y), inner));
      return make_entry(std::move(b), out, 11, Provenance::TableCorrected);
    }
    default:
      throw DomainError("no small chain for size " + std::to_string(p));
  }
}

ChainEntry binary_chain(std::uint64_t p) {
  if (p == 0) throw DomainError("binary_chain: size must be >= 1");
  ProgramBuilder b;
  Reg out = emit_binary(b, b.input(), p);
  return make_entry(std::move(b), out, p, Provenance::BinaryRule);
}

ChainEntry best_chain(std::uint64_t p) {
  return has_small_chain(p) ? chain_for_small(p) : binary_chain(p);
}

std::uint64_t recurrence_value(unsigned n) {
  if (n > kMaxRecurrenceIndex)
    throw DomainError("recurrence index " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxRecurrenceIndex));
  std::uint64_t y = 1;
  for (unsigned k = 0; k < n; ++k) y = y * y + 1;
  return y;
}

ChainEntry recurrence_chain(unsigned n) {
  const std::uint64_t size = recurrence_value(n);
  ProgramBuilder b;
  Reg out = emit_recurrence(b, b.input(), n);
  return make_entry(std::move(b), out, size, Provenance::Recurrence);
}

Reg emit_next_power(ProgramBuilder& b, Reg x, Reg f, std::optional<Reg> x_times_f) {
  if (x_times_f) return b.add_one(b.sub(*x_times_f, f));
  return b.add_one(b.mul(f, b.sub(x, b.one())));
}

SlpProgram next_power_extension(const ChainEntry& entry) {
  ProgramBuilder b;
  Reg x = b.input();
  Reg f = b.append(entry.program, x);
  Reg xp = emit_next_power(b, x, f);
  return std::move(b).finish(xp, entry.size);
}

ChainEntry printed_chain_f11() {
  ProgramBuilder b;
  Reg x = b.input();
  Reg y = b.mul(x, x);
  Reg w = b.mul(y, y);
  Reg xy = b.add(x, y);
  Reg out = b.add_one(b.mul(xy, b.add_one(b.mul(xy, b.add_one(w)))));
  return make_entry(std::move(b), out, 11, Provenance::PrintedFixture);
}

ChainEntry printed_chain_f26() {
  ProgramBuilder b;
  Reg x = b.input();
  const SlpProgram f5 = chain_for_small(5).program;
  Reg y = b.append(f5, x);
  Reg z = b.add_one(b.mul(x, y));
  Reg v = b.sub(z, y);
  Reg w = b.append(f5, v);
  Reg out = b.mul(z, w);
  return make_entry(std::move(b), out, 26, Provenance::PrintedFixture);
}

}  // namespace neumann
