#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neumann/error.hpp"

namespace neumann {

enum class Op : std::uint8_t { One, Input, Add, Sub, Mul };

std::string_view op_name(Op op);

/// Register handle inside a straight-line program. Registers are single
/// assignment and indexed by the instruction that defines them.
struct Reg {
  std::uint32_t index = 0;
  friend bool operator==(Reg, Reg) = default;
};

struct Instr {
  Op op = Op::One;
  std::uint32_t a = 0;  // unused for One/Input
  std::uint32_t b = 0;

  friend bool operator==(const Instr&, const Instr&) = default;
};

/// A straight-line evaluation plan for f(N, x) = 1 + x + ... + x^(N-1).
///
/// The constructor validates the structural invariants: topological operand
/// order, exactly one Input instruction and an in-range output register.
/// Instances are immutable and can be shared freely between threads.
class SlpProgram {
 public:
  SlpProgram(std::vector<Instr> instrs, Reg output, std::uint64_t series_length);

  const std::vector<Instr>& instrs() const noexcept { return instrs_; }
  Reg output() const noexcept { return output_; }
  std::uint64_t series_length() const noexcept { return series_length_; }
  std::uint64_t declared_muls() const noexcept { return declared_muls_; }
  std::uint64_t add_count() const noexcept { return add_count_; }
  Reg input() const noexcept { return input_; }

  /// Index of the last instruction reading each register; registers that
  /// are never read map to their own index. The output maps to size().
  const std::vector<std::uint32_t>& last_use() const noexcept { return last_use_; }

  std::size_t size() const noexcept { return instrs_.size(); }

  friend bool operator==(const SlpProgram& x, const SlpProgram& y) {
    return x.instrs_ == y.instrs_ && x.output_ == y.output_ &&
           x.series_length_ == y.series_length_;
  }

 private:
  std::vector<Instr> instrs_;
  Reg output_;
  std::uint64_t series_length_;
  std::uint64_t declared_muls_ = 0;
  std::uint64_t add_count_ = 0;
  Reg input_;
  std::vector<std::uint32_t> last_use_;
};

/// Number of multiplications; additions and subtractions are free.
std::uint64_t mul_count(const SlpProgram& program);

/// Drops instructions that do not contribute to the output.
SlpProgram eliminate_dead_code(const SlpProgram& program);

/// Incremental construction of a program. Instruction 0 is always the input.
class ProgramBuilder {
 public:
  ProgramBuilder();

  Reg input() const noexcept { return Reg{0}; }
  Reg one();
  Reg add(Reg a, Reg b);
  Reg sub(Reg a, Reg b);
  Reg mul(Reg a, Reg b);
  Reg add_one(Reg a) { return add(a, one()); }

  /// Copies `program` into this builder with its input bound to `x` and
  /// returns the register holding its output. Costs exactly
  /// program.declared_muls() multiplications.
  Reg append(const SlpProgram& program, Reg x);
  /// As append, returning the builder register for every program register.
  std::vector<Reg> append_mapped(const SlpProgram& program, Reg x);

  std::uint64_t mul_count() const noexcept { return muls_; }
  std::size_t size() const noexcept { return instrs_.size(); }

  SlpProgram finish(Reg output, std::uint64_t series_length) &&;

 private:
  Reg push(Instr instr);

  std::vector<Instr> instrs_;
  std::optional<Reg> one_;
  std::uint64_t muls_ = 0;
};

/// Value domain an SlpProgram can be evaluated over. `one(x)` returns the
/// multiplicative identity shaped like `x` (scalars ignore the argument,
/// matrices need the dimension).
template <class R>
concept RingLike = requires(R& ring, const typename R::value_type& v) {
  typename R::value_type;
  requires std::default_initializable<typename R::value_type>;
  { ring.one(v) } -> std::convertible_to<typename R::value_type>;
  { ring.add(v, v) } -> std::convertible_to<typename R::value_type>;
  { ring.sub(v, v) } -> std::convertible_to<typename R::value_type>;
  { ring.mul(v, v) } -> std::convertible_to<typename R::value_type>;
};

/// Plain arithmetic over a numeric type, counting multiplications.
template <class T>
struct ScalarRing {
  using value_type = T;
  std::uint64_t muls = 0;

  T one(const T&) const { return T(1); }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) {
    ++muls;
    return a * b;
  }
};

/// Executes `program` with its input bound to `x`. Registers are released
/// after their last use so matrix evaluation keeps only live values.
template <RingLike R>
typename R::value_type eval(const SlpProgram& program, const typename R::value_type& x,
                            R& ring) {
  using V = typename R::value_type;
  const auto& code = program.instrs();
  const auto& last = program.last_use();
  std::vector<V> regs(code.size());
  for (std::uint32_t i = 0; i < code.size(); ++i) {
    const Instr& in = code[i];
    switch (in.op) {
      case Op::One:
        regs[i] = ring.one(x);
        break;
      case Op::Input:
        regs[i] = x;
        break;
      case Op::Add:
        regs[i] = ring.add(regs[in.a], regs[in.b]);
        break;
      case Op::Sub:
        regs[i] = ring.sub(regs[in.a], regs[in.b]);
        break;
      case Op::Mul:
        regs[i] = ring.mul(regs[in.a], regs[in.b]);
        break;
    }
    if (in.op == Op::Add || in.op == Op::Sub || in.op == Op::Mul) {
      if (last[in.a] == i) regs[in.a] = V{};
      if (in.b != in.a && last[in.b] == i) regs[in.b] = V{};
    }
  }
  return std::move(regs[program.output().index]);
}

template <class T>
T eval(const SlpProgram& program, const T& x) {
  ScalarRing<T> ring;
  return eval(program, x, ring);
}

/// Horner plan 1 + x(1 + x(... (1 + x))): N - 2 multiplications for N >= 2.
SlpProgram horner_program(std::uint64_t n);

/// Direct Horner evaluation of f(N, x) over any ring.
template <RingLike R>
typename R::value_type horner_reference(std::uint64_t n, const typename R::value_type& x,
                                        R& ring) {
  if (n == 0) throw DomainError("horner_reference: series length must be >= 1");
  auto acc = ring.one(x);
  if (n == 1) return acc;
  acc = ring.add(acc, x);
  for (std::uint64_t k = 2; k < n; ++k) acc = ring.add(ring.one(x), ring.mul(x, acc));
  return acc;
}

template <class T>
T horner_reference(std::uint64_t n, const T& x) {
  ScalarRing<T> ring;
  return horner_reference(n, x, ring);
}

// JSON document (schema version 1):
//   {"version":1,"series_length":N,"output":i,"declared_muls":m,
//    "instrs":[{"op":"INPUT"},{"op":"MUL","a":j,"b":k},...],
//    "provenance":"..."}            provenance is optional
inline constexpr int kSlpSchemaVersion = 1;

struct SlpDocument {
  SlpProgram program;
  std::string provenance;  // empty when absent
};

std::string to_json(const SlpProgram& program, std::string_view provenance = {});
SlpDocument parse_slp_json(std::string_view text);
SlpProgram from_json(std::string_view text);

/// FNV-1a 64 of the canonical JSON (provenance excluded), as 16 hex digits.
std::string plan_hash(const SlpProgram& program);

}  // namespace neumann
