#include "doctest.h"

#include <random>

#include "neumann/error.hpp"
#include "neumann/planner.hpp"
#include "neumann/slp.hpp"

using namespace neumann;

TEST_SUITE("slp") {

TEST_CASE("builder emits input first and caches one") {
  ProgramBuilder b;
  const Reg one_a = b.one();
  const Reg one_b = b.one();
  CHECK(one_a == one_b);
  const Reg sq = b.mul(b.input(), b.input());
  const Reg out = b.add(sq, one_a);
  const SlpProgram p = std::move(b).finish(out, 3);
  CHECK(p.instrs()[0].op == Op::Input);
  CHECK(p.declared_muls() == 1);
  CHECK(p.add_count() == 1);
  CHECK(eval(p, 3L) == 10);
}

TEST_CASE("validation rejects malformed programs") {
  CHECK_THROWS_AS(SlpProgram({}, Reg{0}, 1), StructuralError);
  CHECK_THROWS_AS(SlpProgram({{Op::Input, 0, 0}}, Reg{1}, 1), StructuralError);
  CHECK_THROWS_AS(SlpProgram({{Op::Input, 0, 0}}, Reg{0}, 0), StructuralError);
  // forward reference
  CHECK_THROWS_AS(SlpProgram({{Op::Input, 0, 0}, {Op::Mul, 0, 2}, {Op::One, 0, 0}}, Reg{1}, 2),
                  StructuralError);
  // no input, two inputs
  CHECK_THROWS_AS(SlpProgram({{Op::One, 0, 0}}, Reg{0}, 1), StructuralError);
  CHECK_THROWS_AS(SlpProgram({{Op::Input, 0, 0}, {Op::Input, 0, 0}}, Reg{0}, 1), StructuralError);
}

TEST_CASE("horner uses N-2 multiplications") {
  CHECK(horner_program(1).declared_muls() == 0);
  CHECK(horner_program(2).declared_muls() == 0);
  for (std::uint64_t n = 3; n <= 40; ++n) CHECK(horner_program(n).declared_muls() == n - 2);
  CHECK_THROWS_AS(horner_program(0), DomainError);
}

TEST_CASE("scalar evaluation matches the geometric sum") {
  for (std::uint64_t n = 1; n <= 20; ++n) {
    long expect = 0, pw = 1;
    for (std::uint64_t k = 0; k < n; ++k, pw *= 2) expect += pw;
    CHECK(eval(horner_program(n), 2L) == expect);
    CHECK(horner_reference(n, 2L) == expect);
    CHECK(eval(plan_auto(n).program, 2L) == expect);
  }
}

TEST_CASE("instrumented ring counts exactly the declared products") {
  for (std::uint64_t n : {5u, 9u, 26u, 125u, 677u, 1000u}) {
    const SlpProgram p = plan_auto(n).program;
    ScalarRing<double> ring;
    (void)eval(p, 0.5, ring);
    CHECK(ring.muls == p.declared_muls());
    CHECK(mul_count(p) == p.declared_muls());
  }
}

TEST_CASE("dead code elimination keeps semantics and never adds products") {
  ProgramBuilder b;
  const Reg x = b.input();
  b.mul(x, x);  // unused
  const Reg out = b.add(b.one(), x);
  const SlpProgram p = std::move(b).finish(out, 2);
  const SlpProgram q = eliminate_dead_code(p);
  CHECK(p.declared_muls() == 1);
  CHECK(q.declared_muls() == 0);
  CHECK(eval(q, 7L) == 8);
}

TEST_CASE("json round trip and hash") {
  const SlpProgram p = plan_auto(11).program;
  const std::string text = to_json(p, "TABLE1");
  const SlpDocument doc = parse_slp_json(text);
  CHECK(doc.program == p);
  CHECK(doc.provenance == "TABLE1");
  CHECK(plan_hash(p) == plan_hash(doc.program));
  CHECK(plan_hash(p).size() == 16);
  CHECK(plan_hash(p) != plan_hash(horner_program(11)));
  // provenance does not change the hash input
  CHECK(to_json(from_json(text)) == to_json(p));
}

TEST_CASE("json rejects bad documents") {
  CHECK_THROWS_AS(from_json("not json"), ParseError);
  CHECK_THROWS_AS(from_json("[]"), ParseError);
  CHECK_THROWS_AS(from_json(R"({"version":2,"series_length":1,"output":0,"instrs":[{"op":"INPUT"}]})"),
                  ParseError);
  CHECK_THROWS_AS(from_json(R"({"version":1,"series_length":1,"output":0,"instrs":[{"op":"POW"}]})"),
                  ParseError);
  CHECK_THROWS_AS(
      from_json(R"({"version":1,"series_length":2,"output":1,"declared_muls":3,
                   "instrs":[{"op":"INPUT"},{"op":"MUL","a":0,"b":0}]})"),
      StructuralError);
}

TEST_CASE("property: random programs agree between eval and a naive interpreter") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    ProgramBuilder b;
    std::vector<Reg> regs{b.input(), b.one()};
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) {
      const Reg a = regs[rng() % regs.size()], c = regs[rng() % regs.size()];
      switch (rng() % 3) {
        case 0: regs.push_back(b.add(a, c)); break;
        case 1: regs.push_back(b.sub(a, c)); break;
        default: regs.push_back(b.mul(a, c)); break;
      }
    }
    const SlpProgram p = std::move(b).finish(regs.back(), 1);
    // naive: keep every register
    std::vector<long double> v(p.size());
    const long double x = 0.75L;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Instr& in = p.instrs()[i];
      switch (in.op) {
        case Op::One: v[i] = 1; break;
        case Op::Input: v[i] = x; break;
        case Op::Add: v[i] = v[in.a] + v[in.b]; break;
        case Op::Sub: v[i] = v[in.a] - v[in.b]; break;
        case Op::Mul: v[i] = v[in.a] * v[in.b]; break;
      }
    }
    CHECK(eval(p, x) == v[p.output().index]);
    CHECK(from_json(to_json(p)) == p);
  }
}

}
