#include "neumann/slp.hpp"

#include <cstdio>
#include <json.hpp>

namespace neumann {

using json = nlohmann::ordered_json;

std::string_view op_name(Op op) {
  switch (op) {
    case Op::One: return "ONE";
    case Op::Input: return "INPUT";
    case Op::Add: return "ADD";
    case Op::Sub: return "SUB";
    case Op::Mul: return "MUL";
  }
  return "?";
}

namespace {

bool is_binary(Op op) { return op == Op::Add || op == Op::Sub || op == Op::Mul; }

Op parse_op(const std::string& s) {
  if (s == "ONE") return Op::One;
  if (s == "INPUT") return Op::Input;
  if (s == "ADD") return Op::Add;
  if (s == "SUB") return Op::Sub;
  if (s == "MUL") return Op::Mul;
  throw ParseError("unknown opcode '" + s + "'");
}

}  // namespace

SlpProgram::SlpProgram(std::vector<Instr> instrs, Reg output, std::uint64_t series_length)
    : instrs_(std::move(instrs)), output_(output), series_length_(series_length) {
  if (instrs_.empty()) throw StructuralError("program has no instructions");
  if (instrs_.size() > std::numeric_limits<std::uint32_t>::max() - 1)
    throw StructuralError("program too large");
  if (series_length_ == 0) throw StructuralError("series length must be >= 1");
  if (output_.index >= instrs_.size())
    throw StructuralError("output register " + std::to_string(output_.index) + " out of range");

  std::size_t inputs = 0;
  const auto n = static_cast<std::uint32_t>(instrs_.size());
  last_use_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    last_use_[i] = i;
    const Instr& in = instrs_[i];
    if (in.op == Op::Input) {
      ++inputs;
      input_ = Reg{i};
    } else if (is_binary(in.op)) {
      if (in.a >= i || in.b >= i)
        throw StructuralError("instruction " + std::to_string(i) +
                              " reads a register that is not yet defined");
      last_use_[in.a] = i;
      last_use_[in.b] = i;
      if (in.op == Op::Mul) ++declared_muls_;
      else ++add_count_;
    }
  }
  if (inputs != 1)
    throw StructuralError("program must contain exactly one INPUT, found " +
                          std::to_string(inputs));
  last_use_[output_.index] = n;
}

std::uint64_t mul_count(const SlpProgram& program) {
  std::uint64_t muls = 0;
  for (const auto& in : program.instrs())
    if (in.op == Op::Mul) ++muls;
  return muls;
}

SlpProgram eliminate_dead_code(const SlpProgram& program) {
  const auto& code = program.instrs();
  std::vector<bool> live(code.size(), false);
  live[program.output().index] = true;
  live[program.input().index] = true;
  for (std::size_t i = code.size(); i-- > 0;) {
    if (!live[i] || !is_binary(code[i].op)) continue;
    live[code[i].a] = true;
    live[code[i].b] = true;
  }
  std::vector<std::uint32_t> remap(code.size(), 0);
  std::vector<Instr> out;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (!live[i]) continue;
    Instr in = code[i];
    if (is_binary(in.op)) {
      in.a = remap[in.a];
      in.b = remap[in.b];
    }
    remap[i] = static_cast<std::uint32_t>(out.size());
    out.push_back(in);
  }
  return SlpProgram(std::move(out), Reg{remap[program.output().index]},
                    program.series_length());
}

ProgramBuilder::ProgramBuilder() { instrs_.push_back(Instr{Op::Input}); }

Reg ProgramBuilder::push(Instr instr) {
  instrs_.push_back(instr);
  return Reg{static_cast<std::uint32_t>(instrs_.size() - 1)};
}

Reg ProgramBuilder::one() {
  if (!one_) one_ = push(Instr{Op::One});
  return *one_;
}

Reg ProgramBuilder::add(Reg a, Reg b) { return push(Instr{Op::Add, a.index, b.index}); }
Reg ProgramBuilder::sub(Reg a, Reg b) { return push(Instr{Op::Sub, a.index, b.index}); }

Reg ProgramBuilder::mul(Reg a, Reg b) {
  ++muls_;
  return push(Instr{Op::Mul, a.index, b.index});
}

Reg ProgramBuilder::append(const SlpProgram& program, Reg x) {
  return append_mapped(program, x)[program.output().index];
}

std::vector<Reg> ProgramBuilder::append_mapped(const SlpProgram& program, Reg x) {
  const auto& code = program.instrs();
  std::vector<Reg> map(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Instr& in = code[i];
    switch (in.op) {
      case Op::One: map[i] = one(); break;
      case Op::Input: map[i] = x; break;
      case Op::Add: map[i] = add(map[in.a], map[in.b]); break;
      case Op::Sub: map[i] = sub(map[in.a], map[in.b]); break;
      case Op::Mul: map[i] = mul(map[in.a], map[in.b]); break;
    }
  }
  return map;
}

SlpProgram ProgramBuilder::finish(Reg output, std::uint64_t series_length) && {
  return SlpProgram(std::move(instrs_), output, series_length);
}

SlpProgram horner_program(std::uint64_t n) {
  if (n == 0) throw DomainError("horner_program: series length must be >= 1");
  ProgramBuilder b;
  Reg x = b.input();
  Reg acc = b.one();
  if (n >= 2) acc = b.add(acc, x);
  for (std::uint64_t k = 2; k < n; ++k) acc = b.add(b.one(), b.mul(x, acc));
  return std::move(b).finish(acc, n);
}

std::string to_json(const SlpProgram& program, std::string_view provenance) {
  json doc;
  doc["version"] = kSlpSchemaVersion;
  doc["series_length"] = program.series_length();
  doc["output"] = program.output().index;
  doc["declared_muls"] = program.declared_muls();
  json instrs = json::array();
  for (const auto& in : program.instrs()) {
    json j;
    j["op"] = std::string(op_name(in.op));
    if (is_binary(in.op)) {
      j["a"] = in.a;
      j["b"] = in.b;
    }
    instrs.push_back(std::move(j));
  }
  doc["instrs"] = std::move(instrs);
  if (!provenance.empty()) doc["provenance"] = std::string(provenance);
  return doc.dump();
}

SlpDocument parse_slp_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed plan JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("plan JSON must be an object");
    const int version = doc.at("version").get<int>();
    if (version != kSlpSchemaVersion)
      throw ParseError("unsupported plan schema version " + std::to_string(version));
    std::vector<Instr> instrs;
    for (const auto& j : doc.at("instrs")) {
      Instr in{parse_op(j.at("op").get<std::string>())};
      if (is_binary(in.op)) {
        in.a = j.at("a").get<std::uint32_t>();
        in.b = j.at("b").get<std::uint32_t>();
      }
      instrs.push_back(in);
    }
    SlpProgram program(std::move(instrs), Reg{doc.at("output").get<std::uint32_t>()},
                       doc.at("series_length").get<std::uint64_t>());
    if (doc.contains("declared_muls") &&
        doc["declared_muls"].get<std::uint64_t>() != program.declared_muls())
      throw StructuralError("declared_muls does not match the instruction list");
    std::string provenance;
    if (doc.contains("provenance")) provenance = doc["provenance"].get<std::string>();
    return SlpDocument{std::move(program), std::move(provenance)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid plan JSON: ") + e.what());
  }
}

SlpProgram from_json(std::string_view text) { return parse_slp_json(text).program; }

std::string plan_hash(const SlpProgram& program) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(program)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace neumann
