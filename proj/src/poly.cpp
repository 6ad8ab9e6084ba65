#include "neumann/poly.hpp"

#include <sstream>

namespace neumann {

namespace {

struct Overflow {};

// Coefficient arithmetic policies.
struct SmallOps {
  using C = std::int64_t;
  static bool zero(C v) { return v == 0; }
  static void add_to(C& acc, const C& v) {
    if (__builtin_add_overflow(acc, v, &acc)) throw Overflow{};
  }
  static void sub_from(C& acc, const C& v) {
    if (__builtin_sub_overflow(acc, v, &acc)) throw Overflow{};
  }
  static void add_product(C& acc, const C& x, const C& y) {
    C p;
    if (__builtin_mul_overflow(x, y, &p)) throw Overflow{};
    add_to(acc, p);
  }
};

struct BigOps {
  using C = mpz_class;
  static bool zero(const C& v) { return sgn(v) == 0; }
  static void add_to(C& acc, const C& v) { acc += v; }
  static void sub_from(C& acc, const C& v) { acc -= v; }
  static void add_product(C& acc, const C& x, const C& y) {
    mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  }
};

template <class Ops>
struct Arith {
  using C = typename Ops::C;
  using Vec = std::vector<C>;

  static void trim(Vec& v) {
    while (!v.empty() && Ops::zero(v.back())) v.pop_back();
  }

  static Vec add(const Vec& a, const Vec& b) {
    Vec out(std::max(a.size(), b.size()), C(0));
    for (std::size_t i = 0; i < a.size(); ++i) Ops::add_to(out[i], a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) Ops::add_to(out[i], b[i]);
    trim(out);
    return out;
  }

  static Vec sub(const Vec& a, const Vec& b) {
    Vec out(std::max(a.size(), b.size()), C(0));
    for (std::size_t i = 0; i < a.size(); ++i) Ops::add_to(out[i], a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) Ops::sub_from(out[i], b[i]);
    trim(out);
    return out;
  }

  // Iterates only over nonzero terms; substituted inputs such as x^P are
  // very sparse.
  static Vec mul(const Vec& a, const Vec& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() + b.size() - 2 > kOracleMaxDegree)
      throw DomainError("polynomial oracle: intermediate degree exceeds limit");
    std::vector<std::size_t> na, nb;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!Ops::zero(a[i])) na.push_back(i);
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!Ops::zero(b[j])) nb.push_back(j);
    Vec out(a.size() + b.size() - 1, C(0));
    for (std::size_t i : na)
      for (std::size_t j : nb) Ops::add_product(out[i + j], a[i], b[j]);
    trim(out);
    return out;
  }

  static std::vector<Vec> eval_all(const SlpProgram& program) {
    const auto& code = program.instrs();
    std::vector<Vec> regs(code.size());
    for (std::size_t i = 0; i < code.size(); ++i) {
      const Instr& in = code[i];
      switch (in.op) {
        case Op::One: regs[i] = Vec{C(1)}; break;
        case Op::Input: regs[i] = Vec{C(0), C(1)}; break;
        case Op::Add: regs[i] = add(regs[in.a], regs[in.b]); break;
        case Op::Sub: regs[i] = sub(regs[in.a], regs[in.b]); break;
        case Op::Mul: regs[i] = mul(regs[in.a], regs[in.b]); break;
      }
    }
    return regs;
  }

  static Vec eval_output(const SlpProgram& program) {
    const auto& code = program.instrs();
    const auto& last = program.last_use();
    std::vector<Vec> regs(code.size());
    for (std::uint32_t i = 0; i < code.size(); ++i) {
      const Instr& in = code[i];
      switch (in.op) {
        case Op::One: regs[i] = Vec{C(1)}; break;
        case Op::Input: regs[i] = Vec{C(0), C(1)}; break;
        case Op::Add: regs[i] = add(regs[in.a], regs[in.b]); break;
        case Op::Sub: regs[i] = sub(regs[in.a], regs[in.b]); break;
        case Op::Mul: regs[i] = mul(regs[in.a], regs[in.b]); break;
      }
      if (in.op == Op::Add || in.op == Op::Sub || in.op == Op::Mul) {
        if (last[in.a] == i) Vec().swap(regs[in.a]);
        if (last[in.b] == i) Vec().swap(regs[in.b]);
      }
    }
    return std::move(regs[program.output().index]);
  }
};

using Small = Arith<SmallOps>;
using Big = Arith<BigOps>;

void check_size(const SlpProgram& program) {
  if (program.series_length() > kOracleMaxDegree)
    throw DomainError("polynomial oracle: series length " +
                      std::to_string(program.series_length()) + " exceeds limit");
}

std::vector<mpz_class> widen(const std::vector<std::int64_t>& v) {
  std::vector<mpz_class> out;
  out.reserve(v.size());
  for (auto c : v) out.emplace_back(static_cast<long>(c));
  return out;
}

}  // namespace

DensePoly::DensePoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

void DensePoly::trim() { Big::trim(c_); }

DensePoly DensePoly::constant(long c) { return DensePoly({mpz_class(c)}); }

DensePoly DensePoly::monomial(std::uint64_t degree) {
  std::vector<mpz_class> c(degree + 1, mpz_class(0));
  c[degree] = 1;
  return DensePoly(std::move(c));
}

DensePoly DensePoly::series(std::uint64_t n) {
  return DensePoly(std::vector<mpz_class>(n, mpz_class(1)));
}

bool DensePoly::is_series(std::uint64_t n) const {
  if (c_.size() != n) return false;
  for (const auto& c : c_)
    if (c != 1) return false;
  return true;
}

mpz_class DensePoly::evaluate(const mpz_class& x) const {
  mpz_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

std::string DensePoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || c_[i] != 1) os << c_[i].get_str();
    if (i > 0) {
      if (c_[i] != 1) os << '*';
      os << 'x';
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

DensePoly operator+(const DensePoly& a, const DensePoly& b) {
  return DensePoly(Big::add(a.c_, b.c_));
}
DensePoly operator-(const DensePoly& a, const DensePoly& b) {
  return DensePoly(Big::sub(a.c_, b.c_));
}
DensePoly operator*(const DensePoly& a, const DensePoly& b) {
  return DensePoly(Big::mul(a.c_, b.c_));
}

DensePoly eval_poly_oracle(const SlpProgram& program) {
  check_size(program);
  try {
    return DensePoly(widen(Small::eval_output(program)));
  } catch (const Overflow&) {
    return DensePoly(Big::eval_output(program));
  }
}

bool oracle_check(const SlpProgram& program) {
  check_size(program);
  const std::uint64_t n = program.series_length();
  try {
    auto out = Small::eval_output(program);
    if (out.size() != n) return false;
    for (auto c : out)
      if (c != 1) return false;
    return true;
  } catch (const Overflow&) {
    return DensePoly(Big::eval_output(program)).is_series(n);
  }
}

std::map<std::uint64_t, Reg> monomial_registers(const SlpProgram& program) {
  check_size(program);
  std::map<std::uint64_t, Reg> found;
  auto scan = [&](const auto& regs) {
    for (std::size_t i = 0; i < regs.size(); ++i) {
      const auto& v = regs[i];
      if (v.size() < 2 || v.back() != 1) continue;
      bool mono = true;
      for (std::size_t k = 0; k + 1 < v.size(); ++k)
        if (v[k] != 0) {
          mono = false;
          break;
        }
      if (mono) found.emplace(v.size() - 1, Reg{static_cast<std::uint32_t>(i)});
    }
  };
  try {
    scan(Small::eval_all(program));
  } catch (const Overflow&) {
    found.clear();
    scan(Big::eval_all(program));
  }
  return found;
}

}  // namespace neumann
