#include "neumann/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace neumann {

// ---------------------------------------------------------------- strategy

Strategy Strategy::mixed(std::vector<std::uint64_t> bases) {
  if (bases.empty()) throw DomainError("mixed strategy needs at least one base");
  std::sort(bases.begin(), bases.end(), std::greater<>());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i] < 2) throw DomainError("mixed bases must be >= 2");
    if (i > 0 && bases[i] == bases[i - 1]) throw DomainError("mixed bases must be distinct");
  }
  return {Kind::Mixed, 0, std::move(bases)};
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  if (s.empty()) throw ParseError("empty " + std::string(what));
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("invalid " + std::string(what) + " '" +
                                             std::string(s) + "'");
    if (v > (UINT64_MAX - 9) / 10) throw ParseError(std::string(what) + " too large");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

Strategy Strategy::parse(std::string_view text) {
  if (text == "auto") return automatic();
  if (text == "binary") return binary();
  if (text == "ternary") return ternary();
  if (text == "recurrence") return recurrence();
  if (text == "direct") return direct();
  if (text.rfind("prime:", 0) == 0) {
    const auto p = parse_u64(text.substr(6), "base");
    if (p < 2) throw DomainError("prime-power base must be >= 2");
    return prime_power(p);
  }
  if (text.rfind("mixed:", 0) == 0) {
    std::vector<std::uint64_t> bases;
    std::string_view rest = text.substr(6);
    while (true) {
      const auto comma = rest.find(',');
      bases.push_back(parse_u64(rest.substr(0, comma), "base"));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return mixed(std::move(bases));
  }
  throw ParseError("unknown strategy '" + std::string(text) + "'");
}

std::string Strategy::to_string() const {
  switch (kind) {
    case Kind::Binary: return "binary";
    case Kind::Ternary: return "ternary";
    case Kind::PrimePower: return "prime:" + std::to_string(base);
    case Kind::Recurrence: return "recurrence";
    case Kind::Auto: return "auto";
    case Kind::Direct: return "direct";
    case Kind::Mixed: {
      std::string s = "mixed:";
      for (std::size_t i = 0; i < bases.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(bases[i]);
      }
      return s;
    }
  }
  return "?";
}

std::string_view level_form_name(LevelForm f) {
  switch (f) {
    case LevelForm::Product: return "product";
    case LevelForm::ShiftXF: return "shift-xf";
    case LevelForm::Shift: return "shift";
    case LevelForm::Complement: return "complement";
  }
  return "?";
}

// ---------------------------------------------------------- power search

namespace {

using PowerSteps = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

struct PowerSearch {
  std::set<std::uint64_t> need;
  std::uint64_t cap = 0;
  long budget = 200000;
  PowerSteps path;

  std::size_t missing(const std::set<std::uint64_t>& have) const {
    std::size_t m = 0;
    for (auto k : need) m += have.count(k) == 0;
    return m;
  }

  bool dfs(std::set<std::uint64_t>& have, unsigned depth) {
    const std::size_t miss = missing(have);
    if (miss == 0) return true;
    if (miss > depth || --budget < 0) return false;
    const bool strict = miss == depth;
    std::vector<std::uint64_t> h(have.begin(), have.end());
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = i; j < h.size(); ++j) {
        const std::uint64_t s = h[i] + h[j];
        if (s > cap || have.count(s)) continue;
        if (strict && !need.count(s)) continue;
        have.insert(s);
        path.emplace_back(h[i], h[j]);
        if (dfs(have, depth - 1)) return true;
        path.pop_back();
        have.erase(s);
      }
    return false;
  }
};

void greedy_power(std::set<std::uint64_t>& have, std::uint64_t k, PowerSteps& steps) {
  if (have.count(k)) return;
  for (auto a : have) {
    if (a >= k) break;
    if (have.count(k - a)) {
      steps.emplace_back(a, k - a);
      have.insert(k);
      return;
    }
  }
  const std::uint64_t a = *std::prev(have.lower_bound(k));
  greedy_power(have, k - a, steps);
  steps.emplace_back(a, k - a);
  have.insert(k);
}

// Short sequence of products x^a * x^b making every needed exponent available.
PowerSteps plan_powers(const std::set<std::uint64_t>& have, const std::set<std::uint64_t>& need) {
  PowerSearch search{need, need.empty() ? 0 : *need.rbegin(), 200000, {}};
  const std::size_t miss = search.missing(have);
  if (miss == 0) return {};
  if (miss <= 8) {
    for (unsigned slack = 0; slack <= 1; ++slack) {
      std::set<std::uint64_t> h = have;
      search.path.clear();
      if (search.dfs(h, static_cast<unsigned>(miss) + slack)) return search.path;
    }
  }
  std::set<std::uint64_t> h = have;
  PowerSteps steps;
  for (auto k : need) greedy_power(h, k, steps);
  return steps;
}

struct LevelContext {
  ProgramBuilder& b;
  Reg x;
  std::map<std::uint64_t, Reg> powers;

  void ensure(const std::set<std::uint64_t>& need) {
    std::set<std::uint64_t> have;
    for (const auto& [k, r] : powers) have.insert(k);
    for (auto [a, c] : plan_powers(have, need)) powers[a + c] = b.mul(powers.at(a), powers.at(c));
  }

  // 1 + X + ... + X^{k-1}; powers 1..k-1 must be present.
  Reg series(std::uint64_t k) {
    Reg acc = b.one();
    for (std::uint64_t i = 1; i < k; ++i) acc = b.add(acc, powers.at(i));
    return acc;
  }
};

std::set<std::uint64_t> range_set(std::uint64_t lo, std::uint64_t hi) {
  std::set<std::uint64_t> s;
  for (std::uint64_t k = lo; k <= hi; ++k) s.insert(k);
  return s;
}

}  // namespace

Reg emit_level(ProgramBuilder& b, Reg x, const EmittedChain& chain, std::uint64_t r,
               LevelForm form, const InnerEmitter* inner) {
  const std::uint64_t p = chain.size;
  if (r >= p) throw DomainError("residue must be smaller than the base");
  LevelContext ctx{b, x, chain.powers};
  ctx.powers[1] = x;
  const Reg f = chain.value;
  const bool has_inner = inner != nullptr;

  switch (form) {
    case LevelForm::Product: {
      if (r != 0) throw DomainError("product form requires residue 0");
      if (!has_inner) return f;
      Reg xp = emit_next_power(b, x, f);
      return b.mul(f, (*inner)(b, xp));
    }
    case LevelForm::ShiftXF: {
      if (r == 0) throw DomainError("shift forms require a nonzero residue");
      if (r >= 2) ctx.ensure(range_set(1, r - 1));
      Reg xf = b.mul(x, f);
      Reg t = r == 1 ? xf : b.mul(ctx.powers.at(r - 1), xf);
      if (has_inner) {
        Reg xp = emit_next_power(b, x, f, xf);
        t = b.mul(t, (*inner)(b, xp));
      }
      return b.add(ctx.series(r), t);
    }
    case LevelForm::Shift: {
      if (r < 2) throw DomainError("shift form requires residue >= 2");
      ctx.ensure(range_set(1, r));
      Reg t = b.mul(ctx.powers.at(r), f);
      if (has_inner) {
        Reg xp = emit_next_power(b, x, f);
        t = b.mul(t, (*inner)(b, xp));
      }
      return b.add(ctx.series(r), t);
    }
    case LevelForm::Complement: {
      if (r == 0 || !has_inner) throw DomainError("complement form requires r > 0 and an inner factor");
      auto need = range_set(1, p - r - 1);
      need.insert(r);
      ctx.ensure(need);
      Reg xp = emit_next_power(b, x, f);
      Reg fg = b.mul(f, (*inner)(b, xp));
      Reg d = b.sub(fg, ctx.series(p - r));
      return b.add(f, b.mul(ctx.powers.at(r), d));
    }
  }
  throw DomainError("unknown level form");
}

namespace {

EmittedChain emit_chain(ProgramBuilder& b, Reg x, const ChainEntry& c) {
  auto map = b.append_mapped(c.program, x);
  EmittedChain e{map[c.program.output().index], c.size, {}};
  for (const auto& [k, reg] : c.powers) e.powers[k] = map[reg.index];
  e.powers[1] = x;
  return e;
}

std::vector<LevelForm> forms_for(std::uint64_t r, bool has_inner) {
  if (r == 0) return {LevelForm::Product};
  std::vector<LevelForm> f{LevelForm::ShiftXF};
  if (r >= 2) f.push_back(LevelForm::Shift);
  if (has_inner) f.push_back(LevelForm::Complement);
  return f;
}

CostModel::Entry cheapest_level(const ChainEntry& chain, std::uint64_t r, bool has_inner) {
  const InnerEmitter identity = [](ProgramBuilder&, Reg xp) { return xp; };
  CostModel::Entry best{std::numeric_limits<unsigned>::max(), LevelForm::Product};
  for (LevelForm form : forms_for(r, has_inner)) {
    ProgramBuilder b;
    EmittedChain c = emit_chain(b, b.input(), chain);
    emit_level(b, b.input(), c, r, form, has_inner ? &identity : nullptr);
    const auto cost = static_cast<unsigned>(b.mul_count());
    if (cost < best.cost) best = {cost, form};
  }
  return best;
}

}  // namespace

// -------------------------------------------------------------- cost model

CostModel CostModel::derive(std::span<const std::uint64_t> bases) {
  CostModel m;
  for (auto p : bases) {
    if (p < 2) throw DomainError("cost model bases must be >= 2");
    if (p > 1024) throw DomainError("cost model bases must be <= 1024");
    if (m.level_.count(p)) continue;
    BaseData d{best_chain(p), {}, {}};
    for (std::uint64_t r = 0; r < p; ++r) {
      d.level.push_back(cheapest_level(d.chain, r, true));
      d.terminal.push_back(cheapest_level(d.chain, r, false));
    }
    m.level_.emplace(p, std::move(d));
  }
  return m;
}

const CostModel& CostModel::standard() {
  static const CostModel model = derive(kDefaultBases);
  return model;
}

const CostModel::Entry& CostModel::entry(std::uint64_t p, std::uint64_t r) const {
  auto it = level_.find(p);
  if (it == level_.end()) throw DomainError("cost model does not cover base " + std::to_string(p));
  return it->second.level.at(r);
}

const CostModel::Entry& CostModel::terminal(std::uint64_t p, std::uint64_t r) const {
  auto it = level_.find(p);
  if (it == level_.end()) throw DomainError("cost model does not cover base " + std::to_string(p));
  return it->second.terminal.at(r);
}

const ChainEntry& CostModel::chain(std::uint64_t p) const {
  auto it = level_.find(p);
  if (it == level_.end()) throw DomainError("cost model does not cover base " + std::to_string(p));
  return it->second.chain;
}

unsigned CostModel::chain_muls(std::uint64_t p) const {
  return static_cast<unsigned>(chain(p).muls);
}

std::vector<std::uint64_t> CostModel::bases() const {
  std::vector<std::uint64_t> out;
  for (const auto& [p, d] : level_) out.push_back(p);
  return out;
}

std::uint64_t select_base(std::uint64_t n, std::span<const std::uint64_t> bases,
                          const CostModel& model, std::uint64_t limit) {
  std::uint64_t best = 0;
  double best_value = 0;
  for (auto p : bases) {
    if (p > limit) continue;
    const double v = model.cost(p, n % p) / std::log2(static_cast<double>(p));
    const bool better = best == 0 || v < best_value - 1e-12 ||
                        (std::abs(v - best_value) <= 1e-12 && p > best);
    if (better) {
      best = p;
      best_value = v;
    }
  }
  return best;
}

// ------------------------------------------------------------------ plans

std::optional<unsigned> exact_log(std::uint64_t n, std::uint64_t p) {
  if (p < 2 || n == 0) return std::nullopt;
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  if (n != 1) return std::nullopt;
  return e;
}

unsigned level_cost_prime(std::uint64_t p) {
  return static_cast<unsigned>(best_chain(p).muls) + 2;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Reg emit_direct_small(ProgramBuilder& b, Reg x, std::uint64_t n) {
  if (n == 1) return b.one();
  if (n == 2) return b.add_one(x);
  return b.add(b.add_one(x), b.mul(x, x));
}

PlanReport finish_report(ProgramBuilder&& b, Reg out, std::uint64_t n, Strategy strategy,
                         std::vector<TraceStep> trace, double predicted) {
  SlpProgram program = std::move(b).finish(out, n);
  const auto muls = program.declared_muls();
  return PlanReport{n, std::move(strategy), std::move(program), muls, predicted, std::move(trace)};
}

PlanReport identity_plan(const Strategy& s) {
  ProgramBuilder b;
  Reg one = b.one();
  return finish_report(std::move(b), one, 1, s, {}, 0.0);
}

std::uint64_t checked_pow(std::uint64_t p, unsigned e) {
  std::uint64_t n = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (n > UINT64_MAX / p) throw DomainError("series length overflows 64 bits");
    n *= p;
  }
  return n;
}

Reg emit_power_levels(ProgramBuilder& b, Reg x, const ChainEntry& chain, unsigned e,
                      std::uint64_t n, std::vector<TraceStep>& trace) {
  if (e == 1) {
    trace.push_back({n, chain.size, 0});
    return b.append(chain.program, x);
  }
  trace.push_back({n, chain.size, 0});
  EmittedChain f = emit_chain(b, x, chain);
  const InnerEmitter inner = [&](ProgramBuilder& bb, Reg xp) {
    return emit_power_levels(bb, xp, chain, e - 1, n / chain.size, trace);
  };
  return emit_level(b, x, f, 0, LevelForm::Product, &inner);
}

PlanReport plan_chain_power(const ChainEntry& chain, unsigned e, Strategy strategy,
                            double predicted) {
  if (e == 0 || chain.size == 1) return identity_plan(strategy);
  const std::uint64_t n = checked_pow(chain.size, e);
  ProgramBuilder b;
  std::vector<TraceStep> trace;
  Reg out = emit_power_levels(b, b.input(), chain, e, n, trace);
  return finish_report(std::move(b), out, n, std::move(strategy), std::move(trace), predicted);
}

struct MixedEmitter {
  std::span<const std::uint64_t> bases;
  const CostModel& model;
  std::vector<TraceStep>& trace;

  Reg emit(ProgramBuilder& b, Reg x, std::uint64_t n) {
    if (n <= 3) return emit_direct_small(b, x, n);
    const std::uint64_t p = select_base(n, bases, model, n);
    if (p == 0) return b.append(best_chain(n).program, x);
    const std::uint64_t r = n % p, m = n / p;
    trace.push_back({n, p, r});
    EmittedChain f = emit_chain(b, x, model.chain(p));
    if (m == 1) return emit_level(b, x, f, r, model.terminal(p, r).form, nullptr);
    const InnerEmitter inner = [this, m](ProgramBuilder& bb, Reg xp) { return emit(bb, xp, m); };
    return emit_level(b, x, f, r, model.entry(p, r).form, &inner);
  }
};

const CostModel& model_for(std::span<const std::uint64_t> bases) {
  thread_local std::map<std::vector<std::uint64_t>, CostModel> cache;
  std::vector<std::uint64_t> key(bases.begin(), bases.end());
  std::sort(key.begin(), key.end());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, CostModel::derive(key)).first;
  return it->second;
}

double log_base(double n, double p) { return std::log(n) / std::log(p); }

}  // namespace

SlpProgram compose(const SlpProgram& left, const SlpProgram& right,
                   std::optional<Reg> power_of_x_k) {
  const std::uint64_t k = left.series_length(), j = right.series_length();
  if (k == 1) return right;
  if (j == 1) return left;
  if (k > UINT64_MAX / j) throw DomainError("compose: series length overflows 64 bits");
  if (power_of_x_k && power_of_x_k->index >= left.size())
    throw StructuralError("compose: power register out of range");
  ProgramBuilder b;
  auto map = b.append_mapped(left, b.input());
  Reg f = map[left.output().index];
  Reg xk = power_of_x_k ? map[power_of_x_k->index] : emit_next_power(b, b.input(), f);
  Reg g = b.append(right, xk);
  return std::move(b).finish(b.mul(f, g), k * j);
}

PlanReport plan_prime_power(std::uint64_t p, unsigned e) {
  if (p < 2) throw DomainError("prime-power base must be >= 2");
  const Strategy s = Strategy::prime_power(p);
  if (e == 0) return identity_plan(s);
  const ChainEntry chain = best_chain(p);
  const double predicted = (static_cast<double>(chain.muls) + 2) * e - 2;
  return plan_chain_power(chain, e, s, predicted);
}

PlanReport plan_mixed(std::uint64_t n, std::span<const std::uint64_t> bases,
                      const CostModel& model) {
  if (n == 0) throw DomainError("series length must be >= 1");
  Strategy s = Strategy::mixed(std::vector<std::uint64_t>(bases.begin(), bases.end()));
  for (auto p : s.bases)
    if (!model.covers(p)) throw DomainError("cost model does not cover base " + std::to_string(p));
  ProgramBuilder b;
  std::vector<TraceStep> trace;
  MixedEmitter em{s.bases, model, trace};
  Reg out = em.emit(b, b.input(), n);
  double predicted = kNaN;
  if (s.bases.size() == 1 && (s.bases[0] == 2 || s.bases[0] == 3))
    predicted = predicted_cost(s.bases[0] == 2 ? Strategy::binary() : Strategy::ternary(), n);
  return finish_report(std::move(b), out, n, std::move(s), std::move(trace), predicted);
}

PlanReport plan_mixed(std::uint64_t n, std::span<const std::uint64_t> bases) {
  return plan_mixed(n, bases, model_for(bases));
}

PlanReport plan_binary(std::uint64_t n) {
  static const std::vector<std::uint64_t> two{2};
  PlanReport r = plan_mixed(n, two);
  r.strategy = Strategy::binary();
  return r;
}

PlanReport plan_ternary(std::uint64_t n) {
  static const std::vector<std::uint64_t> three{3};
  PlanReport r = plan_mixed(n, three);
  r.strategy = Strategy::ternary();
  return r;
}

PlanReport plan_recurrence(std::uint64_t n) {
  if (n == 0) throw DomainError("series length must be >= 1");
  if (n == 1) return identity_plan(Strategy::recurrence());
  std::optional<PlanReport> best;
  for (unsigned k = kMaxRecurrenceIndex; k >= 1; --k) {
    const auto e = exact_log(n, recurrence_value(k));
    if (!e) continue;
    const double predicted = std::ldexp(1.0, static_cast<int>(k)) * *e - 2;
    PlanReport r = plan_chain_power(recurrence_chain(k), *e, Strategy::recurrence(), predicted);
    if (!best || r.muls < best->muls) best = std::move(r);
  }
  if (!best)
    throw DomainError("recurrence strategy needs a power of 2, 5, 26, 677, 458330 or 210066388901");
  return std::move(*best);
}

PlanReport plan_direct(std::uint64_t n) {
  if (n == 0) throw DomainError("series length must be >= 1");
  SlpProgram program = horner_program(n);
  const auto muls = program.declared_muls();
  return PlanReport{n, Strategy::direct(), std::move(program), muls,
                    predicted_cost(Strategy::direct(), n), {}};
}

// ---------------------------------------------------------- factor search

namespace {

class FactorSearch {
 public:
  explicit FactorSearch(const CostModel& model) : model_(model) {}

  unsigned best(std::uint64_t n) { return decide(n).cost; }

  Reg emit(ProgramBuilder& b, Reg x, std::uint64_t n, std::vector<TraceStep>& trace) {
    const Decision d = decide(n);
    switch (d.kind) {
      case Kind::Direct:
        return emit_direct_small(b, x, n);
      case Kind::Table: {
        trace.push_back({n, d.p, d.r});
        EmittedChain f = emit_chain(b, x, model_.chain(d.p));
        const std::uint64_t m = n / d.p;
        if (m == 1) return emit_level(b, x, f, d.r, model_.terminal(d.p, d.r).form, nullptr);
        const InnerEmitter inner = [&, m](ProgramBuilder& bb, Reg xp) {
          return emit(bb, xp, m, trace);
        };
        return emit_level(b, x, f, d.r, model_.entry(d.p, d.r).form, &inner);
      }
      case Kind::Generic: {
        trace.push_back({n, d.p, d.r});
        std::vector<TraceStep> side;  // the factor's own reduction is not on the main path
        EmittedChain f{emit(b, x, d.p, side), d.p, {{1, x}}};
        const std::uint64_t m = (n - d.r) / d.p;
        const LevelForm form = d.r == 0 ? LevelForm::Product : LevelForm::ShiftXF;
        if (m == 1) return emit_level(b, x, f, d.r, form, nullptr);
        const InnerEmitter inner = [&, m](ProgramBuilder& bb, Reg xp) {
          return emit(bb, xp, m, trace);
        };
        return emit_level(b, x, f, d.r, form, &inner);
      }
    }
    throw DomainError("factor search: bad decision");
  }

 private:
  enum class Kind { Direct, Table, Generic };
  struct Decision {
    Kind kind;
    std::uint64_t p;
    std::uint64_t r;
    unsigned cost;
  };

  Decision decide(std::uint64_t n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    Decision best{Kind::Direct, 0, 0, n == 3 ? 1u : 0u};
    if (n > 3) {
      best.cost = std::numeric_limits<unsigned>::max();
      for (auto p : kDefaultBases) {
        if (p > n) continue;
        const std::uint64_t r = n % p, m = n / p;
        const unsigned c = m == 1 ? model_.terminal(p, r).cost : model_.cost(p, r) + best_of(m);
        if (c < best.cost) best = {Kind::Table, p, r, c};
      }
      for (std::uint64_t k = 2; k <= n / k; ++k)
        for (std::uint64_t r = 0; r <= 1; ++r) {
          if ((n - r) % k != 0) continue;
          const std::uint64_t j = (n - r) / k;
          const unsigned c = j == 1 ? best_of(k) + static_cast<unsigned>(r)
                                    : best_of(k) + 2 + best_of(j);
          if (c < best.cost) best = {Kind::Generic, k, r, c};
        }
    }
    memo_.emplace(n, best);
    return best;
  }

  unsigned best_of(std::uint64_t n) { return decide(n).cost; }

  const CostModel& model_;
  std::unordered_map<std::uint64_t, Decision> memo_;
};

}  // namespace

PlanReport plan_factor_search(std::uint64_t n) {
  if (n == 0) throw DomainError("series length must be >= 1");
  FactorSearch search(CostModel::standard());
  ProgramBuilder b;
  std::vector<TraceStep> trace;
  Reg out = search.emit(b, b.input(), n, trace);
  return finish_report(std::move(b), out, n, Strategy::automatic(), std::move(trace), kNaN);
}

PlanReport plan_auto(std::uint64_t n) {
  if (n == 0) throw DomainError("series length must be >= 1");
  if (n == 1) return identity_plan(Strategy::automatic());
  std::optional<PlanReport> best;
  auto consider = [&](PlanReport&& r) {
    if (!best || r.muls < best->muls) best = std::move(r);
  };
  for (auto p : {2, 3, 5, 7, 11})
    if (auto e = exact_log(n, static_cast<std::uint64_t>(p))) {
      PlanReport r = plan_prime_power(static_cast<std::uint64_t>(p), *e);
      if (p == 2) r.strategy = Strategy::binary();
      if (p == 3) r.strategy = Strategy::ternary();
      consider(std::move(r));
    }
  for (unsigned k = 1; k <= kMaxRecurrenceIndex; ++k)
    if (exact_log(n, recurrence_value(k))) {
      consider(plan_recurrence(n));
      break;
    }
  consider(plan_mixed(n, kDefaultBases, CostModel::standard()));
  consider(plan_factor_search(n));
  return std::move(*best);
}

PlanReport plan(std::uint64_t n, const Strategy& strategy) {
  switch (strategy.kind) {
    case Strategy::Kind::Binary: return plan_binary(n);
    case Strategy::Kind::Ternary: return plan_ternary(n);
    case Strategy::Kind::Mixed: return plan_mixed(n, strategy.bases);
    case Strategy::Kind::Recurrence: return plan_recurrence(n);
    case Strategy::Kind::Auto: return plan_auto(n);
    case Strategy::Kind::Direct: return plan_direct(n);
    case Strategy::Kind::PrimePower: {
      const auto e = exact_log(n, strategy.base);
      if (!e)
        throw DomainError(std::to_string(n) + " is not a power of " + std::to_string(strategy.base));
      return plan_prime_power(strategy.base, *e);
    }
  }
  throw DomainError("unknown strategy");
}

double predicted_cost(const Strategy& strategy, std::uint64_t n) {
  if (n == 0) throw DomainError("series length must be >= 1");
  if (n == 1) return 0.0;
  const double x = static_cast<double>(n);
  switch (strategy.kind) {
    case Strategy::Kind::Binary: return 2 * std::log2(x) - 2;
    case Strategy::Kind::Ternary: return 3 * log_base(x, 3) - 2;
    case Strategy::Kind::PrimePower:
      return level_cost_prime(strategy.base) * log_base(x, static_cast<double>(strategy.base)) - 2;
    case Strategy::Kind::Direct: return x - 2;
    case Strategy::Kind::Recurrence:
      for (unsigned k = kMaxRecurrenceIndex; k >= 1; --k) {
        const auto y = recurrence_value(k);
        if (exact_log(n, y))
          return std::ldexp(1.0, static_cast<int>(k)) * log_base(x, static_cast<double>(y)) - 2;
      }
      throw DomainError("recurrence prediction needs a power of some y_k");
    case Strategy::Kind::Mixed:
    case Strategy::Kind::Auto:
      throw DomainError("no closed form for strategy " + strategy.to_string() +
                        "; use the markov coefficient");
  }
  throw DomainError("unknown strategy");
}

}  // namespace neumann
