#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neumann/chains.hpp"
#include "neumann/slp.hpp"

namespace neumann {

struct Strategy {
  enum class Kind { Binary, Ternary, PrimePower, Mixed, Recurrence, Auto, Direct };

  Kind kind = Kind::Auto;
  std::uint64_t base = 0;            // PrimePower only
  std::vector<std::uint64_t> bases;  // Mixed only, descending

  static Strategy binary() { return {Kind::Binary, 0, {}}; }
  static Strategy ternary() { return {Kind::Ternary, 0, {}}; }
  static Strategy prime_power(std::uint64_t p) { return {Kind::PrimePower, p, {}}; }
  static Strategy mixed(std::vector<std::uint64_t> bases);
  static Strategy recurrence() { return {Kind::Recurrence, 0, {}}; }
  static Strategy automatic() { return {Kind::Auto, 0, {}}; }
  static Strategy direct() { return {Kind::Direct, 0, {}}; }

  /// Accepts auto, binary, ternary, prime:P, mixed:11,7,5,3,2, recurrence, direct.
  static Strategy parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

inline const std::vector<std::uint64_t> kDefaultBases{11, 7, 5, 3, 2};

/// How one reduction level N = P*M + r is assembled from F = f(P, X) and
/// G = f(M, X^P).
enum class LevelForm {
  Product,     // r = 0: F*G
  ShiftXF,     // f(r) + X^{r-1} * (X*F) * G; X^P comes free from X*F
  Shift,       // f(r) + (X^r * F) * G
  Complement,  // F + X^r * (F*G - f(P-r))
};

std::string_view level_form_name(LevelForm f);

/// F already emitted into a builder, with the pure powers of X available.
struct EmittedChain {
  Reg value;
  std::uint64_t size = 1;
  std::map<std::uint64_t, Reg> powers;  // must contain 1 -> X
};

/// Emits G = f(M, X^P) given the register holding X^P.
using InnerEmitter = std::function<Reg(ProgramBuilder&, Reg)>;

/// Emits one level f(P*M + r, X). When `inner` is null the level is
/// terminal (M = 1): no combine and no next power.
Reg emit_level(ProgramBuilder& b, Reg x, const EmittedChain& chain, std::uint64_t r,
               LevelForm form, const InnerEmitter* inner);

/// Per-(base, residue) multiplication counts obtained by emitting every
/// level form and keeping the cheapest. Costs include the chain for f(P, x)
/// and the combine and next-power steps but not G itself.
class CostModel {
 public:
  struct Entry {
    unsigned cost = 0;
    LevelForm form = LevelForm::Product;
  };

  static CostModel derive(std::span<const std::uint64_t> bases);
  /// Derived model for the default bases {11, 7, 5, 3, 2}, computed once.
  static const CostModel& standard();

  bool covers(std::uint64_t p) const { return level_.count(p) != 0; }
  unsigned cost(std::uint64_t p, std::uint64_t r) const { return entry(p, r).cost; }
  const Entry& entry(std::uint64_t p, std::uint64_t r) const;
  /// Level with M = 1: N = P + r.
  const Entry& terminal(std::uint64_t p, std::uint64_t r) const;
  unsigned chain_muls(std::uint64_t p) const;
  const ChainEntry& chain(std::uint64_t p) const;
  /// Multiplications saved at the last level of a prime-power plan.
  static constexpr int terminal_credit() { return 2; }

  std::vector<std::uint64_t> bases() const;

 private:
  struct BaseData {
    ChainEntry chain;
    std::vector<Entry> level;
    std::vector<Entry> terminal;
  };
  std::map<std::uint64_t, BaseData> level_;
};

/// Mixed-basis selection: the base P <= limit minimizing cost(P, n mod P)/log2 P,
/// ties to the larger base. Returns 0 when no base qualifies.
std::uint64_t select_base(std::uint64_t n, std::span<const std::uint64_t> bases,
                          const CostModel& model,
                          std::uint64_t limit = UINT64_MAX);

struct TraceStep {
  std::uint64_t n;
  std::uint64_t base;
  std::uint64_t residue;
};

struct PlanReport {
  std::uint64_t n = 0;
  Strategy strategy;
  SlpProgram program;
  std::uint64_t muls = 0;
  double predicted = 0;  // NaN when no closed form applies
  std::vector<TraceStep> trace;
};

/// f(K*J, x) = f(K, x) * f(J, x^K). `power_of_x_k` names a register of
/// `left` holding x^K; without it one multiplication forms x^K.
SlpProgram compose(const SlpProgram& left, const SlpProgram& right,
                   std::optional<Reg> power_of_x_k = {});

PlanReport plan_prime_power(std::uint64_t p, unsigned e);
PlanReport plan_mixed(std::uint64_t n, std::span<const std::uint64_t> bases,
                      const CostModel& model);
PlanReport plan_mixed(std::uint64_t n, std::span<const std::uint64_t> bases);
PlanReport plan_binary(std::uint64_t n);
PlanReport plan_ternary(std::uint64_t n);
/// n must be a power of some y_k, 1 <= k <= 6.
PlanReport plan_recurrence(std::uint64_t n);
PlanReport plan_direct(std::uint64_t n);
/// Memoized search over factorizations f(K*J + r) with r in {0, 1} and
/// residue levels of the default bases.
PlanReport plan_factor_search(std::uint64_t n);
PlanReport plan_auto(std::uint64_t n);
PlanReport plan(std::uint64_t n, const Strategy& strategy);

/// Closed-form estimate. Defined for Binary, Ternary, PrimePower, Recurrence
/// and Direct; Mixed and Auto raise DomainError (see the markov module).
double predicted_cost(const Strategy& strategy, std::uint64_t n);

/// P' = muls(f(P, x)) + 2, the per-level cost of a prime-power plan.
unsigned level_cost_prime(std::uint64_t p);

/// Returns e with p^e == n, or nullopt.
std::optional<unsigned> exact_log(std::uint64_t n, std::uint64_t p);

}  // namespace neumann
