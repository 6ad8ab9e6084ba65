#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "neumann/error.hpp"
#include "neumann/planner.hpp"

namespace neumann {

using Rational = mpq_class;

/// Residue-state model of mixed-basis reduction. State j stands for every N
/// with N mod M == j; the chosen base P and residue r = j mod P fix the
/// next state up to the P equally likely preimages of (j - r)/P.
struct ResidueChain {
  struct Policy {
    std::uint64_t base = 0;
    unsigned cost = 0;
  };
  struct Transition {
    std::uint32_t to = 0;
    Rational prob;
  };

  std::vector<std::uint64_t> bases;  // descending
  std::uint64_t modulus = 1;
  std::vector<Policy> policy;                       // indexed by residue
  std::vector<std::vector<Transition>> transitions;  // sparse rows, sorted by target

  std::size_t size() const noexcept { return policy.size(); }
  /// Dense entry T(i, j).
  Rational entry(std::uint64_t i, std::uint64_t j) const;
};

struct StationaryResult {
  std::vector<Rational> dist;
  std::map<std::uint64_t, Rational> base_probs;
  Rational mean_cost;
  double avg_base = 0;
  double coefficient = 0;
};

/// Raised when the chain has several closed communicating classes.
class ReducibleChainError : public DomainError {
 public:
  explicit ReducibleChainError(std::vector<std::vector<std::uint64_t>> classes);
  const std::vector<std::vector<std::uint64_t>>& classes() const noexcept { return classes_; }

 private:
  std::vector<std::vector<std::uint64_t>> classes_;
};

/// Modulus = (product of distinct bases) * modulus_multiplier.
ResidueChain build_chain(std::span<const std::uint64_t> bases, const CostModel& model,
                         std::uint64_t modulus_multiplier = 1);
ResidueChain build_chain(std::span<const std::uint64_t> bases,
                         std::uint64_t modulus_multiplier = 1);

/// Closed strongly connected components, each sorted, in order of their
/// smallest state.
std::vector<std::vector<std::uint64_t>> recurrent_classes(const ResidueChain& chain);

/// Exact stationary distribution (verified pi*T == pi in rationals).
StationaryResult stationary(const ResidueChain& chain);

/// True iff pi*T == pi and sum(pi) == 1 exactly.
bool is_stationary(const ResidueChain& chain, const std::vector<Rational>& pi);

struct MonteCarloEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
};

/// Mean over uniformly drawn N in [lo, hi] of (muls(plan_mixed(N)) + 2)/log2 N.
/// The finite-N terminal levels bias this below the asymptotic coefficient
/// by O(1/log N).
MonteCarloEstimate empirical_coefficient(std::span<const std::uint64_t> bases,
                                         std::uint64_t samples, std::uint64_t lo,
                                         std::uint64_t hi, std::uint64_t seed);

struct WindowOptions {
  unsigned burn_in = 4;  // levels skipped from the start of the reduction
  unsigned window = 12;  // levels measured
  std::uint64_t lo = std::uint64_t{1} << 62;
  std::uint64_t hi = UINT64_MAX >> 1;
};

/// Ratio estimator of multiplications per bit over a window of reduction
/// levels away from both ends, with a delta-method standard error. Free of
/// the terminal bias above.
MonteCarloEstimate window_coefficient(std::span<const std::uint64_t> bases,
                                      std::uint64_t samples, std::uint64_t seed,
                                      const WindowOptions& options = {});

/// coefficient * log2(N) - 2 for the mixed strategy over `bases`.
double predicted_mixed_cost(std::span<const std::uint64_t> bases, std::uint64_t n);

}  // namespace neumann
