#include "neumann/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "exact_solve.hpp"

namespace neumann {

namespace {

std::string describe_classes(const std::vector<std::vector<std::uint64_t>>& classes) {
  std::ostringstream os;
  os << "chain has " << classes.size() << " recurrent classes:";
  for (const auto& c : classes) {
    os << " {";
    for (std::size_t i = 0; i < c.size() && i < 12; ++i) os << (i ? "," : "") << c[i];
    if (c.size() > 12) os << ",...(" << c.size() << " states)";
    os << '}';
  }
  return os.str();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator per sample, so results do not depend on scheduling.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

}  // namespace

ReducibleChainError::ReducibleChainError(std::vector<std::vector<std::uint64_t>> classes)
    : DomainError(describe_classes(classes)), classes_(std::move(classes)) {}

Rational ResidueChain::entry(std::uint64_t i, std::uint64_t j) const {
  for (const auto& t : transitions.at(i))
    if (t.to == j) return t.prob;
  return 0;
}

ResidueChain build_chain(std::span<const std::uint64_t> bases, const CostModel& model,
                         std::uint64_t modulus_multiplier) {
  if (modulus_multiplier == 0) throw DomainError("modulus multiplier must be >= 1");
  const Strategy s = Strategy::mixed(std::vector<std::uint64_t>(bases.begin(), bases.end()));
  ResidueChain chain;
  chain.bases = s.bases;
  chain.modulus = modulus_multiplier;
  for (auto p : chain.bases) {
    if (!model.covers(p)) throw DomainError("cost model does not cover base " + std::to_string(p));
    chain.modulus *= p;
  }
  if (chain.modulus > (std::uint64_t{1} << 22)) throw DomainError("residue modulus too large");
  const std::uint64_t m = chain.modulus;
  chain.policy.resize(m);
  chain.transitions.resize(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    const std::uint64_t p = select_base(j, chain.bases, model);
    const std::uint64_t r = j % p, q = j / p, stride = m / p;
    chain.policy[j] = {p, model.cost(p, r)};
    std::map<std::uint32_t, Rational> row;
    for (std::uint64_t t = 0; t < p; ++t)
      row[static_cast<std::uint32_t>((q + stride * t) % m)] += Rational(1, static_cast<long>(p));
    for (auto& [to, prob] : row) chain.transitions[j].push_back({to, prob});
  }
  return chain;
}

ResidueChain build_chain(std::span<const std::uint64_t> bases, std::uint64_t modulus_multiplier) {
  const CostModel model = CostModel::derive(bases);
  return build_chain(bases, model, modulus_multiplier);
}

std::vector<std::vector<std::uint64_t>> recurrent_classes(const ResidueChain& chain) {
  // Iterative Tarjan.
  const std::size_t n = chain.size();
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t counter = 0, ncomp = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge == 0 && index[v] == kUnset) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      const auto& out = chain.transitions[v];
      if (edge < out.size()) {
        const std::uint32_t w = out[edge++].to;
        if (index[w] == kUnset) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) {
        const std::uint32_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  std::vector<bool> closed(ncomp, true);
  for (std::uint32_t v = 0; v < n; ++v)
    for (const auto& t : chain.transitions[v])
      if (comp[t.to] != comp[v]) closed[comp[v]] = false;
  std::map<std::uint32_t, std::vector<std::uint64_t>> groups;
  for (std::uint32_t v = 0; v < n; ++v)
    if (closed[comp[v]]) groups[comp[v]].push_back(v);
  std::vector<std::vector<std::uint64_t>> out;
  for (auto& [c, states] : groups) out.push_back(std::move(states));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_stationary(const ResidueChain& chain, const std::vector<Rational>& pi) {
  if (pi.size() != chain.size()) return false;
  std::vector<Rational> next(pi.size(), Rational(0));
  Rational total = 0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    total += pi[j];
    if (sgn(pi[j]) == 0) continue;
    for (const auto& t : chain.transitions[j]) next[t.to] += pi[j] * t.prob;
  }
  return total == 1 && next == pi;
}

StationaryResult stationary(const ResidueChain& chain) {
  const auto classes = recurrent_classes(chain);
  if (classes.size() != 1) throw ReducibleChainError(classes);

  // States sharing (base, quotient) have identical rows; solve for the mass
  // W of each such group, then pi(s) = sum_c W_c * U_c(s) where U_c is the
  // common row.
  const std::uint64_t m = chain.modulus;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> group_of_key;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keys;
  std::vector<std::uint32_t> group(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    const auto key = std::make_pair(chain.policy[j].base, j / chain.policy[j].base);
    auto [it, fresh] = group_of_key.emplace(key, static_cast<std::uint32_t>(keys.size()));
    if (fresh) keys.push_back(key);
    group[j] = it->second;
  }
  const std::size_t g = keys.size();
  std::uint64_t scale = 1;
  for (auto p : chain.bases) scale = std::lcm(scale, p);

  // Equation for group c: sum_c' W_c' K(c', c) - W_c = 0, scaled by `scale`;
  // the last equation is replaced by sum W = 1.
  std::vector<std::map<std::uint32_t, std::int64_t>> eq(g);
  for (std::size_t c = 0; c < g; ++c) {
    const auto [p, q] = keys[c];
    const std::uint64_t stride = m / p;
    const auto weight = static_cast<std::int64_t>(scale / p);
    for (std::uint64_t t = 0; t < p; ++t) eq[group[(q + stride * t) % m]][static_cast<std::uint32_t>(c)] += weight;
  }
  for (std::size_t c = 0; c < g; ++c) eq[c][static_cast<std::uint32_t>(c)] -= static_cast<std::int64_t>(scale);
  std::vector<detail::SparseRow> rows(g);
  std::vector<std::int64_t> rhs(g, 0);
  for (std::size_t c = 0; c + 1 < g; ++c)
    for (const auto& [col, v] : eq[c])
      if (v != 0) {
        rows[c].cols.push_back(col);
        rows[c].vals.push_back(v);
      }
  for (std::uint32_t c = 0; c < g; ++c) {
    rows[g - 1].cols.push_back(c);
    rows[g - 1].vals.push_back(1);
  }
  rhs[g - 1] = 1;
  const auto sol = detail::solve_rational(rows, rhs);

  StationaryResult res;
  res.dist.assign(m, Rational(0));
  for (std::size_t c = 0; c < g; ++c) {
    if (sgn(sol.numerators[c]) == 0) continue;
    const auto [p, q] = keys[c];
    const Rational share(sol.numerators[c], sol.denominator * static_cast<unsigned long>(p));
    const std::uint64_t stride = m / p;
    for (std::uint64_t t = 0; t < p; ++t) res.dist[(q + stride * t) % m] += share;
  }
  for (auto& v : res.dist) v.canonicalize();
  if (!is_stationary(chain, res.dist))
    throw ConvergenceError("stationary: exact verification failed");

  res.mean_cost = 0;
  for (auto p : chain.bases) res.base_probs[p] = 0;
  for (std::uint64_t j = 0; j < m; ++j) {
    res.base_probs[chain.policy[j].base] += res.dist[j];
    res.mean_cost += res.dist[j] * chain.policy[j].cost;
  }
  double log2_base = 0;
  for (const auto& [p, q] : res.base_probs) log2_base += q.get_d() * std::log2(static_cast<double>(p));
  res.avg_base = std::exp2(log2_base);
  res.coefficient = res.mean_cost.get_d() / log2_base;
  return res;
}

MonteCarloEstimate empirical_coefficient(std::span<const std::uint64_t> bases,
                                         std::uint64_t samples, std::uint64_t lo,
                                         std::uint64_t hi, std::uint64_t seed) {
  if (samples < 2) throw DomainError("need at least two samples");
  if (lo < 2 || hi < lo) throw DomainError("invalid sampling range");
  const CostModel model = CostModel::derive(bases);
  std::vector<double> values(samples);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    auto rng = sample_rng(seed, static_cast<std::uint64_t>(i));
    const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    const auto r = plan_mixed(n, bases, model);
    values[static_cast<std::size_t>(i)] =
        (static_cast<double>(r.muls) + 2) / std::log2(static_cast<double>(n));
  }
  double sum = 0, sq = 0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(samples);
  for (double v : values) sq += (v - mean) * (v - mean);
  const double var = sq / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

MonteCarloEstimate window_coefficient(std::span<const std::uint64_t> bases,
                                      std::uint64_t samples, std::uint64_t seed,
                                      const WindowOptions& opt) {
  if (samples < 2) throw DomainError("need at least two samples");
  if (opt.window == 0) throw DomainError("window must be positive");
  const CostModel model = CostModel::derive(bases);
  std::vector<double> muls(samples), bits(samples);
  std::vector<int> short_trace(samples, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    const auto k = static_cast<std::size_t>(i);
    auto rng = sample_rng(seed, k);
    const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(opt.lo, opt.hi)(rng);
    const auto full = plan_mixed(n, bases, model);
    if (full.trace.size() < opt.burn_in + opt.window + 1) {
      short_trace[k] = 1;
      continue;
    }
    const auto& a = full.trace[opt.burn_in];
    const auto& b = full.trace[opt.burn_in + opt.window];
    double width = 0;
    for (unsigned l = opt.burn_in; l < opt.burn_in + opt.window; ++l)
      width += std::log2(static_cast<double>(full.trace[l].base));
    muls[k] = static_cast<double>(plan_mixed(a.n, bases, model).muls) -
              static_cast<double>(plan_mixed(b.n, bases, model).muls);
    bits[k] = width;
  }
  if (std::any_of(short_trace.begin(), short_trace.end(), [](int s) { return s != 0; }))
    throw DomainError("window_coefficient: sampling range too small for the window");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    sx += muls[i];
    sy += bits[i];
  }
  const double ratio = sx / sy;
  const double ybar = sy / static_cast<double>(samples);
  double ss = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double d = muls[i] - ratio * bits[i];
    ss += d * d;
  }
  const double var = ss / static_cast<double>(samples - 1);
  const double se = std::sqrt(var / static_cast<double>(samples)) / ybar;
  return {ratio, se, samples};
}

double predicted_mixed_cost(std::span<const std::uint64_t> bases, std::uint64_t n) {
  if (n == 0) throw DomainError("series length must be >= 1");
  if (n == 1) return 0.0;
  const auto res = stationary(build_chain(bases));
  return res.coefficient * std::log2(static_cast<double>(n)) - 2;
}

}  // namespace neumann
