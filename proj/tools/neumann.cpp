#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "neumann/asymptotic.hpp"
#include "neumann/chains.hpp"
#include "neumann/error.hpp"
#include "neumann/linalg.hpp"
#include "neumann/markov.hpp"
#include "neumann/planner.hpp"
#include "neumann/poly.hpp"
#include "neumann/slp.hpp"

using namespace neumann;
using Json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string format = "text";
  std::string out;
  std::uint64_t seed = 1;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ParseError("cannot write " + c.out);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string join(const std::vector<std::uint64_t>& xs, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
  return s;
}

// Closed-form cost prediction, the stationary coefficient for mixed, NaN for auto.
class Predictor {
 public:
  double operator()(const Strategy& s, std::uint64_t n) {
    if (s.kind == Strategy::Kind::Auto) return NAN;
    if (s.kind == Strategy::Kind::Mixed) {
      if (n <= 1) return 0.0;
      auto it = mixed_.find(s.bases);
      if (it == mixed_.end())
        it = mixed_.emplace(s.bases, stationary(build_chain(s.bases)).coefficient).first;
      return it->second * std::log2(static_cast<double>(n)) - 2;
    }
    try {
      return predicted_cost(s, n);
    } catch (const DomainError&) {
      return NAN;
    }
  }

 private:
  std::map<std::vector<std::uint64_t>, double> mixed_;
};

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<Strategy> out;
  for (const auto& n : names) out.push_back(Strategy::parse(n));
  return out;
}

// nullopt when the strategy does not apply to n.
std::optional<PlanReport> try_plan(std::uint64_t n, const Strategy& s) {
  if (s.kind == Strategy::Kind::PrimePower && !exact_log(n, s.base) && n != 1) return std::nullopt;
  if (s.kind == Strategy::Kind::Recurrence && n != 1) {
    bool ok = false;
    for (unsigned k = 1; k <= 6 && !ok; ++k) ok = exact_log(n, recurrence_value(k)).has_value();
    if (!ok) return std::nullopt;
  }
  return plan(n, s);
}

// ---- plan ----

int cmd_plan(const Common& c, std::uint64_t n, const std::string& strategy_text) {
  const PlanReport r = plan(n, Strategy::parse(strategy_text));
  const std::string strat = r.strategy.to_string();
  if (c.format == "json") {
    Json j;
    j["schema"] = "neumann.plan/1";
    j["n"] = n;
    j["strategy"] = strat;
    j["muls"] = r.muls;
    Predictor predict;
    j["predicted"] = number_or_null(predict(r.strategy, n));
    j["plan_hash"] = plan_hash(r.program);
    Json trace = Json::array();
    for (const auto& t : r.trace) trace.push_back({{"n", t.n}, {"base", t.base}, {"residue", t.residue}});
    j["trace"] = trace;
    j["program"] = Json::parse(to_json(r.program, strat));
    emit(c, dump(j));
  } else if (c.format == "csv") {
    std::string s = "index,op,a,b\n";
    const auto& ins = r.program.instrs();
    for (std::size_t i = 0; i < ins.size(); ++i)
      s += std::to_string(i) + "," + std::string(op_name(ins[i].op)) + "," + std::to_string(ins[i].a) +
           "," + std::to_string(ins[i].b) + "\n";
    emit(c, s);
  } else {
    std::ostringstream os;
    os << "N = " << n << ", strategy " << strat << ", " << r.muls << " multiplications, hash "
       << plan_hash(r.program) << "\n";
    for (const auto& t : r.trace)
      os << "  level n=" << t.n << " base=" << t.base << " residue=" << t.residue << "\n";
    const auto& ins = r.program.instrs();
    for (std::size_t i = 0; i < ins.size(); ++i) {
      os << "  r" << i << " = " << op_name(ins[i].op);
      if (ins[i].op != Op::One && ins[i].op != Op::Input)
        os << " r" << ins[i].a << ", r" << ins[i].b;
      os << "\n";
    }
    os << "  out r" << r.program.output().index << "\n";
    emit(c, os.str());
  }
  return 0;
}

// ---- verify ----

struct VerifyRow {
  std::uint64_t n;
  std::string strategy;
  std::uint64_t muls;
  double predicted;
  bool pass;
  std::string hash;
};

int cmd_verify(const Common& c, std::uint64_t from, std::uint64_t to, bool run_range,
               const std::vector<std::string>& strategy_names, const std::vector<std::string>& fixtures) {
  if (from == 0 || from > to) throw DomainError("verify: need 1 <= from <= to");
  if (to > 1u << 16) throw DomainError("verify: range limited to N <= 65536");
  const auto strategies = parse_strategies(strategy_names);
  Predictor predict;
  std::vector<VerifyRow> rows;
  Json failures = Json::array();
  std::uint64_t skipped = 0;

  auto check = [&](std::uint64_t n, const std::string& label, const SlpProgram& program, double predicted,
                   std::string_view provenance) {
    const bool pass = program.series_length() == n && oracle_check(program) &&
                      mul_count(program) == program.declared_muls();
    rows.push_back({n, label, program.declared_muls(), predicted, pass, plan_hash(program)});
    if (!pass)
      failures.push_back({{"n", n}, {"strategy", label}, {"program", Json::parse(to_json(program, provenance))}});
  };

  if (run_range)
    for (std::uint64_t n = from; n <= to; ++n)
      for (const auto& s : strategies) {
        const auto r = try_plan(n, s);
        if (!r) {
          ++skipped;
          continue;
        }
        check(n, s.to_string(), r->program, predict(r->strategy, n), r->strategy.to_string());
      }
  for (const auto& f : fixtures) {
    const ChainEntry e = [&] {
      if (f == "printed-f11") return printed_chain_f11();
      if (f == "printed-f26") return printed_chain_f26();
      if (f == "corrected-f11") return chain_for_small(11);
      if (f == "corrected-f26") return recurrence_chain(3);
      throw ParseError("unknown fixture '" + f + "' (printed-f11, printed-f26, corrected-f11, corrected-f26)");
    }();
    check(e.size, "fixture:" + f, e.program, NAN, provenance_name(e.provenance));
  }

  std::size_t passed = 0;
  for (const auto& r : rows) passed += r.pass;
  const bool ok = passed == rows.size();

  if (c.format == "json") {
    Json j;
    j["schema"] = "neumann.verify/1";
    j["range"] = run_range ? Json::array({from, to}) : Json(nullptr);
    j["strategies"] = strategy_names;
    j["checked"] = rows.size();
    j["passed"] = passed;
    j["skipped_not_applicable"] = skipped;
    Json results = Json::array();
    for (const auto& r : rows)
      results.push_back({{"n", r.n}, {"strategy", r.strategy}, {"muls", r.muls},
                         {"predicted", number_or_null(r.predicted)}, {"pass", r.pass}, {"plan_hash", r.hash}});
    j["results"] = results;
    j["failures"] = failures;
    j["ok"] = ok;
    emit(c, dump(j));
  } else if (c.format == "csv") {
    std::string s = "n,strategy,muls,predicted,status,plan_hash\n";
    for (const auto& r : rows)
      s += std::to_string(r.n) + ",\"" + r.strategy + "\"," + std::to_string(r.muls) + "," +
           (std::isnan(r.predicted) ? std::string() : fmt("%.6f", r.predicted)) + "," +
           (r.pass ? "PASS" : "FAIL") + "," + r.hash + "\n";
    emit(c, s);
  } else {
    std::ostringstream os;
    os << "checked " << rows.size() << " plans, " << passed << " passed, " << rows.size() - passed
       << " failed";
    if (skipped) os << " (" << skipped << " strategy/N pairs not applicable)";
    os << "\n";
    if (rows.size() <= 64)
      for (const auto& r : rows)
        os << "  " << (r.pass ? "PASS" : "FAIL") << " N=" << r.n << " " << r.strategy << " muls=" << r.muls
           << (std::isnan(r.predicted) ? "" : " predicted=" + fmt("%.3f", r.predicted)) << "\n";
    for (const auto& f : failures) os << "FAIL " << f.dump() << "\n";
    emit(c, os.str());
  }
  return ok ? 0 : 1;
}

// ---- count ----

int cmd_count(const Common& c, std::vector<std::uint64_t> ns, std::uint64_t from, std::uint64_t to,
              const std::vector<std::string>& strategy_names) {
  if (ns.empty()) {
    if (from == 0 || from > to) throw DomainError("count: need 1 <= from <= to");
    for (std::uint64_t n = from; n <= to; ++n) ns.push_back(n);
  }
  const auto strategies = parse_strategies(strategy_names);
  Predictor predict;
  Json rows = Json::array();
  std::ostringstream text, csv;
  csv << "n,strategy,muls,predicted,muls_per_log2n,plan_hash\n";
  text << "       N  strategy                muls  predicted  muls/log2N\n";
  for (std::uint64_t n : ns)
    for (const auto& s : strategies) {
      const auto r = try_plan(n, s);
      if (!r) continue;
      const std::string strat = r->strategy.to_string();
      const double p = predict(r->strategy, n);
      const double per = n > 1 ? static_cast<double>(r->muls) / std::log2(static_cast<double>(n)) : NAN;
      rows.push_back({{"n", n}, {"strategy", strat}, {"muls", r->muls}, {"predicted", number_or_null(p)},
                      {"muls_per_log2n", number_or_null(per)}, {"plan_hash", plan_hash(r->program)}});
      csv << n << ",\"" << strat << "\"," << r->muls << "," << (std::isnan(p) ? "" : fmt("%.6f", p)) << ","
          << (std::isnan(per) ? "" : fmt("%.6f", per)) << "," << plan_hash(r->program) << "\n";
      char line[160];
      std::snprintf(line, sizeof line, "%8llu  %-22s %5llu  %9s  %10s\n", static_cast<unsigned long long>(n),
                    strat.c_str(), static_cast<unsigned long long>(r->muls),
                    std::isnan(p) ? "-" : fmt("%.3f", p).c_str(), std::isnan(per) ? "-" : fmt("%.4f", per).c_str());
      text << line;
    }
  if (c.format == "json") emit(c, dump(Json{{"schema", "neumann.count/1"}, {"rows", rows}}));
  else if (c.format == "csv") emit(c, csv.str());
  else emit(c, text.str());
  return 0;
}

// ---- markov ----

Json cost_table_json(const CostModel& model) {
  Json t = Json::object();
  for (std::uint64_t p : model.bases()) {
    Json level = Json::array(), term = Json::array();
    for (std::uint64_t r = 0; r < p; ++r) {
      level.push_back({{"cost", model.entry(p, r).cost}, {"form", level_form_name(model.entry(p, r).form)}});
      term.push_back({{"cost", model.terminal(p, r).cost}, {"form", level_form_name(model.terminal(p, r).form)}});
    }
    t[std::to_string(p)] = {{"chain_muls", model.chain_muls(p)}, {"level", level}, {"terminal", term}};
  }
  return t;
}

int cmd_markov(const Common& c, std::vector<std::uint64_t> bases, std::uint64_t multiplier,
               std::uint64_t samples, std::size_t max_states) {
  std::sort(bases.rbegin(), bases.rend());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  const CostModel model = CostModel::derive(bases);
  const ResidueChain chain = build_chain(bases, model, multiplier);
  const StationaryResult st = stationary(chain);
  std::optional<MonteCarloEstimate> mc;
  if (samples > 0) mc = window_coefficient(bases, samples, c.seed);

  if (c.format == "json") {
    Json j;
    j["schema"] = "neumann.markov/1";
    j["bases"] = bases;
    j["modulus"] = chain.modulus;
    j["states"] = chain.size();
    j["coefficient"] = st.coefficient;
    j["mean_cost"] = st.mean_cost.get_str();
    j["avg_base"] = st.avg_base;
    Json bp = Json::object();
    for (const auto& [p, q] : st.base_probs) bp[std::to_string(p)] = q.get_str();
    j["base_probs"] = bp;
    if (chain.size() <= max_states) {
      Json d = Json::array();
      for (const auto& q : st.dist) d.push_back(q.get_str());
      j["dist"] = d;
    }
    j["cost_table"] = cost_table_json(model);
    if (mc) j["monte_carlo"] = {{"mean", mc->mean}, {"std_error", mc->std_error}, {"samples", mc->samples}, {"seed", c.seed}};
    emit(c, dump(j));
  } else if (c.format == "csv") {
    std::ostringstream os;
    os << "state,base,cost,probability\n";
    for (std::size_t i = 0; i < chain.size(); ++i)
      os << i << "," << chain.policy[i].base << "," << chain.policy[i].cost << "," << st.dist[i].get_str() << "\n";
    emit(c, os.str());
  } else {
    std::ostringstream os;
    os << "bases {" << join(bases, ",") << "}, " << chain.size() << " states\n";
    os << "coefficient " << fmt("%.6f", st.coefficient) << " (mean cost " << fmt("%.6f", st.mean_cost.get_d())
       << " per level, mean log2 base " << fmt("%.6f", st.avg_base) << ")\n";
    for (const auto& [p, q] : st.base_probs) os << "  P(base " << p << ") = " << q.get_str() << "\n";
    if (chain.size() <= max_states) {
      os << "  stationary:";
      for (const auto& q : st.dist) os << " " << q.get_str();
      os << "\n";
    }
    for (std::uint64_t p : model.bases()) {
      os << "  costs base " << p << ":";
      for (std::uint64_t r = 0; r < p; ++r) os << " " << model.cost(p, r);
      os << "\n";
    }
    if (mc)
      os << "monte carlo " << fmt("%.6f", mc->mean) << " +/- " << fmt("%.6f", mc->std_error) << " (" << mc->samples
         << " samples, seed " << c.seed << ")\n";
    emit(c, os.str());
  }
  return 0;
}

// ---- asymptotic ----

int cmd_asymptotic(const Common& c, unsigned digits, unsigned terms, unsigned floor_n, unsigned bits) {
  const AsymptoticResult r = terms ? compute_k_with_terms(terms, digits) : compute_k(digits);
  const auto rows = verify_floor_identity(floor_n, bits);
  auto status = [](FloorStatus s) {
    return s == FloorStatus::Match ? "match" : s == FloorStatus::Mismatch ? "mismatch" : "undecided";
  };
  if (c.format == "json") {
    Json fl = Json::array();
    for (const auto& row : rows)
      fl.push_back({{"n", row.n}, {"y", row.y.get_str()},
                    {"floor", row.floor_value ? Json(row.floor_value->get_str()) : Json(nullptr)},
                    {"status", status(row.status)}});
    emit(c, dump(Json{{"schema", "neumann.asymptotic/1"}, {"k", r.k}, {"coefficient", r.coefficient},
                      {"digits", r.digits}, {"terms_used", r.terms_used}, {"error_bound", r.error_bound},
                      {"floor_identity", fl}}));
  } else if (c.format == "csv") {
    std::ostringstream os;
    os << "n,y,floor,status\n";
    for (const auto& row : rows)
      os << row.n << "," << row.y.get_str() << "," << (row.floor_value ? row.floor_value->get_str() : "") << ","
         << status(row.status) << "\n";
    emit(c, os.str());
  } else {
    std::ostringstream os;
    os << "k           = " << r.k << "\n";
    os << "coefficient = " << r.coefficient << "\n";
    os << "terms " << r.terms_used << ", error bound " << fmt("%.3g", r.error_bound) << "\n";
    for (const auto& row : rows)
      os << "  floor(k^(2^" << row.n << ")) = " << (row.floor_value ? row.floor_value->get_str() : "?") << " vs y = "
         << row.y.get_str() << ": " << status(row.status) << "\n";
    emit(c, os.str());
  }
  return 0;
}

// ---- invert / gen ----

Json report_json(const NeumannReport& r) {
  return {{"schema", "neumann.invert/1"}, {"n", r.n}, {"terms", r.terms}, {"strategy", r.strategy},
          {"plan_hash", r.plan_hash}, {"matrix_muls", r.matrix_muls}, {"wall_time", r.wall_time},
          {"residual_fro", r.residual_fro}, {"spectral_radius_est", r.spectral_radius_est},
          {"spectral_low_confidence", r.spectral_low_confidence}};
}

int cmd_invert(const Common& c, const std::string& path, std::uint64_t terms, const std::string& strategy_text,
               const std::string& inverse_out, bool allow_divergent, const std::string& kernel) {
  const DenseMatrix a = read_matrix(path);
  const PlanReport p = plan(terms, Strategy::parse(strategy_text));
  InvertOptions opt;
  opt.allow_divergent = allow_divergent;
  opt.kernel = parse_kernel(kernel);
  opt.strategy_label = p.strategy.to_string();
  const InversionResult res = neumann_invert(a, terms, p.program, opt);
  if (!inverse_out.empty()) write_matrix(res.inverse, inverse_out);
  const NeumannReport& r = res.report;
  if (c.format == "json") {
    emit(c, dump(report_json(r)));
  } else if (c.format == "csv") {
    emit(c, "n,terms,strategy,plan_hash,matrix_muls,wall_time,residual_fro,spectral_radius_est,low_confidence\n" +
                std::to_string(r.n) + "," + std::to_string(r.terms) + ",\"" + r.strategy + "\"," + r.plan_hash + "," +
                std::to_string(r.matrix_muls) + "," + fmt("%.6g", r.wall_time) + "," + fmt("%.17g", r.residual_fro) +
                "," + fmt("%.17g", r.spectral_radius_est) + "," + (r.spectral_low_confidence ? "1" : "0") + "\n");
  } else {
    std::ostringstream os;
    os << r.n << "x" << r.n << ", N=" << r.terms << ", strategy " << r.strategy << " (" << r.plan_hash << ")\n";
    os << "matrix multiplications " << r.matrix_muls << ", time " << fmt("%.6g", r.wall_time) << " s\n";
    os << "residual ||I - A*Ainv||_F = " << fmt("%.6e", r.residual_fro) << "\n";
    os << "spectral radius estimate of I - A = " << fmt("%.6f", r.spectral_radius_est)
       << (r.spectral_low_confidence ? " (LOW_CONFIDENCE)" : "") << "\n";
    if (!inverse_out.empty()) os << "inverse written to " << inverse_out << "\n";
    emit(c, os.str());
  }
  return 0;
}

int cmd_gen(const Common& c, std::size_t size) {
  if (c.out.empty()) throw DomainError("gen: --out is required");
  write_matrix(random_test_matrix(size, c.seed), c.out);
  return 0;
}

// ---- bench ----

int cmd_bench(const Common& c, const BenchConfig& cfg, const std::string& json_path) {
  std::vector<BenchRow> rows = run_bench(cfg, [](const BenchRow& r) {
    std::fprintf(stderr, "size %zu N %llu: direct %.3e s, fast %.3e s, speedup %.2f\n", r.size,
                 static_cast<unsigned long long>(r.terms), r.direct_mean, r.fast_mean, r.speedup);
  });
  Json jrows = Json::array();
  for (const auto& r : rows)
    jrows.push_back({{"size", r.size}, {"terms", r.terms}, {"fast_strategy", r.fast_strategy},
                     {"direct_plan_hash", r.direct_hash}, {"fast_plan_hash", r.fast_hash},
                     {"direct_muls", r.direct_muls}, {"fast_muls", r.fast_muls},
                     {"direct_mean", r.direct_mean}, {"direct_sd", r.direct_sd},
                     {"fast_mean", r.fast_mean}, {"fast_sd", r.fast_sd}, {"speedup", r.speedup},
                     {"residual_direct", r.residual_direct}, {"residual_fast", r.residual_fast},
                     {"path_rel_diff", r.path_rel_diff}});
  Json report{{"schema", "neumann.bench/1"}, {"seed", cfg.seed}, {"replicates", cfg.replicates},
              {"kernel", kernel_name(cfg.kernel)}, {"rows", jrows}};
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw ParseError("cannot write " + json_path);
    f << dump(report);
  }

  if (c.format == "json") {
    emit(c, dump(report));
  } else if (c.format == "csv") {
    // Wide layout: one row per N, Direct/Fast mean time per matrix size.
    std::ostringstream os;
    os << "series_size";
    for (std::size_t s : cfg.sizes) os << ",direct_" << s << ",fast_" << s;
    os << ",direct_muls,fast_muls,fast_strategy\n";
    for (std::uint64_t n : cfg.terms) {
      os << n;
      const BenchRow* any = nullptr;
      for (std::size_t s : cfg.sizes)
        for (const auto& r : rows)
          if (r.size == s && r.terms == n) {
            os << "," << fmt("%.6e", r.direct_mean) << "," << fmt("%.6e", r.fast_mean);
            any = &r;
          }
      if (any) os << "," << any->direct_muls << "," << any->fast_muls << ",\"" << any->fast_strategy << "\"";
      os << "\n";
    }
    emit(c, os.str());
  } else {
    std::ostringstream os;
    os << "  size   N  muls(D:F)  direct mean (s)  fast mean (s)  speedup  rel diff   strategy\n";
    for (const auto& r : rows) {
      char line[200];
      std::snprintf(line, sizeof line, "%6zu %3llu  %4llu:%-4llu  %.4e±%.1e  %.4e±%.1e  %6.2f  %.2e   %s\n", r.size,
                    static_cast<unsigned long long>(r.terms), static_cast<unsigned long long>(r.direct_muls),
                    static_cast<unsigned long long>(r.fast_muls), r.direct_mean, r.direct_sd, r.fast_mean,
                    r.fast_sd, r.speedup, r.path_rel_diff, r.fast_strategy.c_str());
      os << line;
    }
    emit(c, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast Neumann series evaluation: plans, verification, complexity and matrix inversion"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", common.out, "Write output to this file instead of stdout");
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  };

  std::uint64_t n = 0;
  std::string strategy = "auto";
  auto* plan_cmd = app.add_subcommand("plan", "Emit an evaluation plan for f(N, x)");
  plan_cmd->add_option("N", n, "Series length")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  plan_cmd->add_option("-s,--strategy", strategy, "auto, binary, ternary, prime:P, mixed:B1,B2,..., recurrence, direct")
      ->capture_default_str();
  add_common(plan_cmd);

  std::uint64_t from = 1, to = 4096;
  std::vector<std::string> strategies{"auto", "binary", "ternary", "mixed:11,7,5,3,2", "prime:5",
                                      "prime:7",  "prime:11", "recurrence"};
  std::vector<std::string> fixtures;
  auto* verify_cmd = app.add_subcommand("verify", "Check plans against the exact polynomial oracle");
  auto* from_opt = verify_cmd->add_option("--from", from, "First N")->capture_default_str();
  auto* to_opt = verify_cmd->add_option("--to", to, "Last N")->capture_default_str();
  verify_cmd->add_option("-s,--strategy", strategies, "Strategy (repeatable)")->capture_default_str();
  verify_cmd->add_option("--fixture", fixtures,
                         "Also check a fixture: printed-f11, printed-f26, corrected-f11, corrected-f26");
  add_common(verify_cmd);

  std::vector<std::uint64_t> count_ns;
  std::uint64_t count_from = 1, count_to = 32;
  std::vector<std::string> count_strategies{"auto"};
  auto* count_cmd = app.add_subcommand("count", "Multiplication counts per N and strategy");
  count_cmd->add_option("-n", count_ns, "Explicit N values")->delimiter(',');
  count_cmd->add_option("--from", count_from, "First N")->capture_default_str();
  count_cmd->add_option("--to", count_to, "Last N")->capture_default_str();
  count_cmd->add_option("-s,--strategy", count_strategies, "Strategy (repeatable)")->capture_default_str();
  add_common(count_cmd);

  std::vector<std::uint64_t> bases{3, 2};
  std::uint64_t multiplier = 1, samples = 0;
  std::size_t max_states = 64;
  auto* markov_cmd = app.add_subcommand("markov", "Stationary analysis of mixed-basis reduction");
  markov_cmd->add_option("-b,--bases", bases, "Bases, comma separated")->delimiter(',')->capture_default_str();
  markov_cmd->add_option("--multiplier", multiplier, "Extra factor on the state modulus")->capture_default_str();
  markov_cmd->add_option("--samples", samples, "Monte-Carlo samples (0 = skip)")->capture_default_str();
  markov_cmd->add_option("--max-states", max_states, "Print the distribution up to this many states")
      ->capture_default_str();
  add_common(markov_cmd);

  unsigned digits = 14, terms = 0, floor_n = 6, bits = 256;
  auto* asym_cmd = app.add_subcommand("asymptotic", "Limit constant of the recurrence strategy");
  asym_cmd->add_option("--digits", digits, "Decimal digits (1..50)")->capture_default_str();
  asym_cmd->add_option("--terms", terms, "Fixed number of series terms (0 = automatic)")->capture_default_str();
  asym_cmd->add_option("--floor-n", floor_n, "Check the floor identity up to this n (<= 6)")->capture_default_str();
  asym_cmd->add_option("--bits", bits, "Working precision for the floor check")->capture_default_str();
  add_common(asym_cmd);

  std::string matrix_path, inverse_out, kernel = "blocked";
  std::uint64_t inv_terms = 0;
  bool allow_divergent = false;
  auto* invert_cmd = app.add_subcommand("invert", "Approximate A^-1 by a truncated Neumann series");
  invert_cmd->add_option("matrix", matrix_path, "Matrix file (CSV or binary)")->required()->check(CLI::ExistingFile);
  invert_cmd->add_option("-N,--terms", inv_terms, "Number of series terms")->required()->check(CLI::PositiveNumber);
  invert_cmd->add_option("-s,--strategy", strategy, "Plan strategy")->capture_default_str();
  invert_cmd->add_option("--inverse", inverse_out, "Write the approximate inverse here (.nmat/.bin = binary)");
  invert_cmd->add_flag("--allow-divergent", allow_divergent, "Skip the spectral radius precheck");
  invert_cmd->add_option("--kernel", kernel, "Matrix kernel")
      ->check(CLI::IsMember({"reference", "blocked", "parallel"}))
      ->capture_default_str();
  add_common(invert_cmd);

  BenchConfig bench;
  std::string bench_json, bench_kernel = "blocked";
  auto* bench_cmd = app.add_subcommand("bench", "Direct (Horner) against fast plans on seeded matrices");
  bench_cmd->add_option("--sizes", bench.sizes, "Matrix sizes")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--terms", bench.terms, "Series lengths")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--replicates", bench.replicates, "Timed replicates per cell")->capture_default_str();
  bench_cmd->add_option("--kernel", bench_kernel, "Matrix kernel")
      ->check(CLI::IsMember({"reference", "blocked", "parallel"}))
      ->capture_default_str();
  bench_cmd->add_option("--json", bench_json, "Also write the JSON report here");
  add_common(bench_cmd);

  std::size_t gen_size = 50;
  auto* gen_cmd = app.add_subcommand("gen", "Write a seeded test matrix with eigenvalues in (0, 2)");
  gen_cmd->add_option("--size", gen_size, "Dimension")->capture_default_str()->check(CLI::Range(1, 1 << 14));
  add_common(gen_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan_cmd) return cmd_plan(common, n, strategy);
    if (*verify_cmd) {
      const bool run_range = fixtures.empty() || from_opt->count() > 0 || to_opt->count() > 0;
      return cmd_verify(common, from, to, run_range, strategies, fixtures);
    }
    if (*count_cmd) return cmd_count(common, count_ns, count_from, count_to, count_strategies);
    if (*markov_cmd) return cmd_markov(common, bases, multiplier, samples, max_states);
    if (*asym_cmd) return cmd_asymptotic(common, digits, terms, floor_n, bits);
    if (*invert_cmd) return cmd_invert(common, matrix_path, inv_terms, strategy, inverse_out, allow_divergent, kernel);
    if (*bench_cmd) {
      bench.seed = common.seed;
      bench.kernel = parse_kernel(bench_kernel);
      return cmd_bench(common, bench, bench_json);
    }
    if (*gen_cmd) return cmd_gen(common, gen_size);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
