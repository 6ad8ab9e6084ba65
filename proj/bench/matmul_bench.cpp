#include <benchmark/benchmark.h>

#include "neumann/linalg.hpp"
#include "neumann/planner.hpp"

using namespace neumann;

namespace {

void BM_Multiply(benchmark::State& state, Kernel kernel) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = random_test_matrix(n, 11);
  DenseMatrix c(n, n);
  for (auto _ : state) {
    multiply_into(a, a, c, kernel);
    benchmark::DoNotOptimize(c.data().data());
  }
  state.counters["flops"] = benchmark::Counter(2.0 * n * n * n, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_Series(benchmark::State& state, bool fast) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto terms = static_cast<std::uint64_t>(state.range(1));
  const DenseMatrix b = DenseMatrix::identity(n) - random_test_matrix(n, 11);
  const SlpProgram program = fast ? plan_auto(terms).program : horner_program(terms);
  for (auto _ : state) {
    MatrixRing ring{Kernel::Blocked, 0};
    DenseMatrix out = eval(program, b, ring);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.counters["muls"] = static_cast<double>(program.declared_muls());
}

}  // namespace

BENCHMARK_CAPTURE(BM_Multiply, reference, Kernel::Reference)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Multiply, blocked, Kernel::Blocked)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Multiply, parallel, Kernel::Parallel)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_CAPTURE(BM_Series, direct, false)->ArgsProduct({{100, 250}, {5, 7, 9}})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Series, fast, true)->ArgsProduct({{100, 250}, {5, 7, 9}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
