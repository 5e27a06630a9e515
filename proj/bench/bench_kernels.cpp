#include <benchmark/benchmark.h>

#include "odlab/brackets.hpp"
#include "odlab/diffop.hpp"
#include "odlab/multifilt.hpp"

using namespace odlab;

namespace {

Kernel kernel_of(const benchmark::State& s) { return s.range(0) ? Kernel::parallel : Kernel::serial; }

void BM_prestandard(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(1));
    for (auto _ : state) {
        // fresh operad each round so component caches do not carry over
        FreeOperad F({{"b", 2, 0, Symm::antisymmetric}}, n);
        benchmark::DoNotOptimize(prestandard(F, n, BoundMode::sharp, kernel_of(state)));
    }
}
BENCHMARK(BM_prestandard)->ArgsProduct({{0, 1}, {4, 5}})->Unit(benchmark::kMillisecond);

void BM_diffop_order(benchmark::State& state)
{
    AlgebraContext A({{"x", 0}, {"y", 0}}, static_cast<int>(state.range(1)));
    auto op = compose(compose(partial(0, A), partial(1, A)), left_mult(parse_polynomial("x + y", A), A));
    for (auto _ : state)
        benchmark::DoNotOptimize(diffop_order(op, 3, -1, kernel_of(state)));
}
BENCHMARK(BM_diffop_order)->ArgsProduct({{0, 1}, {4, 6}})->Unit(benchmark::kMillisecond);

void BM_slot_order(benchmark::State& state)
{
    PairedContext pc({0, 0}, static_cast<int>(state.range(1)), 2);
    auto op = superbig_operator(pc);
    for (auto _ : state)
        benchmark::DoNotOptimize(slot_order(op.coeffs[1], 0, OrderKind::diffop, 3, -1, false, kernel_of(state)));
}
BENCHMARK(BM_slot_order)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
