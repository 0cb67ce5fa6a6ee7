#include <benchmark/benchmark.h>
#include <omp.h>

#include "gmfs/coeffs.hpp"
#include "gmfs/oracle.hpp"
#include "gmfs/sde.hpp"

using namespace gmfs;

namespace {

const BasisSystem kLeg{BasisKind::Legendre, {0.0, 1.0}};

void BM_CoeffTensor(benchmark::State& state, Execution exec) {
    const int k = static_cast<int>(state.range(0)), p = static_cast<int>(state.range(1));
    const auto w = uniform_weights(k);
    for (auto _ : state) benchmark::DoNotOptimize(coeff_tensor(k, p, w, kLeg, exec).values().data());
    state.counters["entries"] = std::pow(p + 1.0, k);
    state.counters["threads"] = exec == Execution::Parallel ? omp_get_max_threads() : 1;
}

void BM_CoeffTensorReference(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0)), p = static_cast<int>(state.range(1));
    const auto w = uniform_weights(k);
    const std::vector<int> ps(k, p);
    for (auto _ : state) benchmark::DoNotOptimize(coeff_tensor_reference(ps, w, kLeg).values().data());
}

void BM_MseStudy(benchmark::State& state, Execution exec) {
    MseConfig cfg;
    cfg.weights = uniform_weights(2);
    cfg.idx = {1, 2};
    cfg.p_list = {4, 16, 64};
    cfg.N = 1024;
    cfg.samples = static_cast<int>(state.range(0));
    cfg.exec = exec;
    for (auto _ : state) benchmark::DoNotOptimize(mse_study(cfg).back().mse);
}

void BM_StrongOrder(benchmark::State& state, Execution exec) {
    StudyConfig cfg;
    cfg.steps = {16, 64, 256};
    cfg.fine_steps = 4096;
    cfg.paths = static_cast<int>(state.range(0));
    cfg.exec = exec;
    const SdeModel model = SdeModel::noncommutative();
    for (auto _ : state) benchmark::DoNotOptimize(strong_order_study(model, cfg).slope);
}

}  // namespace

BENCHMARK_CAPTURE(BM_CoeffTensor, serial, Execution::Serial)->Args({3, 16})->Args({3, 32})->Args({4, 24})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CoeffTensor, parallel, Execution::Parallel)->Args({3, 16})->Args({3, 32})->Args({4, 24})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoeffTensorReference)->Args({3, 16})->Args({4, 8})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MseStudy, serial, Execution::Serial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MseStudy, parallel, Execution::Parallel)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_StrongOrder, serial, Execution::Serial)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_StrongOrder, parallel, Execution::Parallel)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
