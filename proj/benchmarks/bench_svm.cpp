#include <benchmark/benchmark.h>

#include "boostdet/eval.hpp"
#include "boostdet/svm.hpp"

using namespace boostdet;

namespace {

void BM_TrainSvm(benchmark::State& state) {
    const Dataset data = gen_two_gaussians(state.range(0), 2.0, 3, 1.8);
    for (auto _ : state) {
        const RbfSvmModel m = train_svm(data, KernelSpec::rbf(1.0), 1.0);
        benchmark::DoNotOptimize(m.bias);
    }
}
BENCHMARK(BM_TrainSvm)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_SvmDecision(benchmark::State& state) {
    const Dataset data = gen_two_gaussians(400, 2.0, 3, 1.8);
    const RbfSvmModel m = train_svm(data, KernelSpec::rbf(1.0), 1.0);
    const double x[2] = {0.5, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(svm_decision(m, x));
}
BENCHMARK(BM_SvmDecision);

void BM_KernelEval(benchmark::State& state) {
    std::vector<double> a(state.range(0), 0.25), b(state.range(0), -0.5);
    const KernelSpec k = KernelSpec::rbf(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(kernel_eval(k, a, b));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KernelEval)->Arg(2)->Arg(16)->Arg(128);

}  // namespace
