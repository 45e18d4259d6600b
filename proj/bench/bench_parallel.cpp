// Serial reference kernels against their OpenMP versions.
#include "ocl/bounds.hpp"
#include "ocl/montecarlo.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

ocl::ExperimentSpec gossip_spec(std::size_t realizations) {
    ocl::ExperimentSpec spec;
    spec.params = ocl::SystemParams::from_ratio(10, 10.0);
    spec.model = ocl::Model::gossip;
    spec.algorithm = ocl::Algorithm::gossip;
    spec.stop = ocl::EventCount{2000};
    spec.realizations = realizations;
    spec.seed = 3;
    return spec;
}

std::vector<double> rho_grid() {
    std::vector<double> rhos(64);
    for (std::size_t k = 0; k < rhos.size(); ++k) rhos[k] = 0.1 * std::pow(1e4, k / 63.0);
    return rhos;
}

void BM_mse_serial(benchmark::State& state) {
    const auto spec = gossip_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ocl::estimate_mse_serial(spec));
}

void BM_mse_parallel(benchmark::State& state) {
    const auto spec = gossip_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ocl::estimate_mse(spec));
}

void BM_sis_curve_serial(benchmark::State& state) {
    const auto base = ocl::SystemParams::from_ratio(static_cast<std::size_t>(state.range(0)), 0.0);
    const auto rhos = rho_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(ocl::evaluate_curve_serial(ocl::BoundModel::sis, base, rhos, 1.0));
}

void BM_sis_curve_parallel(benchmark::State& state) {
    const auto base = ocl::SystemParams::from_ratio(static_cast<std::size_t>(state.range(0)), 0.0);
    const auto rhos = rho_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(ocl::evaluate_curve(ocl::BoundModel::sis, base, rhos, 1.0));
}

}  // namespace

BENCHMARK(BM_mse_serial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mse_parallel)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sis_curve_serial)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sis_curve_parallel)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
