// Compares the OpenMP kernels against their serial reference
// implementations, plus end-to-end denoiser forward/backward timings.
//
//   ./bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <vector>

#include "coldwave/denoiser.hpp"
#include "coldwave/kernels.hpp"
#include "coldwave/rng.hpp"
#include "coldwave/signal.hpp"

using coldwave::Rng;
namespace kernels = coldwave::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

void bm_lincomb2_ref(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vec(n, 1), y = random_vec(n, 2);
    std::vector<double> out(n);
    for (auto _ : state) {
        kernels::ref::lincomb2(0.7, x, 0.3, y, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_lincomb2_omp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vec(n, 1), y = random_vec(n, 2);
    std::vector<double> out(n);
    for (auto _ : state) {
        kernels::lincomb2(0.7, x, 0.3, y, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_sum_abs_diff_ref(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vec(n, 1), y = random_vec(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::ref::sum_abs_diff(x, y));
}

void bm_sum_abs_diff_omp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vec(n, 1), y = random_vec(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::sum_abs_diff(x, y));
}

template <void (*Gemm)(std::span<const double>, std::span<const double>, std::span<double>,
                       std::size_t, std::size_t, std::size_t, bool)>
void bm_gemm(benchmark::State& state) {
    const std::size_t n = 32;  // frames
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto a = random_vec(n * k, 1), b = random_vec(m * k, 2);
    std::vector<double> c(n * m);
    for (auto _ : state) {
        Gemm(a, b, c, n, k, m, false);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(2 * n * k * m));
}

void bm_denoiser_restore(benchmark::State& state) {
    coldwave::DenoiserConfig cfg;
    cfg.hidden = static_cast<int>(state.range(0));
    coldwave::DenoiserNet net(cfg, 7);
    coldwave::Signal x(random_vec(8000, 3), 8000);
    for (auto _ : state) benchmark::DoNotOptimize(net.restore(x, 25).samples.data());
}

void bm_denoiser_forward_backward(benchmark::State& state) {
    coldwave::DenoiserConfig cfg;
    cfg.hidden = static_cast<int>(state.range(0));
    coldwave::DenoiserNet net(cfg, 7);
    coldwave::Signal x(random_vec(8000, 3), 8000);
    const auto grad_out = random_vec(8000, 4);
    for (auto _ : state) benchmark::DoNotOptimize(net.forward_backward(x, 25, grad_out).data());
}

}  // namespace

BENCHMARK(bm_lincomb2_ref)->Arg(8000)->Arg(1 << 20);
BENCHMARK(bm_lincomb2_omp)->Arg(8000)->Arg(1 << 20);
BENCHMARK(bm_sum_abs_diff_ref)->Arg(8000)->Arg(1 << 20);
BENCHMARK(bm_sum_abs_diff_omp)->Arg(8000)->Arg(1 << 20);
BENCHMARK(bm_gemm<kernels::ref::gemm_nt>)->Name("bm_gemm_nt_ref")->Arg(256)->Arg(512);
BENCHMARK(bm_gemm<kernels::gemm_nt>)->Name("bm_gemm_nt_omp")->Arg(256)->Arg(512);
BENCHMARK(bm_gemm<kernels::ref::gemm_nn>)->Name("bm_gemm_nn_ref")->Arg(256)->Arg(512);
BENCHMARK(bm_gemm<kernels::gemm_nn>)->Name("bm_gemm_nn_omp")->Arg(256)->Arg(512);
BENCHMARK(bm_gemm<kernels::ref::gemm_tn>)->Name("bm_gemm_tn_ref")->Arg(256)->Arg(512);
BENCHMARK(bm_gemm<kernels::gemm_tn>)->Name("bm_gemm_tn_omp")->Arg(256)->Arg(512);
BENCHMARK(bm_denoiser_restore)->Arg(128)->Arg(512);
BENCHMARK(bm_denoiser_forward_backward)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
