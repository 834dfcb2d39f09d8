#include <benchmark/benchmark.h>

#include <vector>

#include "tblandscape/kernels.hpp"
#include "tblandscape/landscape.hpp"
#include "tblandscape/random_media.hpp"

using namespace tbl;

namespace {

Hamiltonian instance(int side) {
    const Lattice lat(2, side, Boundary::Dirichlet);
    return Hamiltonian(generate({Uniform{5.0}, 1, std::nullopt}, lat));
}

template <bool Parallel>
void BM_stencil(benchmark::State& state) {
    const Hamiltonian h = instance(static_cast<int>(state.range(0)));
    const auto v = h.potential().values();
    std::vector<double> x(h.size(), 1.0), y(h.size());
    for (auto _ : state) {
        if constexpr (Parallel) kernels::stencil_apply(h.lattice(), v, x, y);
        else kernels::stencil_apply_serial(h.lattice(), v, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(static_cast<long long>(state.iterations() * h.size()));
}

template <bool Parallel>
void BM_dot(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> a(n, 0.5), b(n, 2.0);
    for (auto _ : state) {
        double s = Parallel ? kernels::dot(a, b) : kernels::dot_serial(a, b);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(static_cast<long long>(state.iterations() * n));
}

template <bool Parallel>
void BM_landscape_cg(benchmark::State& state) {
    const Hamiltonian h = instance(static_cast<int>(state.range(0)));
    const std::vector<double> b(h.size(), 1.0);
    CgOptions opt;
    opt.parallel = Parallel;
    std::size_t iterations = 0;
    for (auto _ : state) {
        std::vector<double> x(h.size(), 0.0);
        iterations = conjugate_gradient(h, b, x, opt).iterations;
        benchmark::DoNotOptimize(x.data());
    }
    state.counters["cg_iterations"] = static_cast<double>(iterations);
    state.counters["threads"] = Parallel ? kernels::max_threads() : 1;
}

}  // namespace

BENCHMARK(BM_stencil<false>)->Name("stencil/serial")->Arg(100)->Arg(400);
BENCHMARK(BM_stencil<true>)->Name("stencil/openmp")->Arg(100)->Arg(400);
BENCHMARK(BM_dot<false>)->Name("dot/serial")->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(BM_dot<true>)->Name("dot/openmp")->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(BM_landscape_cg<false>)->Name("cg/serial")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_landscape_cg<true>)->Name("cg/openmp")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
