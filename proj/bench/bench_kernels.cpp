#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "radkin/kernels.hpp"

using namespace radkin;
using namespace radkin::kernels;

namespace {

struct Problem {
    Layout lay;
    std::vector<double> g;
    std::vector<double> speed;
    std::vector<double> accel;
};

Problem make_problem(int nz, int nv) {
    Problem p;
    p.lay.nz = nz;
    p.lay.nv = nv;
    p.lay.dz = 1.0 / nz;
    p.lay.dv = 1.0 / nv;
    p.g.resize(p.lay.size());
    p.speed.resize(static_cast<std::size_t>(nv));
    p.accel.resize(p.lay.size());
    for (int j = 0; j < nv; ++j) {
        const double v = (j + 0.5) / nv - 0.5;
        p.speed[static_cast<std::size_t>(j)] = v / std::sqrt(1.0 + v * v);
    }
    for (int i = 0; i < nz; ++i)
        for (int j = 0; j < nv; ++j) {
            const double z = (i + 0.5) / nz;
            const double v = (j + 0.5) / nv - 0.5;
            const std::size_t k = static_cast<std::size_t>(i) * nv + j;
            p.g[k] = std::exp(-v * v / 0.02) * (1.0 + 0.1 * std::cos(6.283185307179586 * z));
            p.accel[k] = 0.05 * std::sin(6.283185307179586 * z);
        }
    return p;
}

template <ZSweep (*Sweep)(std::span<double>, const Layout&, std::span<const double>, double, AdvectionScheme)>
void advect_z_bench(benchmark::State& state) {
    Problem p = make_problem(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    const double dt = 0.4 * p.lay.dz;
    for (auto _ : state) {
        auto out = Sweep(p.g, p.lay, p.speed, dt, AdvectionScheme::LaxWendroffPositive);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(p.lay.size()));
}

template <VSweep (*Sweep)(std::span<double>, const Layout&, std::span<const double>, double, AdvectionScheme)>
void advect_v_bench(benchmark::State& state) {
    Problem p = make_problem(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    const double dt = 0.4 * p.lay.dv / 0.05;
    for (auto _ : state) {
        auto out = Sweep(p.g, p.lay, p.accel, dt, AdvectionScheme::LaxWendroffPositive);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(p.lay.size()));
}

}  // namespace

BENCHMARK(advect_z_bench<serial::advect_z>)->Name("advect_z/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(advect_z_bench<omp::advect_z>)->Name("advect_z/omp")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(advect_v_bench<serial::advect_v>)->Name("advect_v/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(advect_v_bench<omp::advect_v>)->Name("advect_v/omp")->Arg(128)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
