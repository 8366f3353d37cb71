// Serial reference vs OpenMP kernels over grid sizes.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "banditlab/kernels.hpp"

namespace k = banditlab::kernels;

namespace {

struct Grid {
    std::vector<double> x, w, out;
    explicit Grid(std::size_t n) : x(n), w(n), out(n) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = (i + 0.5) / static_cast<double>(n);
            w[i] = std::exp(-8.0 * (x[i] - 0.4) * (x[i] - 0.4));
        }
    }
};

template <bool Par>
void BM_exp_tilt(benchmark::State& st) {
    Grid g(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        double z = Par ? k::omp::exp_tilt(g.x, g.w, 1.3, -0.7, g.out) : k::serial::exp_tilt(g.x, g.w, 1.3, -0.7, g.out);
        benchmark::DoNotOptimize(z);
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Par>
void BM_moments(benchmark::State& st) {
    Grid g(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        auto m = Par ? k::omp::moments(g.x, g.w) : k::serial::moments(g.x, g.w);
        benchmark::DoNotOptimize(m);
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Par>
void BM_power_moment_table(benchmark::State& st) {
    Grid g(static_cast<std::size_t>(st.range(0)));
    const int order = 8;
    std::vector<double> table((order + 1) * (order + 1));
    for (auto _ : st) {
        if (Par)
            k::omp::power_moment_table(g.x, g.w, order, table);
        else
            k::serial::power_moment_table(g.x, g.w, order, table);
        benchmark::DoNotOptimize(table.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Par>
void BM_mixture_normal_density(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    Grid g(n);
    std::vector<double> xs(256), out(256);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = -4.0 + 8.0 * i / 255.0;
    for (auto _ : st) {
        if (Par)
            k::omp::mixture_normal_density(g.x, g.w, xs, out);
        else
            k::serial::mixture_normal_density(g.x, g.w, xs, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0) * 256);
}

template <bool Par>
void BM_stop_loss(benchmark::State& st) {
    Grid g(static_cast<std::size_t>(st.range(0)));
    std::vector<double> b(64), out(64);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = i / 63.0;
    for (auto _ : st) {
        if (Par)
            k::omp::stop_loss(g.x, g.w, b, out);
        else
            k::serial::stop_loss(g.x, g.w, b, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0) * 64);
}

template <bool Par>
void BM_tilted_mean(benchmark::State& st) {
    Grid g(static_cast<std::size_t>(st.range(0)));
    std::vector<double> logw(g.w.size());
    for (std::size_t i = 0; i < logw.size(); ++i) logw[i] = std::log(g.w[i]);
    for (auto _ : st) {
        double m = Par ? k::omp::tilted_mean(g.x, logw, 2.0, -1.0) : k::serial::tilted_mean(g.x, logw, 2.0, -1.0);
        benchmark::DoNotOptimize(m);
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

#define BOTH(fn, hi)                                                                        \
    BENCHMARK(fn<false>)->Name(#fn "/serial")->RangeMultiplier(8)->Range(1 << 10, hi); \
    BENCHMARK(fn<true>)->Name(#fn "/omp")->RangeMultiplier(8)->Range(1 << 10, hi)

BOTH(BM_exp_tilt, 1 << 19);
BOTH(BM_moments, 1 << 19);
BOTH(BM_power_moment_table, 1 << 19);
BOTH(BM_mixture_normal_density, 1 << 15);  // 256 outputs per grid point
BOTH(BM_stop_loss, 1 << 18);
BOTH(BM_tilted_mean, 1 << 19);

BENCHMARK_MAIN();
