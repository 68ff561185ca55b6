// OpenMP kernels against their serial references. On a single-core host the
// two columns should match; the gap shows up with OMP_NUM_THREADS > 1.

#include <random>

#include <benchmark/benchmark.h>

#include "covest/harness.hpp"
#include "covest/kernels.hpp"

using namespace covest;

namespace {

DirectionMatrix random_directions(Index n, Index l, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    DirectionMatrix u(n, l);
    for (Index j = 0; j < l; ++j)
        for (Index i = 0; i < n; ++i)
            u(i, j) = {g(rng), g(rng)};
    return u;
}

HermitianMatrix random_q(Index n) {
    const DirectionMatrix b = random_directions(n, n, 7);
    return HermitianMatrix(Eigen::MatrixXcd(b * b.adjoint()));
}

template <bool Parallel>
void probe_powers(benchmark::State& state) {
    const Index n = state.range(0), l = state.range(1);
    const DirectionMatrix u = random_directions(n, l, 1);
    const HermitianMatrix q = random_q(n);
    RealVector out(l);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::probe_powers(q, u, 10.0, out);
        else
            kernels::reference::probe_powers(q, u, 10.0, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void weighted_dyads(benchmark::State& state) {
    const Index n = state.range(0), l = state.range(1);
    const DirectionMatrix u = random_directions(n, l, 2);
    std::vector<double> w(static_cast<std::size_t>(l), 0.5);
    for (auto _ : state) {
        HermitianMatrix g = Parallel ? kernels::weighted_dyads(u, w, 1.0)
                                     : kernels::reference::weighted_dyads(u, w, 1.0);
        benchmark::DoNotOptimize(g);
    }
}

template <bool Parallel>
void glm_design(benchmark::State& state) {
    const DirectionMatrix u = random_directions(state.range(0), state.range(1), 3);
    for (auto _ : state) {
        Eigen::MatrixXd a = Parallel ? kernels::glm_design(u) : kernels::reference::glm_design(u);
        benchmark::DoNotOptimize(a.data());
    }
}

template <bool Parallel>
void matvec(benchmark::State& state) {
    const Index m = state.range(0);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(m, m);
    const RealVector x = RealVector::Random(m);
    RealVector y(m);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::matvec(a, x, y);
        else
            kernels::reference::matvec(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

template <bool Parallel>
void sweep(benchmark::State& state) {
    ExperimentPlan plan;
    plan.measurement_counts = {20, 60};
    plan.estimators = {EstimatorKind::exact_ml, EstimatorKind::approx_ml, EstimatorKind::max_power};
    plan.trials = static_cast<int>(state.range(0));
    plan.seed = 5;
    for (auto _ : state) {
        SweepResult r = Parallel ? run_sweep(plan) : run_sweep_serial(plan);
        benchmark::DoNotOptimize(r.rows.data());
    }
}

}  // namespace

BENCHMARK(probe_powers<false>)->Args({16, 60})->Args({16, 800})->Args({64, 2000});
BENCHMARK(probe_powers<true>)->Args({16, 60})->Args({16, 800})->Args({64, 2000});
BENCHMARK(weighted_dyads<false>)->Args({16, 60})->Args({16, 800})->Args({64, 2000});
BENCHMARK(weighted_dyads<true>)->Args({16, 60})->Args({16, 800})->Args({64, 2000});
BENCHMARK(glm_design<false>)->Args({16, 60})->Args({16, 400});
BENCHMARK(glm_design<true>)->Args({16, 60})->Args({16, 400});
BENCHMARK(matvec<false>)->Arg(61)->Arg(401)->Arg(2001);
BENCHMARK(matvec<true>)->Arg(61)->Arg(401)->Arg(2001);
BENCHMARK(sweep<false>)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep<true>)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
