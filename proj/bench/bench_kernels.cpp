// Serial reference vs OpenMP kernels, plus whole solves.
//   ./bench_kernels --benchmark_filter=contract

#include <benchmark/benchmark.h>

#include <vector>

#include "sinktrack/kernels.hpp"
#include "sinktrack/simlab.hpp"
#include "sinktrack/tracker.hpp"

namespace {

using namespace sinktrack;

struct Fixture3 {
    Tensor3 cost, kernel;
    std::vector<double> u, v, w;
    Matrix partial;

    explicit Fixture3(std::size_t d) : kernel(d), u(d, 1.0), v(d, 1.0), w(d, 1.0), partial(d, d) {
        const auto seq = gen_constant_velocity(d, 0.5, 3, 7);
        cost = acceleration_cost(seq[0], seq[1], seq[2]).entries();
        const std::vector<double> zero(d, 0.0);
        kernels::serial::gibbs_kernel3(cost, 1.0, zero, zero, zero, kernel);
    }
};

template <Exec E>
void BM_ContractLast(benchmark::State& state) {
    Fixture3 fx(state.range(0));
    for (auto _ : state) {
        kernels::contract_last(E, fx.kernel, fx.w, fx.partial);
        benchmark::DoNotOptimize(fx.partial.data().data());
    }
    state.SetBytesProcessed(state.iterations() * fx.kernel.size() * sizeof(double));
}

template <Exec E>
void BM_ContractFront(benchmark::State& state) {
    Fixture3 fx(state.range(0));
    std::vector<double> out(fx.u.size());
    for (auto _ : state) {
        kernels::contract_front(E, fx.kernel, fx.u, fx.v, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetBytesProcessed(state.iterations() * fx.kernel.size() * sizeof(double));
}

template <Exec E>
void BM_Gibbs3(benchmark::State& state) {
    Fixture3 fx(state.range(0));
    for (auto _ : state) {
        kernels::gibbs_kernel3(E, fx.cost, 100.0, fx.u, fx.v, fx.w, fx.kernel);
        benchmark::DoNotOptimize(fx.kernel.data().data());
    }
}

template <Exec E>
void BM_AxisLogSumExp(benchmark::State& state) {
    Fixture3 fx(state.range(0));
    std::vector<double> out(fx.u.size());
    const int axis = static_cast<int>(state.range(1));
    for (auto _ : state) {
        kernels::axis_logsumexp3(E, fx.cost, 100.0, fx.u, fx.v, fx.w, axis, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <Exec E>
void BM_MatvecT(benchmark::State& state) {
    const std::size_t d = state.range(0);
    Matrix k(d, d, 0.5);
    std::vector<double> u(d, 1.0), out(d);
    for (auto _ : state) {
        kernels::matvec_t(E, k, u, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_Sinkhorn3(benchmark::State& state) {
    const std::size_t d = state.range(0);
    const auto seq = gen_constant_velocity(d, 0.5, 3, 7);
    SolverOptions opts;
    opts.stabilized = true;
    opts.max_iterations = 100;
    for (auto _ : state) {
        auto res = track_accel_3d(seq[0], seq[1], seq[2], opts);
        benchmark::DoNotOptimize(res.performance_index);
    }
}

void BM_Sinkhorn2(benchmark::State& state) {
    const std::size_t d = state.range(0);
    const auto seq = gen_constant_velocity(d, 0.5, 3, 7);
    SolverOptions opts;
    opts.stabilized = true;
    opts.max_iterations = 1000;
    for (auto _ : state) {
        auto res = track_speed(seq[0], seq[1], opts);
        benchmark::DoNotOptimize(res.performance_index);
    }
}

} // namespace

BENCHMARK(BM_ContractLast<Exec::Serial>)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContractLast<Exec::Parallel>)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContractFront<Exec::Serial>)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContractFront<Exec::Parallel>)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gibbs3<Exec::Serial>)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gibbs3<Exec::Parallel>)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AxisLogSumExp<Exec::Serial>)->Args({100, 0})->Args({100, 1})->Args({100, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AxisLogSumExp<Exec::Parallel>)->Args({100, 0})->Args({100, 1})->Args({100, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatvecT<Exec::Serial>)->Arg(200)->Arg(512);
BENCHMARK(BM_MatvecT<Exec::Parallel>)->Arg(200)->Arg(512);
BENCHMARK(BM_Sinkhorn2)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sinkhorn3)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
