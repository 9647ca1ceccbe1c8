// Serial reference kernels against their OpenMP counterparts.
#include "pbundle/dynamics.hpp"
#include "pbundle/sweeps.hpp"

#include <benchmark/benchmark.h>

using namespace pbundle;

namespace {

const ModelParams kPoint{1.0, 1.0, 0.005, 1.0, 1.0};

Liouvillian generator(int n_max) { return build_liouvillian(kPoint, DissipationParams{}, Truncation(n_max)); }

void spmv_bench(benchmark::State& state, Exec exec) {
    const Liouvillian L = generator(static_cast<int>(state.range(0)));
    const Eigen::Index N = L.dim();
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(N), y(N);
    for (auto _ : state) {
        spmv(L.matrix, {x.data(), static_cast<std::size_t>(N)}, {y.data(), static_cast<std::size_t>(N)}, exec);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * L.matrix.nonZeros());
}

void BM_SpmvSerial(benchmark::State& s) { spmv_bench(s, Exec::serial); }
void BM_SpmvParallel(benchmark::State& s) { spmv_bench(s, Exec::parallel); }

void kron_bench(benchmark::State& state, bool parallel) {
    const Truncation t(static_cast<int>(state.range(0)));
    const SparseMatrix H = hamiltonian_rotated(kPoint, t).sparse();
    const SparseMatrix I = OperatorMatrix::identity(t).sparse();
    for (auto _ : state) {
        SparseMatrix K = parallel ? kron_parallel(I, H) : kron_serial(I, H);
        benchmark::DoNotOptimize(K.valuePtr());
    }
}

void BM_KronSerial(benchmark::State& s) { kron_bench(s, false); }
void BM_KronParallel(benchmark::State& s) { kron_bench(s, true); }

void sweep_bench(benchmark::State& state, Exec exec) {
    SweepSpec spec;
    spec.axes = {AxisSpec{"Omega", -1.5, 1.5, 16, false}};
    spec.model = kPoint;
    spec.bindings = {"g_k=Omega"};
    spec.point.n_max = static_cast<int>(state.range(0));
    spec.point.adaptive = false;
    for (auto _ : state) {
        SweepResult r = run_sweep(spec, exec);
        benchmark::DoNotOptimize(r.points.data());
    }
}

void BM_SweepSerial(benchmark::State& s) { sweep_bench(s, Exec::serial); }
void BM_SweepParallel(benchmark::State& s) { sweep_bench(s, Exec::parallel); }

}  // namespace

BENCHMARK(BM_SpmvSerial)->Arg(20)->Arg(40);
BENCHMARK(BM_SpmvParallel)->Arg(20)->Arg(40);
BENCHMARK(BM_KronSerial)->Arg(20)->Arg(40);
BENCHMARK(BM_KronParallel)->Arg(20)->Arg(40);
BENCHMARK(BM_SweepSerial)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
