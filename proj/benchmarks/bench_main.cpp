#include <random>

#include <benchmark/benchmark.h>

#include "nchodge/cochain.hpp"
#include "nchodge/godbillon_vey.hpp"
#include "nchodge/spectral.hpp"
#include "nchodge/tangential.hpp"

using namespace nchodge;

namespace {

// Fresh window per iteration so the block cache does not hide assembly cost.
void BM_AssembleOperators(benchmark::State& state) {
    const auto n_max = static_cast<std::size_t>(state.range(0));
    const auto algebra = algebras::matrices_2x2<Rational>();
    for (auto _ : state) {
        FormsWindow<Rational> w(algebra, n_max);
        benchmark::DoNotOptimize(w.operator_matrices());
    }
}
BENCHMARK(BM_AssembleOperators)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ExactSpectralData(benchmark::State& state) {
    const auto degree = static_cast<std::size_t>(state.range(0));
    FormsWindow<Rational> w(algebras::group_z3<Rational>(), degree + 1);
    w.assemble();
    for (auto _ : state) benchmark::DoNotOptimize(spectral_data(w, degree));
}
BENCHMARK(BM_ExactSpectralData)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_FloatSpectralData(benchmark::State& state) {
    const auto degree = static_cast<std::size_t>(state.range(0));
    FormsWindow<Complex> w(algebras::matrices_2x2<Complex>(), degree + 1);
    w.assemble();
    for (auto _ : state) benchmark::DoNotOptimize(spectral_data(w, degree));
}
BENCHMARK(BM_FloatSpectralData)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_CircleTorsion(benchmark::State& state) {
    const auto c = twisted_circle_complex(Complex(0.0, 1.0), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rs_torsion(c).log_torsion);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CircleTorsion)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_HodgeDecompose(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto rc = random_complex(rng);
    HodgePackage pkg(rc.complex);
    const Eigen::VectorXcd v = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(rc.complex.dims[0]));
    for (auto _ : state) benchmark::DoNotOptimize(pkg.decompose(0, v));
}
BENCHMARK(BM_HodgeDecompose);

void BM_TorusWittenSweep(benchmark::State& state) {
    LeafSpec leaf;
    leaf.kind = LeafKind::torus;
    leaf.n = static_cast<std::size_t>(state.range(0));
    const auto model = make_model(leaf, {0.0, 0.5});
    const auto phi = sample_phi(model, "random", 7);
    for (auto _ : state) benchmark::DoNotOptimize(witten_betti_sweep(model, phi, {0.0, 1.0}));
}
BENCHMARK(BM_TorusWittenSweep)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_GodbillonVey(benchmark::State& state) {
    const auto form = builtin_one_form("dz+sin(2piz)dx");
    const auto field = sample_one_form(form, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(godbillon_vey(field).gv);
}
BENCHMARK(BM_GodbillonVey)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
