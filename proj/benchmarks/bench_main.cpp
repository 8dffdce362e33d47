#include <benchmark/benchmark.h>

#include <vector>

#include "bifconj/catalog.hpp"
#include "bifconj/conjugacy.hpp"
#include "bifconj/estimates.hpp"
#include "bifconj/fixedpoints.hpp"

using namespace bifconj;

namespace {

ConjugacyMap tc_map(Region r, double alpha) {
    const auto pair = catalog_pair(NFKind::TC, 1);
    return build_conjugacy(pair.Phi, pair.phi, 0.1, alpha, r, HalfPlane::Lower);
}

void BM_BuildInner(benchmark::State& st) {
    const auto pair = catalog_pair(NFKind::TC, 1);
    for (auto _ : st) {
        benchmark::DoNotOptimize(
            build_conjugacy(pair.Phi, pair.phi, 0.1, 0.005, Region::Inner, HalfPlane::Lower));
    }
}
BENCHMARK(BM_BuildInner)->Unit(benchmark::kMillisecond);

void BM_EvaluateScalar(benchmark::State& st) {
    const auto J = tc_map(Region::Inner, 0.005);
    const auto [lo, hi] = J.interval();
    const auto xs = uniform_grid(lo, hi, 256);
    for (auto _ : st) {
        for (double x : xs) benchmark::DoNotOptimize(J(x));
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_EvaluateScalar)->Unit(benchmark::kMicrosecond);

void BM_EvaluateBatch(benchmark::State& st) {
    const auto J = tc_map(Region::Inner, 0.005);
    const auto [lo, hi] = J.interval();
    const auto xs = uniform_grid(lo, hi, 256);
    for (auto _ : st) benchmark::DoNotOptimize(J.values(xs));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_EvaluateBatch)->Unit(benchmark::kMicrosecond);

void BM_MonotoneInverse(benchmark::State& st) {
    const auto nf = make_pf_normal_form(sin_tail(), 1.0);
    double y = -0.05;
    for (auto _ : st) {
        benchmark::DoNotOptimize(monotone_inverse(nf, 0.1, 0.002, y));
        y = y < -0.01 ? y + 1e-6 : -0.05;
    }
}
BENCHMARK(BM_MonotoneInverse);

void BM_SupIdMinusJ(benchmark::State& st) {
    const auto J = tc_map(Region::Outer, -0.005);
    for (auto _ : st) benchmark::DoNotOptimize(sup_id_minus_J(J, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_SupIdMinusJ)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_FixedPointScan(benchmark::State& st) {
    const auto m = catalog_map("pf-phi", 1);
    for (auto _ : st) benchmark::DoNotOptimize(find_fixed_points(m.eval, 0.1, 0.003, -1.0, 1.0));
}
BENCHMARK(BM_FixedPointScan)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
