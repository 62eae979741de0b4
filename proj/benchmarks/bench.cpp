#include <benchmark/benchmark.h>

#include "ipsae/data.hpp"
#include "ipsae/eval.hpp"
#include "ipsae/linalg.hpp"
#include "ipsae/model.hpp"
#include "ipsae/rng.hpp"

namespace {

using namespace ipsae;

Matrix seeded_psd(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    Matrix g(n, n);
    for (double& x : g.data()) x = rng.next_gaussian();
    Matrix m = matmul(transpose(g), g);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    }
    return m;
}

void BM_SymEigendecompose(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix m = seeded_psd(1, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sym_eigendecompose(m));
    }
}
BENCHMARK(BM_SymEigendecompose)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_SolveSylvesterSym(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a = seeded_psd(2, n / 2);
    const Matrix b = seeded_psd(3, n);
    Rng rng(4);
    Matrix c(n / 2, n);
    for (double& x : c.data()) x = rng.next_gaussian();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sylvester_sym(a, b, c));
    }
}
BENCHMARK(BM_SolveSylvesterSym)->Arg(16)->Arg(32)->Arg(64);

void BM_FitAndClassify(benchmark::State& state) {
    SyntheticConfig cfg;
    cfg.d = 32;
    cfg.k = 12;
    cfg.n_per_class = static_cast<std::size_t>(state.range(0));
    cfg.c_seen = 15;
    cfg.c_unseen = 5;
    cfg.noise_sigma = 0.3;
    cfg.seed = 42;
    const ZslDataset ds = generate_synthetic(cfg);
    const auto train = seen_sample_indices(ds);
    for (auto _ : state) {
        const IpSaeModel model = fit(ds, train, 1.0, SpaceMode::kEnriched);
        benchmark::DoNotOptimize(run_zsl(model, ds, ClassifyMode::kCandidateConditioned));
    }
}
BENCHMARK(BM_FitAndClassify)->Arg(10)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
