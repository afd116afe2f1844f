#include <benchmark/benchmark.h>

#include "mdplab/bounds.hpp"
#include "mdplab/ergodicity.hpp"
#include "mdplab/linalg.hpp"
#include "mdplab/mdp.hpp"

using namespace mdplab;

namespace {

Matrix random_chain(int n, std::uint64_t seed) {
    DeterministicRng rng(seed);
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        const Vector row = rng.simplex(n);
        for (int j = 0; j < n; ++j) p(i, j) = row[j];
    }
    return p;
}

Policy random_policy(int n_states, int n_actions, std::uint64_t seed) {
    DeterministicRng rng(seed);
    Policy pi;
    pi.probs = Matrix(n_states, n_actions);
    for (int x = 0; x < n_states; ++x) {
        const Vector row = rng.simplex(n_actions);
        for (int a = 0; a < n_actions; ++a) pi.probs(x, a) = row[a];
    }
    return pi;
}

} // namespace

static void BM_GroupInverse(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix p = random_chain(n, 1);
    const Vector d = stationary_distribution(p);
    for (auto _ : state) {
        auto result = group_inverse(p, d);
        benchmark::DoNotOptimize(result.d);
    }
}
BENCHMARK(BM_GroupInverse)->Arg(25)->Arg(50)->Arg(100)->Arg(200);

static void BM_Tau1(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix p = random_chain(n, 2);
    const Vector d = stationary_distribution(p);
    const Matrix dm = group_inverse(p, d).d;
    for (auto _ : state) {
        auto coeff = tau1(dm);
        benchmark::DoNotOptimize(coeff.value);
    }
}
BENCHMARK(BM_Tau1)->Arg(25)->Arg(50)->Arg(100)->Arg(200);

static void BM_Eigenvalues(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix p = random_chain(n, 3);
    for (auto _ : state) {
        auto eig = eigenvalues(p);
        benchmark::DoNotOptimize(eig.values);
    }
}
BENCHMARK(BM_Eigenvalues)->Arg(25)->Arg(50)->Arg(100)->Arg(200);

static void BM_RefinedBound(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mdp mdp = garnet(n, 4, std::max(2, n / 4), 0.2, 5);
    const Policy pi = random_policy(n, 4, 11);
    const Policy pi_tilde = random_policy(n, 4, 12);
    for (auto _ : state) {
        auto report = refined_bound(mdp, pi, pi_tilde, 0.99);
        benchmark::DoNotOptimize(report.refined_rhs);
    }
}
BENCHMARK(BM_RefinedBound)->Arg(10)->Arg(50)->Arg(100);

static void BM_OccupancySeries(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    InducedChain chain;
    chain.transition = random_chain(n, 4);
    chain.reward.assign(n, 0.0);
    const Vector mu(n, 1.0 / n);
    for (auto _ : state) {
        auto occ = occupancy(chain, mu, 0.99, OccupancyMethod::series);
        benchmark::DoNotOptimize(occ.dist);
    }
}
BENCHMARK(BM_OccupancySeries)->Arg(25)->Arg(100);

BENCHMARK_MAIN();
