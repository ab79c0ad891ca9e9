// Copyright 2026 The sparsedict Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "sparsedict/bsum.hpp"
#include "sparsedict/denoise.hpp"
#include "sparsedict/hardness.hpp"
#include "sparsedict/proxops.hpp"
#include "sparsedict/rng.hpp"

namespace sd = sparsedict;

namespace {

sd::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  auto rng = sd::SeedTree(seed).engine("bench");
  return sd::gaussian_matrix(rows, cols, rng);
}

void BM_SoftShrink(benchmark::State& state) {
  const auto n = state.range(0);
  const sd::Matrix C = random_matrix(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sd::proxops::soft_shrink(C, 0.5));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SoftShrink)->Arg(64)->Arg(256);

void BM_SigmaMaxSq(benchmark::State& state) {
  const sd::Matrix M = random_matrix(state.range(0), 4 * state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(sd::proxops::sigma_max_sq(M));
}
BENCHMARK(BM_SigmaMaxSq)->Arg(16)->Arg(64);

void BM_NonnegL1Atoms(benchmark::State& state) {
  const sd::Matrix A = random_matrix(64, 256, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sd::proxops::project_nonneg_l1_atoms(A, 1.0));
}
BENCHMARK(BM_NonnegL1Atoms);

// One block-update sweep per benchmark iteration at n=64, N=1024, k=128.
void BM_BsumIteration(benchmark::State& state) {
  const sd::Matrix Y = random_matrix(64, 1024, 4);
  const sd::Matrix A0 = sd::proxops::project_frobenius_ball(random_matrix(64, 128, 5), 128.0);
  sd::bsum::BsumProblem p{sd::TrainingMatrix(Y)};
  p.k = 128;
  p.lambda = 0.1;
  p.regime = sd::TotalNorm{128.0};
  p.initial_dictionary = A0;
  p.config.max_iters = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sd::bsum::solve(p));
}
BENCHMARK(BM_BsumIteration)->Unit(benchmark::kMillisecond);

void BM_OmpBatch(benchmark::State& state) {
  const sd::Matrix A = sd::denoise::overcomplete_dct(64, 256).atoms();
  const sd::Matrix Y = random_matrix(64, 1024, 6);
  const auto budget = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sd::denoise::omp_batch(Y, A, budget, 1e-6));
}
BENCHMARK(BM_OmpBatch)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_DensestCut(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = sd::SeedTree(7).engine("graph");
  std::bernoulli_distribution coin(0.5);
  std::vector<std::pair<int, int>> edges;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  const sd::hardness::GraphInstance g(n, edges);
  for (auto _ : state) benchmark::DoNotOptimize(sd::hardness::densest_cut_bruteforce(g));
}
BENCHMARK(BM_DensestCut)->Arg(10)->Arg(16)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
