// Copyright 2026 The qcorr Authors
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

// Serial reference kernels against their OpenMP versions, plus the two
// sphere minimizers that sit on top of them.

#include <benchmark/benchmark.h>

#include "qcorr/kernels.hpp"
#include "qcorr/lmeasure.hpp"
#include "qcorr/oracle.hpp"

namespace {

using namespace qcorr;

const BlochState& sample() {
  static const BlochState s = from_density(random_density(7, SamplingMethod::ginibre_like));
  return s;
}

template <bool Parallel>
void BM_GridEvaluate(benchmark::State& st) {
  const InfoLossObjective obj(sample(), EntropySpec::von_neumann());
  const kernels::SphereGrid g = kernels::full_sphere_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto v = Parallel ? kernels::evaluate_parallel(g, obj) : kernels::evaluate_serial(g, obj);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(g.size()));
}
BENCHMARK(BM_GridEvaluate<false>)->Name("evaluate/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_GridEvaluate<true>)->Name("evaluate/parallel")->Arg(64)->Arg(256);

template <bool Parallel>
void BM_Argmin(benchmark::State& st) {
  const InfoLossObjective obj(sample(), EntropySpec::von_neumann());
  const auto v = kernels::evaluate_serial(kernels::full_sphere_grid(256), obj);
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? kernels::argmin_parallel(v) : kernels::argmin_serial(v));
}
BENCHMARK(BM_Argmin<false>)->Name("argmin/serial");
BENCHMARK(BM_Argmin<true>)->Name("argmin/parallel");

template <bool Parallel>
void BM_Minimize(benchmark::State& st) {
  OptimizerOptions o;
  o.parallel = Parallel;
  for (auto _ : st)
    benchmark::DoNotOptimize(minimize_info_loss(sample(), EntropySpec::tsallis(0.7), o).value);
}
BENCHMARK(BM_Minimize<false>)->Name("minimize/serial");
BENCHMARK(BM_Minimize<true>)->Name("minimize/parallel");

template <bool Parallel>
void BM_Oracle(benchmark::State& st) {
  OracleOptions o;
  o.parallel = Parallel;
  for (auto _ : st)
    benchmark::DoNotOptimize(oracle_minimize(sample(), EntropySpec::von_neumann(), o).value);
}
BENCHMARK(BM_Oracle<false>)->Name("oracle256/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle<true>)->Name("oracle256/parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
