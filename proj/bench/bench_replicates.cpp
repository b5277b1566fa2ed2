// Copyright 2026 The ratiolab Authors.
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


// Serial reference driver vs the OpenMP driver on the same replicate work.

#include <benchmark/benchmark.h>

#include "ratiolab/sim.hpp"

namespace {

using namespace ratiolab;

ReplicateFn halfline_work(long n) {
  return [n](long, std::uint64_t key) {
    auto b = draw_sample(Law::uniform1d(), n, key);
    return sup_halfline(b, 1.0 / static_cast<double>(n), 0.5, NormWeight::power(1.0)).value;
  };
}

ReplicateFn box_work(long n) {
  return [n](long, std::uint64_t key) {
    auto b = draw_sample(Law::uniform_box(2), n, key);
    double r = 1.0 / std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n)));
    return sup_box(b, r, 0.5, NormWeight::power(1.0)).value;
  };
}

void BM_HalflineSerial(benchmark::State& st) {
  auto fn = halfline_work(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_replicates_serial(32, 20240601, fn));
}

void BM_HalflineOpenMP(benchmark::State& st) {
  auto fn = halfline_work(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_replicates(32, 20240601, default_workers(), fn));
}

void BM_BoxSerial(benchmark::State& st) {
  auto fn = box_work(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_replicates_serial(8, 20240601, fn));
}

void BM_BoxOpenMP(benchmark::State& st) {
  auto fn = box_work(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_replicates(8, 20240601, default_workers(), fn));
}

}  // namespace

BENCHMARK(BM_HalflineSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HalflineOpenMP)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoxSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoxOpenMP)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
