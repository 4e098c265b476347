// Copyright 2026 The Rideshare Mechanisms Authors
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

#include "rideshare/allocation.hpp"
#include "rideshare/audit.hpp"
#include "rideshare/corpus.hpp"
#include "rideshare/payments.hpp"
#include "rideshare/simulate.hpp"

namespace {

using namespace rideshare;

const char* const kScenarios[] = {"linear-pair", "four-commuters-mixed", "three-seat-van",
                                  "six-commuters"};

void BM_EfficientAllocation(benchmark::State& state) {
  const auto s = corpus::by_name(kScenarios[state.range(0)]);
  const auto solver = state.range(1) == 0 ? Solver::Exhaustive : Solver::BranchAndBound;
  for (auto _ : state) benchmark::DoNotOptimize(efficient_allocation(s, solver));
  state.SetLabel(kScenarios[state.range(0)]);
}
BENCHMARK(BM_EfficientAllocation)->ArgsProduct({{0, 1, 2, 3}, {0, 1}});

void BM_CommitPayments(benchmark::State& state) {
  const auto s = corpus::by_name(kScenarios[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(commit_payments(s));
  state.SetLabel(kScenarios[state.range(0)]);
}
BENCHMARK(BM_CommitPayments)->DenseRange(0, 3);

void BM_ClarkePayments(benchmark::State& state) {
  const auto s = corpus::by_name(kScenarios[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(groves_payments(s, PivotRule::Clarke));
  state.SetLabel(kScenarios[state.range(0)]);
}
BENCHMARK(BM_ClarkePayments)->DenseRange(0, 3);

void BM_AuditExPost(benchmark::State& state) {
  const auto s = corpus::by_name("four-commuters-mixed");
  DeviationSpace space;
  space.p_grid = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(audit_expost(s, Mechanism::CommitBased, space));
  }
}
BENCHMARK(BM_AuditExPost)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_AuditDominant(benchmark::State& state) {
  const auto s = corpus::by_name("linear-pair");
  DeviationSpace space;
  space.p_grid = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        audit_dominant(s, Mechanism::GrovesClarkePublicP, space, space));
  }
}
BENCHMARK(BM_AuditDominant)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

void BM_RunTrials(benchmark::State& state) {
  const auto s = corpus::by_name("six-commuters");
  const auto schedule = commit_payments(s);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(s, schedule, 100000, 1, threads));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_RunTrials)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EnumerateExpectedUtilities(benchmark::State& state) {
  const auto s = corpus::by_name("six-commuters");
  const auto schedule = commit_payments(s);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_expected_utilities(s, schedule));
}
BENCHMARK(BM_EnumerateExpectedUtilities);

}  // namespace
BENCHMARK_MAIN();
