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

#include "rideshare/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace rideshare {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::size_t kMaxEnumeratedCommuters = 20;

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t trial, std::uint64_t commuter) const {
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ trial);
  return splitmix64(h ^ (commuter * 0xd1b54a32d192ed03ULL));
}

double CounterRng::uniform(std::uint64_t trial, std::uint64_t commuter) const {
  return static_cast<double>(bits(trial, commuter) >> 11) * 0x1.0p-53;
}

std::vector<double> CommitVector::as_probabilities() const {
  std::vector<double> p(committed.size());
  for (std::size_t i = 0; i < committed.size(); ++i) p[i] = committed[i] ? 1.0 : 0.0;
  return p;
}

CommitVector realize(std::span<const double> p, std::uint64_t seed,
                     std::uint64_t trial) {
  const CounterRng rng(seed);
  CommitVector out;
  out.committed.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.committed[i] = rng.uniform(trial, i) < p[i];
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

TrialRecord settle(const Scenario& scenario, const PaymentSchedule& schedule,
                   const CommitVector& commit) {
  const std::size_t n = scenario.size();
  if (commit.size() != n || schedule.payments.size() != n) {
    throw std::invalid_argument("commit vector or schedule does not match the scenario");
  }
  TrialRecord record;
  record.commit = commit;
  const auto p = commit.as_probabilities();
  record.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = evaluate(scenario.commuters[i].true_type.valuation,
                            schedule.allocation, p);
    if (v.is_excluded()) {
      record.values.clear();
      record.flagged = true;
      return record;
    }
    record.values.push_back(v.value());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& payment = schedule.payments[i];
    double charged = 0.0;
    if (const auto* fixed = std::get_if<Unconditional>(&payment)) {
      charged = fixed->amount;
    } else {
      const auto& c = std::get<Conditional>(payment);
      charged = commit.committed[i] ? c.on_commit : c.on_fail;
    }
    record.payments.push_back(charged);
    record.utilities.push_back(record.values[i] - charged);
    record.total_welfare += record.values[i];
    record.deficit -= charged;
  }
  return record;
}

namespace {

MeanWithError mean_with_error(const std::vector<double>& xs) {
  MeanWithError out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) return out;
  std::vector<double> squares(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double d = xs[k] - out.mean;
    squares[k] = d * d;
  }
  out.standard_error = std::sqrt(pairwise_sum(squares) / (n - 1.0) / n);
  return out;
}

SimulationSummary summarize(const std::vector<TrialRecord>& records,
                            std::size_t n) {
  SimulationSummary summary;
  summary.trials = records.size();
  std::vector<const TrialRecord*> kept;
  kept.reserve(records.size());
  for (const auto& r : records) {
    if (r.flagged) {
      ++summary.flagged;
    } else {
      kept.push_back(&r);
    }
  }
  auto column = [&](auto&& pick) {
    std::vector<double> xs;
    xs.reserve(kept.size());
    for (const auto* r : kept) xs.push_back(pick(*r));
    return mean_with_error(xs);
  };
  for (std::size_t i = 0; i < n; ++i) {
    summary.commit_rate.push_back(
        column([i](const TrialRecord& r) { return r.commit.committed[i] ? 1.0 : 0.0; }));
    summary.value.push_back(column([i](const TrialRecord& r) { return r.values[i]; }));
    summary.payment.push_back(column([i](const TrialRecord& r) { return r.payments[i]; }));
    summary.utility.push_back(column([i](const TrialRecord& r) { return r.utilities[i]; }));
  }
  summary.welfare = column([](const TrialRecord& r) { return r.total_welfare; });
  summary.deficit = column([](const TrialRecord& r) { return r.deficit; });
  return summary;
}

}  // namespace

SimulationResult run_trials(const Scenario& scenario,
                            const PaymentSchedule& schedule, std::size_t trials,
                            std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const auto p = scenario.true_p();
  SimulationResult result;
  result.records.resize(trials);
  detail::parallel_for(trials, threads, [&](std::size_t t) {
    auto record = settle(scenario, schedule, realize(p, seed, t));
    record.seed = seed;
    record.trial = t;
    result.records[t] = std::move(record);
  });
  result.summary = summarize(result.records, scenario.size());
  return result;
}

namespace {

// Calls fn(commit, probability) for each of the 2^n commitment vectors.
template <typename Fn>
void for_each_commit_vector(std::span<const double> p, Fn&& fn) {
  const std::size_t n = p.size();
  if (n > kMaxEnumeratedCommuters) {
    throw std::invalid_argument("exact enumeration is limited to 20 commuters");
  }
  CommitVector commit;
  commit.committed.resize(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double probability = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool bit = (mask >> i) & 1U;
      commit.committed[i] = bit;
      probability *= bit ? p[i] : 1.0 - p[i];
    }
    fn(commit, probability);
  }
}

}  // namespace

std::optional<std::vector<double>> enumerate_expected_utilities(
    const Scenario& scenario, const PaymentSchedule& schedule) {
  const auto p = scenario.true_p();
  std::vector<double> expected(scenario.size(), 0.0);
  bool excluded = false;
  for_each_commit_vector(p, [&](const CommitVector& commit, double probability) {
    if (probability == 0.0) return;
    const auto record = settle(scenario, schedule, commit);
    if (record.flagged) {
      excluded = true;
      return;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      expected[i] += probability * record.utilities[i];
    }
  });
  if (excluded) return std::nullopt;
  return expected;
}

std::optional<double> bernoulli_expectation(const ValuationSpec& spec,
                                            const Allocation& allocation,
                                            std::span<const double> p) {
  double expected = 0.0;
  bool excluded = false;
  for_each_commit_vector(p, [&](const CommitVector& commit, double probability) {
    if (probability == 0.0) return;
    const auto v = evaluate(spec, allocation, commit.as_probabilities());
    if (v.is_excluded()) {
      excluded = true;
      return;
    }
    expected += probability * v.value();
  });
  if (excluded) return std::nullopt;
  return expected;
}

}  // namespace rideshare
