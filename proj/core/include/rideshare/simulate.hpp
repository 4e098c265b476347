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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rideshare/model.hpp"
#include "rideshare/payments.hpp"

namespace rideshare {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, trial, commuter), so trials can run in any order or in parallel.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t trial, std::uint64_t commuter) const;
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform(std::uint64_t trial, std::uint64_t commuter) const;

 private:
  std::uint64_t seed_;
};

struct CommitVector {
  std::vector<bool> committed;

  std::size_t size() const { return committed.size(); }
  bool operator[](CommuterId id) const { return committed[id.index]; }
  std::vector<double> as_probabilities() const;

  friend bool operator==(const CommitVector&, const CommitVector&) = default;
};

/// Independent Bernoulli(p_i) commitments for one trial.
CommitVector realize(std::span<const double> p, std::uint64_t seed,
                     std::uint64_t trial = 0);

struct TrialRecord {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  CommitVector commit;
  /// Empty when the trial is flagged because a realized value was Excluded.
  std::vector<double> values;
  std::vector<double> payments;
  std::vector<double> utilities;
  double total_welfare = 0.0;
  double deficit = 0.0;
  bool flagged = false;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct MeanWithError {
  double mean = 0.0;
  double standard_error = 0.0;

  friend bool operator==(const MeanWithError&, const MeanWithError&) = default;
};

struct SimulationSummary {
  std::size_t trials = 0;
  std::size_t flagged = 0;
  std::vector<MeanWithError> commit_rate;
  std::vector<MeanWithError> value;
  std::vector<MeanWithError> payment;
  std::vector<MeanWithError> utility;
  MeanWithError welfare;
  MeanWithError deficit;

  friend bool operator==(const SimulationSummary&,
                         const SimulationSummary&) = default;
};

struct SimulationResult {
  std::vector<TrialRecord> records;
  SimulationSummary summary;
};

/// Realized value, payment and utility of every commuter for one commitment
/// vector: true valuations are evaluated at the 0/1 vector.
TrialRecord settle(const Scenario& scenario, const PaymentSchedule& schedule,
                   const CommitVector& commit);

/// Monte Carlo over `trials` seeded commitment draws from the true
/// probabilities. Deterministic in (scenario, schedule, trials, seed) for
/// any thread count.
SimulationResult run_trials(const Scenario& scenario,
                            const PaymentSchedule& schedule, std::size_t trials,
                            std::uint64_t seed, unsigned threads = 1);

/// Exact expectation of each commuter's realized utility over all 2^N
/// commitment vectors. nullopt if some vector with positive probability has
/// an Excluded realized value.
std::optional<std::vector<double>> enumerate_expected_utilities(
    const Scenario& scenario, const PaymentSchedule& schedule);

/// Exact expectation of one valuation's realized value over 2^N commitment
/// vectors drawn from `p`.
std::optional<double> bernoulli_expectation(const ValuationSpec& spec,
                                            const Allocation& allocation,
                                            std::span<const double> p);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace rideshare
