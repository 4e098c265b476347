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

#include "rideshare/payments.hpp"

#include <stdexcept>

namespace rideshare {

double others_welfare(const Scenario& scenario, CommuterId id,
                      const Allocation& allocation, std::span<const double> p) {
  double sum = 0.0;
  for (const auto& other : scenario.commuters) {
    if (other.id == id) continue;
    const auto v = evaluate(other.reported_type.valuation, allocation, p);
    if (v.is_excluded()) {
      throw std::logic_error("efficient allocation contains an Excluded outcome");
    }
    sum += v.value();
  }
  return sum;
}

double clarke_pivot(const Scenario& scenario, CommuterId id) {
  return efficient_allocation_excluding(scenario, id).welfare;
}

Conditional commit_payment(const Scenario& scenario, CommuterId id,
                           const Allocation& allocation, double pivot) {
  auto p = scenario.reported_p();
  p[id.index] = 1.0;
  const double committed = others_welfare(scenario, id, allocation, p);
  p[id.index] = 0.0;
  const double failed = others_welfare(scenario, id, allocation, p);
  return Conditional{pivot - committed, pivot - failed};
}

Scenario with_public_probabilities(Scenario scenario, std::span<const double> p) {
  if (p.size() != scenario.size()) {
    throw std::invalid_argument("public probability vector has the wrong length");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    scenario.commuters[i].reported_type.p_commit = p[i];
  }
  return scenario;
}

PaymentSchedule groves_payments(const Scenario& scenario, PivotRule pivot,
                                std::optional<std::span<const double>> public_p) {
  const Scenario working =
      public_p ? with_public_probabilities(scenario, *public_p) : scenario;
  const auto efficient = efficient_allocation(working);

  PaymentSchedule schedule{efficient.allocation, {}};
  schedule.payments.reserve(working.size());
  for (std::size_t i = 0; i < working.size(); ++i) {
    double others = 0.0;
    for (std::size_t j = 0; j < working.size(); ++j) {
      if (j != i) others += efficient.per_commuter[j];
    }
    const double h = pivot == PivotRule::Clarke ? clarke_pivot(working, CommuterId{i}) : 0.0;
    schedule.payments.emplace_back(Unconditional{h - others});
  }
  return schedule;
}

PaymentSchedule commit_payments(const Scenario& scenario) {
  const auto efficient = efficient_allocation(scenario);
  PaymentSchedule schedule{efficient.allocation, {}};
  schedule.payments.reserve(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const CommuterId id{i};
    schedule.payments.emplace_back(commit_payment(
        scenario, id, efficient.allocation, clarke_pivot(scenario, id)));
  }
  return schedule;
}

std::optional<double> expected_utility(const Scenario& scenario, CommuterId id,
                                       const Allocation& allocation,
                                       const Payment& payment) {
  const auto& truth = scenario[id].true_type;
  auto p = scenario.true_p();

  if (const auto* fixed = std::get_if<Unconditional>(&payment)) {
    const auto v = evaluate(truth.valuation, allocation, p);
    if (v.is_excluded()) return std::nullopt;
    return v.value() - fixed->amount;
  }

  const auto& conditional = std::get<Conditional>(payment);
  const double p_own = truth.p_commit;
  p[id.index] = 1.0;
  const auto committed = evaluate(truth.valuation, allocation, p);
  p[id.index] = 0.0;
  const auto failed = evaluate(truth.valuation, allocation, p);
  if (committed.is_excluded() || failed.is_excluded()) return std::nullopt;
  return p_own * (committed.value() - conditional.on_commit) +
         (1.0 - p_own) * (failed.value() - conditional.on_fail);
}

std::optional<double> expected_utility(const Scenario& scenario, CommuterId id,
                                       const PaymentSchedule& schedule) {
  return expected_utility(scenario, id, schedule.allocation, schedule[id]);
}

}  // namespace rideshare
