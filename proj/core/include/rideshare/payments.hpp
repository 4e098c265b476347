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

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rideshare/allocation.hpp"
#include "rideshare/model.hpp"

namespace rideshare {

enum class PivotRule { Zero, Clarke };

/// Positive amounts are paid by the commuter to the system.
struct Unconditional {
  double amount = 0.0;
  friend bool operator==(const Unconditional&, const Unconditional&) = default;
};

/// Charged `on_commit` if the commuter undertakes the trip, else `on_fail`.
struct Conditional {
  double on_commit = 0.0;
  double on_fail = 0.0;
  friend bool operator==(const Conditional&, const Conditional&) = default;
};

using Payment = std::variant<Unconditional, Conditional>;

struct PaymentSchedule {
  /// Efficient allocation under the reports the payments were computed from.
  Allocation allocation;
  std::vector<Payment> payments;

  const Payment& operator[](CommuterId id) const {
    return payments[id.index];
  }
};

/// Groves payments x_i = h_i - V_-i, where V_-i is the others' reported
/// welfare at the efficient allocation and h_i is 0 (Zero) or the others'
/// best welfare without i (Clarke).
///
/// With `public_p`, the mechanism knows the commitment probabilities: they
/// replace every reported probability, in the allocation, in V_-i and in h_i.
PaymentSchedule groves_payments(
    const Scenario& scenario, PivotRule pivot,
    std::optional<std::span<const double>> public_p = std::nullopt);

/// Commit-based payments: on_commit = h_i - V1_-i and on_fail = h_i - V0_-i,
/// where V1/V0 are the others' reported welfare at the efficient allocation
/// with i's probability set to 1 or 0, and h_i is the Clarke term.
PaymentSchedule commit_payments(const Scenario& scenario);

// Building blocks, exposed for callers that recompute a single commuter's
// payment many times (the auditor).

/// Sum of the other commuters' reported valuations at `allocation` and `p`.
double others_welfare(const Scenario& scenario, CommuterId id,
                      const Allocation& allocation, std::span<const double> p);

/// Clarke term: the others' best reported welfare without `id`.
double clarke_pivot(const Scenario& scenario, CommuterId id);

/// Commit-based payment of `id` at `allocation` given its Clarke term.
Conditional commit_payment(const Scenario& scenario, CommuterId id,
                           const Allocation& allocation, double pivot);

/// Copy of `scenario` whose reported probabilities are replaced by `p`.
Scenario with_public_probabilities(Scenario scenario, std::span<const double> p);

/// Expected utility of commuter `id` under its true type and the true
/// probabilities of everyone, given the schedule's allocation and payments.
///
/// Returns nullopt if the commuter's true valuation marks the allocated
/// outcome Excluded (possible only when someone misreported).
std::optional<double> expected_utility(const Scenario& scenario, CommuterId id,
                                       const PaymentSchedule& schedule);

/// As above for a single payment at a given allocation.
std::optional<double> expected_utility(const Scenario& scenario, CommuterId id,
                                       const Allocation& allocation,
                                       const Payment& payment);

}  // namespace rideshare
