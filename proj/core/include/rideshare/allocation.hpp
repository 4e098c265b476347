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
#include <vector>

#include "rideshare/model.hpp"

namespace rideshare {

/// Winner of the welfare maximization over feasible allocations.
///
/// `per_commuter` holds each commuter's reported value at the reported
/// probabilities; an absent commuter (restricted solve) is listed as 0 and
/// does not count towards `welfare`.
struct WelfareReport {
  Allocation allocation;
  double welfare = 0.0;
  std::vector<double> per_commuter;
  std::optional<CommuterId> absent;

  friend bool operator==(const WelfareReport&, const WelfareReport&) = default;
};

enum class Solver {
  Exhaustive,
  /// Depth-first search with an optimistic bound on undecided commuters.
  /// Returns the same report as Exhaustive.
  BranchAndBound,
};

/// Allocation maximizing the sum of reported valuations at reported
/// probabilities. Allocations where anyone's valuation is Excluded are
/// skipped; ties go to the first maximizer in enumeration order.
WelfareReport efficient_allocation(const Scenario& scenario,
                                   Solver solver = Solver::Exhaustive);

/// Same optimization with commuter `absent` removed: it takes no role, its
/// probability factors evaluate as 0 and gates on it fail.
WelfareReport efficient_allocation_excluding(const Scenario& scenario,
                                             CommuterId absent,
                                             Solver solver = Solver::Exhaustive);

/// Reported value of each commuter at `allocation` (0 for `absent`), or
/// nullopt if any present commuter's outcome is Excluded.
std::optional<std::vector<double>> score_allocation(
    const Scenario& scenario, const Allocation& allocation,
    std::optional<CommuterId> absent = std::nullopt);

}  // namespace rideshare
