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

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rideshare/types.hpp"
#include "rideshare/valuation.hpp"

namespace rideshare {

/// A commuter's trip: valuation and probability of commitment.
struct TripType {
  ValuationSpec valuation;
  double p_commit = 1.0;

  friend bool operator==(const TripType&, const TripType&) = default;
};

struct Commuter {
  CommuterId id;
  bool has_vehicle = false;
  std::size_t seat_capacity = 0;
  TripType true_type;
  TripType reported_type;

  /// A commuter reporting truthfully.
  static Commuter truthful(CommuterId id, bool has_vehicle,
                           std::size_t seat_capacity, TripType type);

  friend bool operator==(const Commuter&, const Commuter&) = default;
};

/// Symmetric "may share a vehicle" relation with a true diagonal.
class Compatibility {
 public:
  Compatibility() = default;
  /// Everyone compatible with everyone.
  explicit Compatibility(std::size_t n);
  explicit Compatibility(std::vector<std::vector<bool>> rows)
      : rows_(std::move(rows)) {}

  std::size_t size() const { return rows_.size(); }
  bool operator()(CommuterId a, CommuterId b) const {
    return rows_[a.index][b.index];
  }
  void set(CommuterId a, CommuterId b, bool value);
  const std::vector<std::vector<bool>>& rows() const { return rows_; }

  friend bool operator==(const Compatibility&, const Compatibility&) = default;

 private:
  std::vector<std::vector<bool>> rows_;
};

struct Scenario {
  std::vector<Commuter> commuters;
  Compatibility compatibility;
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return commuters.size(); }
  const Commuter& operator[](CommuterId id) const {
    return commuters[id.index];
  }
  Commuter& operator[](CommuterId id) { return commuters[id.index]; }

  std::vector<double> reported_p() const;
  std::vector<double> true_p() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Copy of `scenario` with every reported type reset to the true type.
Scenario with_truthful_reports(Scenario scenario);

enum class ViolationKind {
  EmptyScenario,
  IdMismatch,
  ProbabilityOutOfRange,
  CapacityWithoutVehicle,
  CompatibilityShape,
  CompatibilityDiagonal,
  CompatibilityAsymmetric,
  ValuationOwner,
  MalformedValuation,
  AloneExcluded,
};

struct Violation {
  ViolationKind kind;
  std::vector<CommuterId> commuters;
  std::string message;
};

/// Every broken scenario invariant. Empty iff the scenario is valid.
std::vector<Violation> validate_scenario(const Scenario& scenario);

/// Allocation invariants against the scenario's capacities and compatibility.
/// Empty iff the allocation is feasible. `absent` may not appear at all.
std::vector<std::string> allocation_problems(
    const Scenario& scenario, const Allocation& allocation,
    std::optional<CommuterId> absent = std::nullopt);

/// Visitor returns false to stop the enumeration early.
using AllocationVisitor = std::function<bool(const Allocation&)>;

/// Visits every feasible allocation exactly once, in lexicographic order of
/// the rider-map encoding; the all-None allocation comes first. With `absent`
/// set, that commuter is held out (no role, no partners).
void for_each_feasible_allocation(const Scenario& scenario,
                                  const AllocationVisitor& visit,
                                  std::optional<CommuterId> absent = std::nullopt);

std::vector<Allocation> enumerate_feasible_allocations(
    const Scenario& scenario, std::optional<CommuterId> absent = std::nullopt);

}  // namespace rideshare
