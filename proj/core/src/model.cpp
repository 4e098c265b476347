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

#include "rideshare/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rideshare {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::None: return "none";
    case Role::Drive: return "drive";
    case Role::Ride: return "ride";
  }
  return "?";
}

Allocation Allocation::all_none(std::size_t n) {
  return Allocation(std::vector<Assignment>(n));
}

Allocation Allocation::from_encoding(const std::vector<std::size_t>& encoding) {
  std::vector<Assignment> assignments(encoding.size());
  for (std::size_t i = 0; i < encoding.size(); ++i) {
    if (encoding[i] == 0) continue;
    const std::size_t driver = encoding[i] - 1;
    if (driver >= encoding.size()) {
      throw std::out_of_range("rider map names a driver outside the scenario");
    }
    assignments[i].role = Role::Ride;
    assignments[i].partners = {CommuterId{driver}};
    assignments[driver].role = Role::Drive;
    assignments[driver].partners.push_back(CommuterId{i});
  }
  return Allocation(std::move(assignments));
}

bool Allocation::is_all_none() const {
  for (const auto& a : assignments_) {
    if (a.role != Role::None) return false;
  }
  return true;
}

std::vector<std::size_t> Allocation::encoding() const {
  std::vector<std::size_t> code(assignments_.size(), 0);
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    const auto& a = assignments_[i];
    if (a.role == Role::Ride && !a.partners.empty()) {
      code[i] = a.partners.front().index + 1;
    }
  }
  return code;
}

Commuter Commuter::truthful(CommuterId id, bool has_vehicle,
                            std::size_t seat_capacity, TripType type) {
  Commuter c;
  c.id = id;
  c.has_vehicle = has_vehicle;
  c.seat_capacity = seat_capacity;
  c.true_type = type;
  c.reported_type = std::move(type);
  return c;
}

Compatibility::Compatibility(std::size_t n)
    : rows_(n, std::vector<bool>(n, true)) {}

void Compatibility::set(CommuterId a, CommuterId b, bool value) {
  rows_.at(a.index).at(b.index) = value;
  rows_.at(b.index).at(a.index) = value;
}

std::vector<double> Scenario::reported_p() const {
  std::vector<double> p;
  p.reserve(commuters.size());
  for (const auto& c : commuters) p.push_back(c.reported_type.p_commit);
  return p;
}

std::vector<double> Scenario::true_p() const {
  std::vector<double> p;
  p.reserve(commuters.size());
  for (const auto& c : commuters) p.push_back(c.true_type.p_commit);
  return p;
}

Scenario with_truthful_reports(Scenario scenario) {
  for (auto& c : scenario.commuters) c.reported_type = c.true_type;
  return scenario;
}

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::string describe(std::size_t i) { return "commuter " + std::to_string(i); }

void check_trip(const Scenario& s, std::size_t i, const TripType& trip,
                std::string_view which, std::vector<Violation>& out) {
  const CommuterId id{i};
  if (!is_probability(trip.p_commit)) {
    std::ostringstream msg;
    msg << describe(i) << ": " << which << " p_commit " << trip.p_commit
        << " is outside [0, 1]";
    out.push_back({ViolationKind::ProbabilityOutOfRange, {id}, msg.str()});
  }
  if (trip.valuation.owner != id) {
    out.push_back({ViolationKind::ValuationOwner,
                   {id},
                   describe(i) + ": " + std::string(which) +
                       " valuation is owned by commuter " +
                       std::to_string(trip.valuation.owner.index)});
  }
  for (auto& problem : spec_problems(trip.valuation, s.size())) {
    out.push_back({ViolationKind::MalformedValuation, {id},
                   describe(i) + ": " + std::string(which) + " valuation: " +
                       problem});
  }
  const auto alone = Allocation::all_none(s.size());
  if (trip.valuation.owner == id && i < alone.size()) {
    for (const auto& clause : trip.valuation.clauses) {
      if (!clause.pattern.matches(alone[id])) continue;
      if (clause.excluded) {
        out.push_back({ViolationKind::AloneExcluded, {id},
                       describe(i) + ": " + std::string(which) +
                           " valuation excludes travelling alone"});
      }
      break;
    }
  }
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  const std::size_t n = s.size();
  if (n == 0) {
    out.push_back({ViolationKind::EmptyScenario, {}, "scenario has no commuters"});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = s.commuters[i];
    if (c.id.index != i) {
      out.push_back({ViolationKind::IdMismatch, {CommuterId{i}},
                     "commuter at position " + std::to_string(i) + " has id " +
                         std::to_string(c.id.index)});
    }
    if (!c.has_vehicle && c.seat_capacity != 0) {
      out.push_back({ViolationKind::CapacityWithoutVehicle, {CommuterId{i}},
                     describe(i) + ": seat_capacity " +
                         std::to_string(c.seat_capacity) + " without a vehicle"});
    }
    check_trip(s, i, c.true_type, "true", out);
    if (!(c.reported_type == c.true_type)) {
      check_trip(s, i, c.reported_type, "reported", out);
    }
  }

  const auto& rows = s.compatibility.rows();
  bool square = rows.size() == n;
  for (const auto& row : rows) square = square && row.size() == n;
  if (!square) {
    out.push_back({ViolationKind::CompatibilityShape, {},
                   "compatibility matrix is not " + std::to_string(n) + "x" +
                       std::to_string(n)});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i][i]) {
      out.push_back({ViolationKind::CompatibilityDiagonal, {CommuterId{i}},
                     "compatibility[" + std::to_string(i) + "][" +
                         std::to_string(i) + "] must be true"});
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rows[i][j] != rows[j][i]) {
        out.push_back({ViolationKind::CompatibilityAsymmetric,
                       {CommuterId{i}, CommuterId{j}},
                       "compatibility is asymmetric for pair (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")"});
      }
    }
  }
  return out;
}

std::vector<std::string> allocation_problems(const Scenario& s,
                                             const Allocation& a,
                                             std::optional<CommuterId> absent) {
  std::vector<std::string> out;
  const std::size_t n = s.size();
  if (a.size() != n) {
    out.push_back("allocation has " + std::to_string(a.size()) +
                  " entries for " + std::to_string(n) + " commuters");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const CommuterId id{i};
    const auto& own = a[id];
    for (std::size_t k = 0; k < own.partners.size(); ++k) {
      const auto partner = own.partners[k];
      if (partner.index >= n || partner == id) {
        out.push_back(describe(i) + ": invalid partner");
        return out;
      }
      if (k > 0 && !(own.partners[k - 1] < partner)) {
        out.push_back(describe(i) + ": partners not sorted and unique");
      }
    }
    if (absent && *absent == id && (own.role != Role::None || !own.partners.empty())) {
      out.push_back(describe(i) + ": absent commuter is allocated");
    }
    switch (own.role) {
      case Role::None:
        if (!own.partners.empty()) out.push_back(describe(i) + ": role none with partners");
        break;
      case Role::Ride: {
        if (own.partners.size() != 1) {
          out.push_back(describe(i) + ": rider must have exactly one driver");
          break;
        }
        const auto driver = own.partners.front();
        const auto& d = a[driver];
        bool listed = false;
        for (auto p : d.partners) listed = listed || p == id;
        if (d.role != Role::Drive || !listed) {
          out.push_back(describe(i) + ": driver " + std::to_string(driver.index) +
                        " does not carry this rider");
        }
        if (!s.compatibility(id, driver)) {
          out.push_back(describe(i) + ": incompatible with driver " +
                        std::to_string(driver.index));
        }
        break;
      }
      case Role::Drive: {
        if (own.partners.empty()) out.push_back(describe(i) + ": driver without riders");
        if (own.partners.size() > s.commuters[i].seat_capacity) {
          out.push_back(describe(i) + ": riders exceed seat capacity");
        }
        for (auto rider : own.partners) {
          const auto& r = a[rider];
          if (r.role != Role::Ride || r.partners.size() != 1 ||
              r.partners.front() != id) {
            out.push_back(describe(i) + ": partner " +
                          std::to_string(rider.index) +
                          " is not riding with this driver");
          }
        }
        break;
      }
    }
  }
  return out;
}

namespace {

class Enumerator {
 public:
  Enumerator(const Scenario& s, const AllocationVisitor& visit,
             std::optional<CommuterId> absent)
      : s_(s), visit_(visit), absent_(absent), code_(s.size(), 0),
        load_(s.size(), 0) {}

  void run() { step(0); }

 private:
  bool is_absent(std::size_t i) const { return absent_ && absent_->index == i; }

  // Returns false once the visitor asks to stop.
  bool step(std::size_t i) {
    const std::size_t n = code_.size();
    if (i == n) return visit_(Allocation::from_encoding(code_));

    code_[i] = 0;
    if (!step(i + 1)) return false;
    // Absent commuters and commuters already carrying riders cannot ride.
    if (is_absent(i) || load_[i] > 0) return true;

    for (std::size_t d = 0; d < n; ++d) {
      if (d == i || is_absent(d)) continue;
      if (d < i && code_[d] != 0) continue;  // d already rides
      if (load_[d] >= s_.commuters[d].seat_capacity) continue;
      if (!s_.compatibility(CommuterId{i}, CommuterId{d})) continue;
      code_[i] = d + 1;
      ++load_[d];
      const bool keep_going = step(i + 1);
      --load_[d];
      code_[i] = 0;
      if (!keep_going) return false;
    }
    return true;
  }

  const Scenario& s_;
  const AllocationVisitor& visit_;
  std::optional<CommuterId> absent_;
  std::vector<std::size_t> code_;
  std::vector<std::size_t> load_;
};

}  // namespace

void for_each_feasible_allocation(const Scenario& scenario,
                                  const AllocationVisitor& visit,
                                  std::optional<CommuterId> absent) {
  Enumerator(scenario, visit, absent).run();
}

std::vector<Allocation> enumerate_feasible_allocations(
    const Scenario& scenario, std::optional<CommuterId> absent) {
  std::vector<Allocation> out;
  for_each_feasible_allocation(
      scenario,
      [&](const Allocation& a) {
        out.push_back(a);
        return true;
      },
      absent);
  return out;
}

}  // namespace rideshare
