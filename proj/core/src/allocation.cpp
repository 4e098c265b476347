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

#include "rideshare/allocation.hpp"

#include <cmath>
#include <stdexcept>

namespace rideshare {

namespace {

bool is_absent(std::optional<CommuterId> absent, std::size_t i) {
  return absent && absent->index == i;
}

std::optional<std::vector<double>> score_at(const Scenario& s,
                                            const Allocation& allocation,
                                            std::span<const double> p,
                                            std::optional<CommuterId> absent) {
  std::vector<double> values(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_absent(absent, i)) continue;
    const auto v = evaluate(s.commuters[i].reported_type.valuation, allocation, p, absent);
    // Travelling alone is never Excluded (the scenario validator rejects it).
    if (v.is_excluded()) return std::nullopt;
    values[i] = v.value();
  }
  return values;
}

double welfare_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

class ExhaustiveSolver {
 public:
  ExhaustiveSolver(const Scenario& s, std::optional<CommuterId> absent)
      : s_(s), absent_(absent), p_(s.reported_p()) {}

  WelfareReport solve() {
    std::optional<WelfareReport> best;
    for_each_feasible_allocation(
        s_,
        [&](const Allocation& a) {
          auto values = score_at(s_, a, p_, absent_);
          if (!values) return true;
          const double w = welfare_of(*values);
          if (!best || w > best->welfare) {
            best = WelfareReport{a, w, std::move(*values), absent_};
          }
          return true;
        },
        absent_);
    if (!best) throw std::logic_error("no feasible allocation scored");
    return *best;
  }

 private:
  const Scenario& s_;
  std::optional<CommuterId> absent_;
  std::vector<double> p_;
};

// Same depth-first order as the feasible-allocation enumerator, pruning
// prefixes whose optimistic completion cannot strictly beat the incumbent.
// A rider's value is fixed as soon as it is assigned; everyone else is
// bounded by the best value any of their clauses can produce.
class BranchAndBoundSolver {
 public:
  BranchAndBoundSolver(const Scenario& s, std::optional<CommuterId> absent)
      : s_(s), absent_(absent), p_(s.reported_p()), code_(s.size(), 0),
        load_(s.size(), 0), upper_(s.size(), 0.0), fixed_(s.size(), 0.0),
        is_fixed_(s.size(), false) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (is_absent(absent_, i)) continue;
      upper_[i] = max_value_bound(s.commuters[i].reported_type.valuation, p_, absent_);
    }
  }

  WelfareReport solve() {
    step(0);
    if (!best_) throw std::logic_error("no feasible allocation scored");
    return *best_;
  }

 private:
  double bound() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < upper_.size(); ++i) {
      sum += is_fixed_[i] ? fixed_[i] : upper_[i];
    }
    return sum;
  }

  bool pruned() const {
    if (!best_) return false;
    const double b = bound();
    return b + 1e-9 * (1.0 + std::abs(b)) < best_->welfare;
  }

  void leaf() {
    const auto a = Allocation::from_encoding(code_);
    auto values = score_at(s_, a, p_, absent_);
    if (!values) return;
    const double w = welfare_of(*values);
    if (!best_ || w > best_->welfare) {
      best_ = WelfareReport{a, w, std::move(*values), absent_};
    }
  }

  void step(std::size_t i) {
    const std::size_t n = code_.size();
    if (i == n) {
      leaf();
      return;
    }
    code_[i] = 0;
    step(i + 1);
    if (is_absent(absent_, i) || load_[i] > 0) return;

    const auto& spec = s_.commuters[i].reported_type.valuation;
    for (std::size_t d = 0; d < n; ++d) {
      if (d == i || is_absent(absent_, d)) continue;
      if (d < i && code_[d] != 0) continue;
      if (load_[d] >= s_.commuters[d].seat_capacity) continue;
      if (!s_.compatibility(CommuterId{i}, CommuterId{d})) continue;
      const Assignment own{Role::Ride, {CommuterId{d}}};
      const auto value = evaluate_assignment(spec, own, p_, absent_);
      if (value.is_excluded()) continue;
      code_[i] = d + 1;
      ++load_[d];
      fixed_[i] = value.value();
      is_fixed_[i] = true;
      if (!pruned()) step(i + 1);
      is_fixed_[i] = false;
      --load_[d];
      code_[i] = 0;
    }
  }

  const Scenario& s_;
  std::optional<CommuterId> absent_;
  std::vector<double> p_;
  std::vector<std::size_t> code_;
  std::vector<std::size_t> load_;
  std::vector<double> upper_;
  std::vector<double> fixed_;
  std::vector<bool> is_fixed_;
  std::optional<WelfareReport> best_;
};

WelfareReport solve(const Scenario& s, std::optional<CommuterId> absent,
                    Solver solver) {
  if (absent && absent->index >= s.size()) {
    throw std::out_of_range("excluded commuter is outside the scenario");
  }
  switch (solver) {
    case Solver::Exhaustive: return ExhaustiveSolver(s, absent).solve();
    case Solver::BranchAndBound: return BranchAndBoundSolver(s, absent).solve();
  }
  throw std::invalid_argument("unknown solver");
}

}  // namespace

std::optional<std::vector<double>> score_allocation(
    const Scenario& s, const Allocation& allocation,
    std::optional<CommuterId> absent) {
  return score_at(s, allocation, s.reported_p(), absent);
}

WelfareReport efficient_allocation(const Scenario& scenario, Solver solver) {
  return solve(scenario, std::nullopt, solver);
}

WelfareReport efficient_allocation_excluding(const Scenario& scenario,
                                             CommuterId absent, Solver solver) {
  return solve(scenario, absent, solver);
}

}  // namespace rideshare
