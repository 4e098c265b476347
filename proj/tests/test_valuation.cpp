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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rideshare/corpus.hpp"
#include "rideshare/model.hpp"
#include "rideshare/simulate.hpp"
#include "rideshare/valuation.hpp"

namespace rideshare {
namespace {

constexpr CommuterId kDriver{0};
constexpr CommuterId kRider{1};

const Allocation kShared = Allocation::from_encoding({0, 1});
const Allocation kAlone = Allocation::all_none(2);
const std::vector<double> kP{0.5, 0.8};

ValuationSpec constant_spec(CommuterId owner, double c) {
  return {owner, {Clause{{Role::Drive, AnyPartners{}}, {}, {{c, {}}}, false}}, c};
}

ValuationSpec owner_squared(CommuterId owner) {
  return {owner, {Clause{{Role::Drive, AnyPartners{}}, {}, {{1.5, {{owner, 2}}}}, false}}, 0.0};
}

// Numeric classification over every non-excluded allocation of a scenario.
bool numerically_linear(const Scenario& s, const ValuationSpec& spec, unsigned grid) {
  for (const auto& a : enumerate_feasible_allocations(s)) {
    if (!check_linearity_numeric(spec, a, grid)) return false;
  }
  return true;
}

bool numerically_independent(const Scenario& s, const ValuationSpec& spec, unsigned grid) {
  for (const auto& a : enumerate_feasible_allocations(s)) {
    if (!check_independence_numeric(spec, a, grid)) return false;
  }
  return true;
}

TEST(Evaluate, DriverCostAtSharedAllocation) {
  const auto v = evaluate(corpus::driver_cost(kDriver, kRider, -2.0), kShared, kP);
  EXPECT_DOUBLE_EQ(v.value(), -2.0 * 0.5 * 0.8);
}

TEST(Evaluate, ThresholdGateBelowBoundGivesZero) {
  const auto spec = corpus::rider_benefit_with_threshold(kRider, kDriver, 5.0, 0.6);
  EXPECT_EQ(evaluate(spec, kShared, kP).value(), 0.0);
  const std::vector<double> reliable{0.6, 0.8};
  EXPECT_DOUBLE_EQ(evaluate(spec, kShared, reliable).value(), 5.0 * 0.6 * 0.8);
}

TEST(Evaluate, TravellingAloneIsWorthZero) {
  EXPECT_EQ(evaluate(corpus::driver_cost(kDriver, kRider, -2.0), kAlone, kP).value(), 0.0);
  EXPECT_EQ(evaluate(corpus::rider_benefit(kRider, kDriver, 5.0), kAlone, kP).value(), 0.0);
}

TEST(Evaluate, ExcludedOutcomeHasNoValue) {
  const auto reversed = Allocation::from_encoding({2, 0});
  const auto v = evaluate(corpus::driver_cost(kDriver, kRider, -2.0), reversed, kP);
  EXPECT_TRUE(v.is_excluded());
  EXPECT_THROW((void)v.value(), std::logic_error);
}

TEST(Evaluate, FirstMatchingClauseWins) {
  ValuationSpec spec{kDriver,
                     {Clause{{Role::Drive, ExactPartners{{kRider}}}, {}, {{3.0, {}}}, false},
                      Clause{{Role::Drive, AnyPartners{}}, {}, {{7.0, {}}}, false}},
                     -1.0};
  EXPECT_EQ(evaluate(spec, kShared, kP).value(), 3.0);
  std::swap(spec.clauses[0], spec.clauses[1]);
  EXPECT_EQ(evaluate(spec, kShared, kP).value(), 7.0);
  EXPECT_EQ(evaluate(spec, kAlone, kP).value(), -1.0);
}

TEST(Evaluate, GateDirections) {
  ValuationSpec spec{kRider,
                     {Clause{{Role::Ride, AnyPartners{}},
                             {{kDriver, 0.5, GateDirection::AtLeast}},
                             {{1.0, {}}},
                             false}},
                     0.0};
  EXPECT_EQ(evaluate(spec, kShared, std::vector<double>{0.5, 0.0}).value(), 1.0);
  EXPECT_EQ(evaluate(spec, kShared, std::vector<double>{0.49, 0.0}).value(), 0.0);
  spec.clauses[0].gates[0].direction = GateDirection::Below;
  EXPECT_EQ(evaluate(spec, kShared, std::vector<double>{0.5, 0.0}).value(), 0.0);
  EXPECT_EQ(evaluate(spec, kShared, std::vector<double>{0.49, 0.0}).value(), 1.0);
}

TEST(Evaluate, AbsentCommuterZeroesFactorsAndFailsGates) {
  const auto spec = corpus::rider_benefit(kRider, kDriver, 5.0);
  EXPECT_EQ(evaluate(spec, kShared, kP, kDriver).value(), 0.0);
  ValuationSpec gated{kRider,
                      {Clause{{Role::None, AnyPartners{}},
                              {{kDriver, 0.9, GateDirection::Below}},
                              {{2.0, {}}},
                              false}},
                      0.0};
  EXPECT_EQ(evaluate(gated, kAlone, kP).value(), 2.0);
  EXPECT_EQ(evaluate(gated, kAlone, kP, kDriver).value(), 0.0);
}

TEST(Evaluate, MonomialExponents) {
  const Monomial m{2.0, {{kDriver, 2}, {kRider, 1}}};
  EXPECT_DOUBLE_EQ(m.evaluate(kP), 2.0 * 0.25 * 0.8);
}

TEST(Structure, ExternalCommitIndependence) {
  EXPECT_FALSE(is_external_commit_independent(corpus::driver_cost(kDriver, kRider, -2.0)));
  EXPECT_TRUE(is_external_commit_independent(constant_spec(kDriver, 4.0)));
  EXPECT_TRUE(is_external_commit_independent(owner_squared(kDriver)));
}

TEST(Structure, LinearityInCommitment) {
  EXPECT_TRUE(is_linear_in_commitment(corpus::driver_cost(kDriver, kRider, -2.0)));
  EXPECT_FALSE(is_linear_in_commitment(
      corpus::rider_benefit_with_threshold(kRider, kDriver, 5.0, 0.6)));
  EXPECT_FALSE(is_linear_in_commitment(owner_squared(kDriver)));
  EXPECT_FALSE(is_linear_in_commitment(corpus::rider_benefit_quadratic(kRider, kDriver, 3.0)));
  EXPECT_TRUE(is_linear_in_commitment(constant_spec(kDriver, 4.0)));
}

TEST(Structure, LinearityNormalizesBeforeJudging) {
  // p0 * p0 written as two factors is still quadratic.
  ValuationSpec repeated{kDriver,
                         {Clause{{Role::Drive, AnyPartners{}},
                                 {},
                                 {{1.0, {{kDriver, 1}, {kDriver, 1}}}},
                                 false}},
                         0.0};
  EXPECT_FALSE(is_linear_in_commitment(repeated));
  // Cancelling quadratic terms leave a linear function.
  ValuationSpec cancelling{kDriver,
                           {Clause{{Role::Drive, AnyPartners{}},
                                   {},
                                   {{1.0, {{kDriver, 2}}}, {-1.0, {{kDriver, 2}}}, {3.0, {{kRider, 1}}}},
                                   false}},
                           0.0};
  EXPECT_TRUE(is_linear_in_commitment(cancelling));
  EXPECT_TRUE(check_linearity_numeric(cancelling, kShared, 5));
  // A gate that can never fail does not break linearity.
  ValuationSpec trivial_gate{kDriver,
                             {Clause{{Role::Drive, AnyPartners{}},
                                     {{kRider, 0.0, GateDirection::AtLeast}},
                                     {{1.0, {{kRider, 1}}}},
                                     false}},
                             0.0};
  EXPECT_TRUE(is_linear_in_commitment(trivial_gate));
  // A gate on a clause with no terms only switches between 0 and 0.
  ValuationSpec empty_gated{kDriver,
                            {Clause{{Role::Drive, AnyPartners{}},
                                    {{kRider, 0.5, GateDirection::AtLeast}},
                                    {},
                                    false}},
                            0.0};
  EXPECT_TRUE(is_linear_in_commitment(empty_gated));
}

TEST(Numeric, LinearityExamples) {
  EXPECT_TRUE(check_linearity_numeric(corpus::driver_cost(kDriver, kRider, -2.0), kShared, 5));
  EXPECT_FALSE(check_linearity_numeric(
      corpus::rider_benefit_with_threshold(kRider, kDriver, 5.0, 0.6), kShared, 5));
  EXPECT_TRUE(check_linearity_numeric(constant_spec(kDriver, 4.0), kShared, 5));
  EXPECT_GT(linearity_residual(corpus::rider_benefit_quadratic(kRider, kDriver, 3.0), kShared, 5),
            1e-3);
  EXPECT_THROW((void)check_linearity_numeric(constant_spec(kDriver, 1.0), kShared, 2),
               std::invalid_argument);
}

TEST(Numeric, ExcludedOutcomesAreSkipped) {
  const auto reversed = Allocation::from_encoding({2, 0});
  EXPECT_EQ(linearity_residual(corpus::driver_cost(kDriver, kRider, -2.0), reversed, 5), 0.0);
}

TEST(Numeric, IndependenceExamples) {
  EXPECT_FALSE(
      check_independence_numeric(corpus::driver_cost(kDriver, kRider, -2.0), kShared, 5));
  EXPECT_TRUE(check_independence_numeric(constant_spec(kDriver, 4.0), kShared, 5));
  EXPECT_TRUE(check_independence_numeric(owner_squared(kDriver), kShared, 5));
}

TEST(CorpusProperty, StructuralAndNumericLinearityAgree) {
  for (const auto& e : corpus::all()) {
    bool all_linear = true;
    for (const auto& c : e.scenario.commuters) {
      for (const auto* trip : {&c.true_type, &c.reported_type}) {
        const bool structural = is_linear_in_commitment(trip->valuation);
        EXPECT_EQ(structural, numerically_linear(e.scenario, trip->valuation, 5))
            << e.name << " commuter " << c.id.index;
        all_linear = all_linear && structural;
      }
    }
    EXPECT_EQ(all_linear, e.all_linear) << e.name;
  }
}

TEST(CorpusProperty, StructuralAndNumericIndependenceAgree) {
  for (const auto& e : corpus::all()) {
    for (const auto& c : e.scenario.commuters) {
      const auto& spec = c.true_type.valuation;
      EXPECT_EQ(is_external_commit_independent(spec), numerically_independent(e.scenario, spec, 5))
          << e.name << " commuter " << c.id.index;
    }
  }
}

TEST(CorpusProperty, IndependenceImpliesLinearity) {
  for (const auto& e : corpus::all()) {
    for (const auto& c : e.scenario.commuters) {
      if (is_external_commit_independent(c.true_type.valuation)) {
        EXPECT_TRUE(is_linear_in_commitment(c.true_type.valuation)) << e.name;
      }
    }
  }
}

TEST(CorpusProperty, MultilinearValueIsBernoulliExpectation) {
  for (const auto& e : corpus::all()) {
    const auto p = e.scenario.true_p();
    for (const auto& a : enumerate_feasible_allocations(e.scenario)) {
      const auto lab = oracle::labels(a.encoding());
      for (const auto& c : e.scenario.commuters) {
        const auto& spec = c.true_type.valuation;
        if (!is_linear_in_commitment(spec)) continue;
        const auto direct = evaluate(spec, a, p);
        const auto exact = oracle::bernoulli(spec, lab[c.id.index], p);
        ASSERT_EQ(direct.is_excluded(), !exact.has_value());
        if (!exact) continue;
        EXPECT_NEAR(direct.value(), *exact, 1e-12) << e.name;
        EXPECT_NEAR(*bernoulli_expectation(spec, a, p), *exact, 1e-12) << e.name;
      }
    }
  }
}

TEST(CorpusProperty, ThresholdValueDiffersFromItsExpectation) {
  const auto s = corpus::by_name("threshold-rider");
  const auto& spec = s.commuters[1].true_type.valuation;
  const auto direct = evaluate(spec, kShared, s.true_p()).value();
  const auto exact = *bernoulli_expectation(spec, kShared, s.true_p());
  EXPECT_GT(std::abs(direct - exact), 1e-3);
}

TEST(RandomProperty, EvaluateMatchesIndependentInterpreter) {
  oracle::ScenarioGenerator gen(5);
  for (int round = 0; round < 200; ++round) {
    const auto s = gen.next(1, 5);
    const auto p = s.true_p();
    for (const auto& a : enumerate_feasible_allocations(s)) {
      const auto lab = oracle::labels(a.encoding());
      for (const auto& c : s.commuters) {
        const auto& spec = c.true_type.valuation;
        const auto mine = evaluate(spec, a, p);
        const auto theirs = oracle::value(spec, lab[c.id.index], p);
        ASSERT_EQ(mine.is_excluded(), !theirs.has_value());
        if (theirs) EXPECT_DOUBLE_EQ(mine.value(), *theirs);
        const CommuterId absent{(c.id.index + 1) % s.size()};
        if (a[absent].role != Role::None) continue;
        const auto mine_absent = evaluate(spec, a, p, absent);
        const auto theirs_absent = oracle::value(spec, lab[c.id.index], p, absent.index);
        ASSERT_EQ(mine_absent.is_excluded(), !theirs_absent.has_value());
        if (theirs_absent && absent != c.id) {
          EXPECT_DOUBLE_EQ(mine_absent.value(), *theirs_absent);
        }
      }
    }
  }
}

TEST(RandomProperty, LinearSpecsPassNumericCheckAndMatchExpectation) {
  oracle::ScenarioGenerator gen(11);
  for (int round = 0; round < 100; ++round) {
    const auto s = gen.next(1, 6, true);
    const auto p = s.true_p();
    for (const auto& a : enumerate_feasible_allocations(s)) {
      for (const auto& c : s.commuters) {
        const auto& spec = c.true_type.valuation;
        ASSERT_TRUE(is_linear_in_commitment(spec));
        EXPECT_TRUE(check_linearity_numeric(spec, a, 3));
        const auto direct = evaluate(spec, a, p);
        if (direct.is_excluded()) continue;
        EXPECT_NEAR(direct.value(), *bernoulli_expectation(spec, a, p), 1e-12);
      }
    }
  }
}

TEST(RandomProperty, StructuralLinearityIsSoundNumerically) {
  oracle::ScenarioGenerator gen(23);
  for (int round = 0; round < 200; ++round) {
    const auto s = gen.next(1, 4);
    for (const auto& c : s.commuters) {
      const auto& spec = c.true_type.valuation;
      if (is_linear_in_commitment(spec)) EXPECT_TRUE(numerically_linear(s, spec, 5));
      if (is_external_commit_independent(spec)) {
        EXPECT_TRUE(numerically_independent(s, spec, 5));
      }
    }
  }
}

}  // namespace
}  // namespace rideshare
