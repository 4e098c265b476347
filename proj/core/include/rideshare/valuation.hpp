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
#include <stdexcept>
#include <variant>
#include <vector>

#include "rideshare/types.hpp"

namespace rideshare {

// ---------------------------------------------------------------------------
// Valuation DSL
//
// A valuation is an ordered list of clauses. The first clause whose outcome
// pattern matches the owner's own assignment decides the value: either the
// outcome is Excluded (an infeasible preference), or the clause's monomials
// are summed at the probability vector, provided every threshold gate holds.
// A clause whose gate fails is worth 0. If no clause matches, the value is
// `default_value`.
//
// Monomials are products of commitment probabilities, so clauses without
// gates and with unit exponents are multilinear in the probability vector.
// Gates and exponents above one are the only sources of non-linearity.
// ---------------------------------------------------------------------------

struct AnyPartners {
  friend bool operator==(const AnyPartners&, const AnyPartners&) = default;
};

struct ExactPartners {
  std::vector<CommuterId> partners;  // sorted, excludes the owner
  friend bool operator==(const ExactPartners&, const ExactPartners&) = default;
};

struct PartnerCountAtLeast {
  std::size_t count = 1;
  friend bool operator==(const PartnerCountAtLeast&,
                         const PartnerCountAtLeast&) = default;
};

using PartnerConstraint =
    std::variant<AnyPartners, ExactPartners, PartnerCountAtLeast>;

struct OutcomePattern {
  Role own_role = Role::None;
  PartnerConstraint partners = AnyPartners{};

  bool matches(const Assignment& own) const;
  friend bool operator==(const OutcomePattern&, const OutcomePattern&) = default;
};

enum class GateDirection { AtLeast, Below };

/// Requires `p[subject] >= bound` (AtLeast) or `p[subject] < bound` (Below).
struct ThresholdGate {
  CommuterId subject;
  double bound = 0.0;
  GateDirection direction = GateDirection::AtLeast;

  friend bool operator==(const ThresholdGate&, const ThresholdGate&) = default;
};

struct Factor {
  CommuterId subject;
  unsigned exponent = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// coefficient * prod(p[subject] ^ exponent)
struct Monomial {
  double coefficient = 0.0;
  std::vector<Factor> factors;

  double evaluate(std::span<const double> p) const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct Clause {
  OutcomePattern pattern;
  std::vector<ThresholdGate> gates;
  std::vector<Monomial> terms;
  bool excluded = false;

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct ValuationSpec {
  CommuterId owner;
  std::vector<Clause> clauses;
  double default_value = 0.0;

  friend bool operator==(const ValuationSpec&, const ValuationSpec&) = default;
};

/// Result of evaluating a valuation: a real value or the Excluded marker.
class Evaluation {
 public:
  static Evaluation excluded() { return Evaluation(); }
  static Evaluation of(double value) { return Evaluation(value); }

  bool is_excluded() const { return !value_.has_value(); }
  double value() const {
    if (!value_) throw std::logic_error("value() on an Excluded outcome");
    return *value_;
  }

  friend bool operator==(const Evaluation&, const Evaluation&) = default;

 private:
  Evaluation() = default;
  explicit Evaluation(double value) : value_(value) {}

  std::optional<double> value_;
};

/// Value of `spec` for its owner's assignment in `allocation` at the
/// commitment probabilities `p` (one entry per commuter).
///
/// `absent` names a commuter who does not participate: probability factors
/// on it evaluate as 0 and gates on it fail.
Evaluation evaluate(const ValuationSpec& spec, const Allocation& allocation,
                    std::span<const double> p,
                    std::optional<CommuterId> absent = std::nullopt);

/// As evaluate(), for an assignment of the owner given directly.
Evaluation evaluate_assignment(const ValuationSpec& spec, const Assignment& own,
                               std::span<const double> p,
                               std::optional<CommuterId> absent = std::nullopt);

/// Largest value any clause (or the default) can produce at `p`.
double max_value_bound(const ValuationSpec& spec, std::span<const double> p,
                       std::optional<CommuterId> absent = std::nullopt);

/// Structural problems with a spec relative to a scenario of `n` commuters.
/// Empty if the spec is well formed.
std::vector<std::string> spec_problems(const ValuationSpec& spec, std::size_t n);

/// True iff no monomial or gate references anyone but the owner.
bool is_external_commit_independent(const ValuationSpec& spec);

/// Structural linearity: after merging repeated factors and like monomials,
/// every monomial is multilinear and no clause with non-zero terms carries a
/// gate that can switch inside [0, 1].
bool is_linear_in_commitment(const ValuationSpec& spec);

/// Sorted, de-duplicated subjects referenced by factors or gates.
std::vector<CommuterId> referenced_subjects(const ValuationSpec& spec);

inline constexpr double kLinearityTolerance = 1e-9;
inline constexpr double kIndependenceTolerance = 1e-12;

/// Largest residual of the per-coordinate linearity identity
///   v(p) = p_j v(1, p_-j) + (1 - p_j) v(0, p_-j)
/// over every referenced j and every point of a uniform `grid`-point lattice
/// on (at most four of) the referenced subjects. Returns 0 when the outcome
/// is Excluded.
double linearity_residual(const ValuationSpec& spec, const Allocation& allocation,
                          unsigned grid);

/// Largest change in value when a non-owner coordinate moves along the lattice
/// with the owner's coordinate held fixed.
double independence_residual(const ValuationSpec& spec,
                             const Allocation& allocation, unsigned grid);

bool check_linearity_numeric(const ValuationSpec& spec,
                             const Allocation& allocation, unsigned grid);
bool check_independence_numeric(const ValuationSpec& spec,
                                const Allocation& allocation, unsigned grid);

}  // namespace rideshare
