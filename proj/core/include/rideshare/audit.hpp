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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rideshare/model.hpp"

namespace rideshare {

enum class Mechanism { GrovesZero, GrovesClarke, GrovesClarkePublicP, CommitBased };
enum class Notion { Dominant, ExPost };
enum class Verdict { NoViolationFound, Violated };

std::string_view mechanism_name(Mechanism mechanism);
std::string_view notion_name(Notion notion);
std::string_view verdict_name(Verdict verdict);

/// Discretized misreports of a single commuter. A deviation reports a
/// probability from a uniform `p_grid`-point grid on [0, 1], with every
/// monomial coefficient multiplied by one of `coefficient_scales`, and
/// optionally with all threshold gates removed.
struct DeviationSpace {
  unsigned p_grid = 21;
  std::vector<double> coefficient_scales = {0.0, 0.5, 1.0, 2.0, 10.0};
  bool gate_toggles = true;

  std::size_t size() const;
  double p_value(unsigned index) const;

  /// Coarser space used for opponents in dominant-strategy audits.
  static DeviationSpace opponents() { return {5, {0.0, 0.5, 1.0, 2.0, 10.0}, true}; }
};

/// Position of a deviation in its space; ordering is lexicographic on
/// (p_index, scale_index, gates_dropped).
struct DeviationCode {
  unsigned p_index = 0;
  unsigned scale_index = 0;
  bool gates_dropped = false;

  friend auto operator<=>(const DeviationCode&, const DeviationCode&) = default;
};

/// The misreported trip for `code`, derived from the commuter's true type.
TripType deviate(const TripType& truth, const DeviationSpace& space,
                 const DeviationCode& code);

/// All codes of `space` in lexicographic order.
std::vector<DeviationCode> deviation_codes(const DeviationSpace& space);

inline constexpr double kGainTolerance = 1e-9;

struct Witness {
  CommuterId commuter;
  DeviationCode code;
  TripType deviated_report;
  /// Reports of everyone else (dominant audits); empty means truthful.
  std::vector<TripType> opponent_reports;
  double truthful_utility = 0.0;
  double deviated_utility = 0.0;
  double gain = 0.0;
};

struct AuditReport {
  Mechanism mechanism = Mechanism::CommitBased;
  Notion notion = Notion::ExPost;
  Verdict verdict = Verdict::NoViolationFound;
  std::optional<Witness> witness;
  /// Grid the verdict is relative to.
  DeviationSpace space;
  std::size_t deviations_checked = 0;
  /// Deviations whose allocation gives the deviator an Excluded outcome
  /// under its true valuation; never counted as profitable.
  std::size_t flagged_deviations = 0;
};

/// Raised when an audit's combinatorial guard refuses the scenario.
class AuditRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuditOptions {
  unsigned threads = 1;
};

/// Expected utility of `id` (true type) when the mechanism runs on the
/// scenario's reported types. nullopt on an Excluded true outcome.
std::optional<double> mechanism_utility(const Scenario& scenario,
                                        Mechanism mechanism, CommuterId id);

/// Ex-post audit: everyone else reports truthfully, each commuter tries every
/// deviation in `space`. Reports the largest gain, ties to the lowest
/// commuter id and then the lowest deviation code.
AuditReport audit_expost(const Scenario& scenario, Mechanism mechanism,
                         const DeviationSpace& space = {},
                         const AuditOptions& options = {});

inline constexpr std::size_t kDominantAuditMaxCommuters = 4;

/// Dominant-strategy audit: as audit_expost, additionally ranging every
/// other commuter over truthful plus each deviation in `opponent_space`.
/// Throws AuditRefused for more than four commuters.
AuditReport audit_dominant(const Scenario& scenario, Mechanism mechanism,
                           const DeviationSpace& space,
                           const DeviationSpace& opponent_space,
                           const AuditOptions& options = {});

/// Recomputes both utilities of a witness from scratch and returns the gain.
double replay_gain(const Scenario& scenario, Mechanism mechanism,
                   const Witness& witness);

struct SuiteEntry {
  std::string name;
  Scenario scenario;
  Mechanism mechanism;
  Notion notion;
  Verdict expected;
};

/// Bundled possibility and impossibility cases: Groves under private and
/// public probabilities, commit-based payments on linear valuations, and the
/// threshold and exponent counterexamples.
std::vector<SuiteEntry> theorem_suite();

struct SuiteResult {
  SuiteEntry entry;
  AuditReport report;
  bool matches = false;
};

std::vector<SuiteResult> run_theorem_suite(
    const DeviationSpace& space = {},
    const DeviationSpace& opponent_space = DeviationSpace::opponents(),
                                           const AuditOptions& options = {});

}  // namespace rideshare
