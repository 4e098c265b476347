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

#include "rideshare/audit.hpp"

#include <stdexcept>

#include "parallel.hpp"
#include "rideshare/allocation.hpp"
#include "rideshare/corpus.hpp"
#include "rideshare/payments.hpp"

namespace rideshare {

std::string_view mechanism_name(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::GrovesZero: return "groves-zero";
    case Mechanism::GrovesClarke: return "groves-clarke";
    case Mechanism::GrovesClarkePublicP: return "groves-clarke-public";
    case Mechanism::CommitBased: return "commit";
  }
  return "?";
}

std::string_view notion_name(Notion notion) {
  return notion == Notion::Dominant ? "dominant" : "expost";
}

std::string_view verdict_name(Verdict verdict) {
  return verdict == Verdict::Violated ? "violated" : "no-violation-found";
}

std::size_t DeviationSpace::size() const {
  return static_cast<std::size_t>(p_grid) * coefficient_scales.size() *
         (gate_toggles ? 2 : 1);
}

double DeviationSpace::p_value(unsigned index) const {
  return static_cast<double>(index) / static_cast<double>(p_grid - 1);
}

std::vector<DeviationCode> deviation_codes(const DeviationSpace& space) {
  if (space.p_grid < 2) throw std::invalid_argument("p_grid must be at least 2");
  std::vector<DeviationCode> codes;
  codes.reserve(space.size());
  for (unsigned p = 0; p < space.p_grid; ++p) {
    for (unsigned s = 0; s < space.coefficient_scales.size(); ++s) {
      codes.push_back({p, s, false});
      if (space.gate_toggles) codes.push_back({p, s, true});
    }
  }
  return codes;
}

TripType deviate(const TripType& truth, const DeviationSpace& space,
                 const DeviationCode& code) {
  TripType out = truth;
  out.p_commit = space.p_value(code.p_index);
  const double scale = space.coefficient_scales.at(code.scale_index);
  for (auto& clause : out.valuation.clauses) {
    for (auto& term : clause.terms) term.coefficient *= scale;
    if (code.gates_dropped) clause.gates.clear();
  }
  return out;
}

namespace {

bool has_gates(const ValuationSpec& spec) {
  for (const auto& clause : spec.clauses) {
    if (!clause.gates.empty()) return true;
  }
  return false;
}

// Dropping gates from a gate-free valuation repeats an earlier deviation.
std::vector<DeviationCode> distinct_codes(const TripType& truth,
                                          const DeviationSpace& space) {
  auto codes = deviation_codes(space);
  if (!has_gates(truth.valuation)) {
    std::erase_if(codes, [](const DeviationCode& c) { return c.gates_dropped; });
  }
  return codes;
}

Scenario working_scenario(const Scenario& reports, Mechanism mechanism) {
  if (mechanism == Mechanism::GrovesClarkePublicP) {
    return with_public_probabilities(reports, reports.true_p());
  }
  return reports;
}

// Pivot term of `id`; depends only on the others' reports.
double pivot_for(const Scenario& working, Mechanism mechanism, CommuterId id) {
  return mechanism == Mechanism::GrovesZero ? 0.0 : clarke_pivot(working, id);
}

// Utility of `id` when the mechanism runs on `working`, reusing its pivot.
std::optional<double> utility_with_pivot(const Scenario& working,
                                         Mechanism mechanism, CommuterId id,
                                         double pivot) {
  const auto efficient = efficient_allocation(working);
  Payment payment;
  if (mechanism == Mechanism::CommitBased) {
    payment = commit_payment(working, id, efficient.allocation, pivot);
  } else {
    double others = 0.0;
    for (std::size_t j = 0; j < working.size(); ++j) {
      if (j != id.index) others += efficient.per_commuter[j];
    }
    payment = Unconditional{pivot - others};
  }
  return expected_utility(working, id, efficient.allocation, payment);
}

struct ProfileOutcome {
  std::optional<Witness> best;
  std::size_t checked = 0;
  std::size_t flagged = 0;
};

// Best deviation of `id` against the fixed reports of everyone else in
// `reports` (whose entry for `id` is truthful). Deviations are scanned in
// code order and only a strictly larger gain replaces the incumbent.
ProfileOutcome best_deviation(const Scenario& reports, Mechanism mechanism,
                              CommuterId id, const DeviationSpace& space,
                              unsigned threads) {
  const auto& truth = reports[id].true_type;
  Scenario working = working_scenario(reports, mechanism);
  const double pivot = pivot_for(working, mechanism, id);
  const auto truthful = utility_with_pivot(working, mechanism, id, pivot);
  if (!truthful) {
    throw std::logic_error("truthful report produced an Excluded outcome");
  }

  const auto codes = distinct_codes(truth, space);
  std::vector<std::optional<double>> utilities(codes.size());
  detail::parallel_for(codes.size(), threads, [&](std::size_t k) {
    Scenario deviated = reports;
    deviated[id].reported_type = deviate(truth, space, codes[k]);
    utilities[k] = utility_with_pivot(working_scenario(deviated, mechanism),
                                      mechanism, id, pivot);
  });

  ProfileOutcome out;
  out.checked = codes.size();
  for (std::size_t k = 0; k < codes.size(); ++k) {
    if (!utilities[k]) {
      ++out.flagged;
      continue;
    }
    const double gain = *utilities[k] - *truthful;
    if (!out.best || gain > out.best->gain) {
      Witness w;
      w.commuter = id;
      w.code = codes[k];
      w.deviated_report = deviate(truth, space, codes[k]);
      w.truthful_utility = *truthful;
      w.deviated_utility = *utilities[k];
      w.gain = gain;
      out.best = std::move(w);
    }
  }
  return out;
}

void absorb(AuditReport& report, ProfileOutcome&& outcome,
            const std::vector<TripType>& opponents) {
  report.deviations_checked += outcome.checked;
  report.flagged_deviations += outcome.flagged;
  if (!outcome.best) return;
  if (!report.witness || outcome.best->gain > report.witness->gain) {
    report.witness = std::move(outcome.best);
    report.witness->opponent_reports = opponents;
  }
}

void finish(AuditReport& report) {
  if (report.witness && report.witness->gain > kGainTolerance) {
    report.verdict = Verdict::Violated;
  } else {
    report.verdict = Verdict::NoViolationFound;
    report.witness.reset();
  }
}

void require_valid(const Scenario& scenario) {
  const auto violations = validate_scenario(scenario);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid scenario: " + violations.front().message);
  }
}

}  // namespace

std::optional<double> mechanism_utility(const Scenario& scenario,
                                        Mechanism mechanism, CommuterId id) {
  PaymentSchedule schedule;
  switch (mechanism) {
    case Mechanism::GrovesZero:
      schedule = groves_payments(scenario, PivotRule::Zero);
      break;
    case Mechanism::GrovesClarke:
      schedule = groves_payments(scenario, PivotRule::Clarke);
      break;
    case Mechanism::GrovesClarkePublicP: {
      const auto p = scenario.true_p();
      schedule = groves_payments(scenario, PivotRule::Clarke, std::span<const double>(p));
      break;
    }
    case Mechanism::CommitBased:
      schedule = commit_payments(scenario);
      break;
  }
  return expected_utility(scenario, id, schedule);
}

AuditReport audit_expost(const Scenario& scenario, Mechanism mechanism,
                         const DeviationSpace& space, const AuditOptions& options) {
  require_valid(scenario);
  const Scenario truthful = with_truthful_reports(scenario);
  AuditReport report;
  report.mechanism = mechanism;
  report.notion = Notion::ExPost;
  report.space = space;
  for (std::size_t i = 0; i < truthful.size(); ++i) {
    absorb(report,
           best_deviation(truthful, mechanism, CommuterId{i}, space, options.threads),
           {});
  }
  finish(report);
  return report;
}

AuditReport audit_dominant(const Scenario& scenario, Mechanism mechanism,
                           const DeviationSpace& space,
                           const DeviationSpace& opponent_space,
                           const AuditOptions& options) {
  require_valid(scenario);
  const std::size_t n = scenario.size();
  if (n > kDominantAuditMaxCommuters) {
    throw AuditRefused("dominant-strategy audit sweeps every opponent profile and is "
                       "limited to " + std::to_string(kDominantAuditMaxCommuters) +
                       " commuters; this scenario has " + std::to_string(n) +
                       " (use the ex-post audit instead)");
  }
  const Scenario truthful = with_truthful_reports(scenario);

  // Each commuter's menu of reports as an opponent: truthful first.
  std::vector<std::vector<TripType>> menus(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& truth = truthful.commuters[j].true_type;
    menus[j].push_back(truth);
    for (const auto& code : distinct_codes(truth, opponent_space)) {
      menus[j].push_back(deviate(truth, opponent_space, code));
    }
  }

  AuditReport report;
  report.mechanism = mechanism;
  report.notion = Notion::Dominant;
  report.space = space;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> opponents;
    std::size_t profiles = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      opponents.push_back(j);
      profiles *= menus[j].size();
    }

    std::vector<ProfileOutcome> outcomes(profiles);
    std::vector<std::vector<TripType>> profile_reports(profiles);
    detail::parallel_for(profiles, options.threads, [&](std::size_t index) {
      Scenario reports = truthful;
      std::size_t rest = index;
      for (auto j : opponents) {
        reports.commuters[j].reported_type = menus[j][rest % menus[j].size()];
        rest /= menus[j].size();
      }
      for (const auto& c : reports.commuters) {
        profile_reports[index].push_back(c.reported_type);
      }
      outcomes[index] = best_deviation(reports, mechanism, CommuterId{i}, space, 1);
    });
    for (std::size_t index = 0; index < profiles; ++index) {
      absorb(report, std::move(outcomes[index]), profile_reports[index]);
    }
  }
  finish(report);
  return report;
}

double replay_gain(const Scenario& scenario, Mechanism mechanism,
                   const Witness& witness) {
  Scenario reports = with_truthful_reports(scenario);
  if (!witness.opponent_reports.empty()) {
    if (witness.opponent_reports.size() != reports.size()) {
      throw std::invalid_argument("witness opponent profile has the wrong length");
    }
    for (std::size_t j = 0; j < reports.size(); ++j) {
      reports.commuters[j].reported_type = witness.opponent_reports[j];
    }
  }
  const CommuterId id = witness.commuter;
  reports[id].reported_type = reports[id].true_type;
  const auto truthful = mechanism_utility(reports, mechanism, id);
  reports[id].reported_type = witness.deviated_report;
  const auto deviated = mechanism_utility(reports, mechanism, id);
  if (!truthful || !deviated) {
    throw std::logic_error("witness replay hit an Excluded outcome");
  }
  return *deviated - *truthful;
}

std::vector<SuiteEntry> theorem_suite() {
  std::vector<SuiteEntry> suite;
  const auto pair = corpus::by_name("linear-pair");
  suite.push_back({"groves-clarke manipulable with private p", pair,
                   Mechanism::GrovesClarke, Notion::ExPost, Verdict::Violated});
  suite.push_back({"groves-zero manipulable with private p", pair,
                   Mechanism::GrovesZero, Notion::ExPost, Verdict::Violated});
  suite.push_back({"groves-clarke truthful with public p", pair,
                   Mechanism::GrovesClarkePublicP, Notion::Dominant,
                   Verdict::NoViolationFound});
  suite.push_back({"groves-clarke truthful without commit externality",
                   corpus::by_name("constant-values"), Mechanism::GrovesClarke,
                   Notion::Dominant, Verdict::NoViolationFound});
  for (auto& entry : corpus::all()) {
    if (!entry.all_linear || entry.scenario.size() > 4) continue;
    suite.push_back({"commit ex-post truthful, " + entry.name, entry.scenario,
                     Mechanism::CommitBased, Notion::ExPost,
                     Verdict::NoViolationFound});
  }
  suite.push_back({"commit not dominant-strategy truthful", pair, Mechanism::CommitBased,
                   Notion::Dominant, Verdict::Violated});
  suite.push_back({"commit manipulable with threshold rider", corpus::by_name("threshold-rider"),
                   Mechanism::CommitBased, Notion::ExPost, Verdict::Violated});
  suite.push_back({"commit manipulable with quadratic rider",
                   corpus::by_name("quadratic-reliability"), Mechanism::CommitBased,
                   Notion::ExPost, Verdict::Violated});
  suite.push_back({"commit truthful when threshold always met",
                   corpus::by_name("threshold-reliable-driver"), Mechanism::CommitBased,
                   Notion::ExPost, Verdict::NoViolationFound});
  return suite;
}

std::vector<SuiteResult> run_theorem_suite(const DeviationSpace& space,
                                           const DeviationSpace& opponent_space,
                                           const AuditOptions& options) {
  std::vector<SuiteResult> results;
  for (auto& entry : theorem_suite()) {
    SuiteResult r{entry, {}, false};
    r.report = entry.notion == Notion::ExPost
                   ? audit_expost(entry.scenario, entry.mechanism, space, options)
                   : audit_dominant(entry.scenario, entry.mechanism, space,
                                    opponent_space, options);
    r.matches = r.report.verdict == entry.expected;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace rideshare
