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

// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "commands.hpp"
#include "oracles.hpp"
#include "rideshare/allocation.hpp"
#include "rideshare/audit.hpp"
#include "rideshare/corpus.hpp"
#include "rideshare/payments.hpp"
#include "rideshare/simulate.hpp"

namespace {

using namespace rideshare;

constexpr double kExact = 1e-12;
constexpr double kResidualFloor = 1e-3;
constexpr unsigned kFineGrid = 41;
constexpr std::size_t kMonteCarloTrials = 200000;
constexpr std::uint64_t kMonteCarloSeed = 20261018;

struct Result {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

DeviationSpace grid(unsigned points) {
  DeviationSpace space;
  space.p_grid = points;
  return space;
}

double max_linearity_residual(const Scenario& s, const ValuationSpec& spec, unsigned lattice) {
  double worst = 0.0;
  for (const auto& a : enumerate_feasible_allocations(s)) {
    worst = std::max(worst, linearity_residual(spec, a, lattice));
  }
  return worst;
}

bool numerically_linear(const Scenario& s, const ValuationSpec& spec, unsigned lattice) {
  for (const auto& a : enumerate_feasible_allocations(s)) {
    if (!check_linearity_numeric(spec, a, lattice)) return false;
  }
  return true;
}

bool scenario_is_linear(const Scenario& s) {
  for (const auto& c : s.commuters) {
    if (!is_linear_in_commitment(c.true_type.valuation) ||
        !is_linear_in_commitment(c.reported_type.valuation)) {
      return false;
    }
  }
  return true;
}

Result manipulation_reproduction() {
  const double alpha = -2.0;
  const double beta = 5.0;
  const double threshold = 0.6;
  const double p_i = 0.5;
  const double p_j = 0.8;
  const auto s = corpus::threshold_pair(alpha, beta, threshold, p_i, p_j);
  const auto start = Clock::now();
  const auto report = audit_expost(s, Mechanism::CommitBased, grid(21));
  const double elapsed = seconds_since(start);
  const double closed_form = (alpha + beta) * p_i * p_j;
  if (report.verdict != Verdict::Violated || !report.witness) {
    return {false, "no violation found"};
  }
  const auto& w = *report.witness;
  const bool pass = std::abs(w.gain - closed_form) <= kExact &&
                    w.deviated_report.p_commit >= threshold && elapsed < 1.0;
  return {pass, fmt::format("commuter {} reports p {}, gain {} vs closed form {} (tol {}), {:.3f} s "
                            "(limit 1 s)",
                            w.commuter.index, w.deviated_report.p_commit, w.gain, closed_form,
                            kExact, elapsed)};
}

Result linear_positive_suite() {
  const auto start = Clock::now();
  std::size_t audited = 0;
  double worst_gain = 0.0;
  std::string offenders;
  for (const auto& e : corpus::all()) {
    if (e.scenario.size() > 4 || !scenario_is_linear(e.scenario)) continue;
    ++audited;
    const auto report = audit_expost(e.scenario, Mechanism::CommitBased, grid(kFineGrid));
    if (report.witness) worst_gain = std::max(worst_gain, report.witness->gain);
    if (report.verdict == Verdict::Violated) offenders += " " + e.name;
  }
  const double elapsed = seconds_since(start);
  const bool pass = audited >= 10 && offenders.empty() && elapsed < 60.0;
  return {pass, fmt::format("{} linear scenarios, {}-point grid, largest gain {} (tol {}){}, "
                            "{:.2f} s (limit 60 s)",
                            audited, kFineGrid, worst_gain, kGainTolerance,
                            offenders.empty() ? "" : ", violated:" + offenders, elapsed)};
}

Result groves_private_negative() {
  const auto s = corpus::linear_pair(-2.0, 5.0, 0.5, 0.8);
  const auto report = audit_expost(s, Mechanism::GrovesClarke, grid(kFineGrid));
  if (report.verdict != Verdict::Violated || !report.witness) {
    return {false, "no violation found"};
  }
  const auto& w = *report.witness;
  const bool pass = w.commuter == CommuterId{0} && w.deviated_report.p_commit == 1.0 &&
                    std::abs(w.gain - 2.0) <= kExact;
  return {pass, fmt::format("commuter {} reports p {}, utility {} -> {}, gain {} (expected 2, "
                            "tol {})",
                            w.commuter.index, w.deviated_report.p_commit, w.truthful_utility,
                            w.deviated_utility, w.gain, kExact)};
}

Result groves_public_positive() {
  const auto s = corpus::linear_pair(-2.0, 5.0, 0.5, 0.8);
  const auto start = Clock::now();
  const auto report =
      audit_dominant(s, Mechanism::GrovesClarkePublicP, grid(kFineGrid), grid(kFineGrid));
  const double elapsed = seconds_since(start);
  const bool pass = report.verdict == Verdict::NoViolationFound && elapsed < 60.0;
  return {pass, fmt::format("{} own x opponent deviations on {}-point grids, verdict {}, "
                            "{:.2f} s (limit 60 s)",
                            report.deviations_checked, kFineGrid, verdict_name(report.verdict),
                            elapsed)};
}

Result necessity_witnesses() {
  bool pass = true;
  std::string detail;
  for (const std::string name : {"threshold-rider", "quadratic-reliability"}) {
    const auto s = corpus::by_name(name);
    const auto report = audit_expost(s, Mechanism::CommitBased, grid(21));
    bool structural = true;
    double residual = 0.0;
    for (const auto& c : s.commuters) {
      structural = structural && is_linear_in_commitment(c.true_type.valuation);
      residual = std::max(residual, max_linearity_residual(s, c.true_type.valuation, 5));
    }
    const bool ok = report.verdict == Verdict::Violated && !structural && residual > kResidualFloor;
    pass = pass && ok;
    detail += fmt::format("{}{}: {}, structurally {}, residual {} (> {})",
                          detail.empty() ? "" : "; ", name, verdict_name(report.verdict),
                          structural ? "linear" : "non-linear", residual, kResidualFloor);
  }
  return {pass, detail};
}

Result linearity_oracles() {
  std::size_t specs = 0;
  std::size_t agree = 0;
  std::size_t points = 0;
  double worst = 0.0;
  bool bernoulli_ok = true;
  for (const auto& e : corpus::all()) {
    for (const auto& c : e.scenario.commuters) {
      for (const auto* trip : {&c.true_type, &c.reported_type}) {
        const auto& spec = trip->valuation;
        ++specs;
        const bool structural = is_linear_in_commitment(spec);
        if (structural == numerically_linear(e.scenario, spec, 5)) ++agree;
        if (!structural || e.scenario.size() > 6) continue;
        for (const auto& p : {e.scenario.true_p(), e.scenario.reported_p()}) {
          for (const auto& a : enumerate_feasible_allocations(e.scenario)) {
            const auto direct = evaluate(spec, a, p);
            const auto exact =
                oracle::bernoulli(spec, oracle::labels(a.encoding())[c.id.index], p);
            if (direct.is_excluded() != !exact.has_value()) {
              bernoulli_ok = false;
              continue;
            }
            if (!exact) continue;
            ++points;
            worst = std::max(worst, std::abs(direct.value() - *exact));
          }
        }
      }
    }
  }
  const bool pass = agree == specs && bernoulli_ok && worst <= kExact;
  return {pass, fmt::format("structural/numeric agree on {}/{} specs; {} multilinear evaluations, "
                            "largest gap to exact expectation {} (tol {})",
                            agree, specs, points, worst, kExact)};
}

Result payment_report_independence() {
  const DeviationSpace space = grid(21);
  std::size_t groups = 0;
  double worst = 0.0;
  for (const auto& e : corpus::all()) {
    for (std::size_t i = 0; i < e.scenario.size(); ++i) {
      const CommuterId id{i};
      std::map<std::vector<std::size_t>, Conditional> first;
      for (const auto& code : deviation_codes(space)) {
        auto s = e.scenario;
        s.commuters[i].reported_type = deviate(s[id].true_type, space, code);
        const auto schedule = commit_payments(s);
        const auto x = std::get<Conditional>(schedule[id]);
        const auto [it, fresh] = first.emplace(schedule.allocation.encoding(), x);
        if (fresh) {
          ++groups;
          continue;
        }
        worst = std::max({worst, std::abs(it->second.on_commit - x.on_commit),
                          std::abs(it->second.on_fail - x.on_fail)});
      }
    }
  }
  return {worst == 0.0, fmt::format("{} (commuter, allocation) groups over the {}-point sweep, "
                                    "max spread {} (required 0)",
                                    groups, space.p_grid, worst)};
}

Result individual_rationality() {
  double worst_commit = 0.0;
  double worst_clarke = 0.0;
  for (const auto& e : corpus::all()) {
    const auto p = e.scenario.true_p();
    const auto clarke = groves_payments(e.scenario, PivotRule::Clarke,
                                        std::optional<std::span<const double>>(p));
    const auto commit = commit_payments(e.scenario);
    for (std::size_t i = 0; i < e.scenario.size(); ++i) {
      const CommuterId id{i};
      worst_clarke = std::min(worst_clarke, *expected_utility(e.scenario, id, clarke));
      if (e.all_linear) {
        worst_commit = std::min(worst_commit, *expected_utility(e.scenario, id, commit));
      }
    }
  }
  const bool pass = worst_commit >= -kExact && worst_clarke >= -kExact;
  return {pass, fmt::format("lowest truthful utility: commit on linear corpus {}, public-p Clarke "
                            "on corpus {} (floor -{})",
                            worst_commit, worst_clarke, kExact)};
}

Result simulation_consistency() {
  double worst_exact = 0.0;
  double worst_z = 0.0;
  bool within = true;
  bool bytes_equal = true;
  std::size_t scenarios = 0;
  for (const auto& e : corpus::all()) {
    if (!e.all_linear) continue;
    ++scenarios;
    const auto schedule = commit_payments(e.scenario);
    const auto exact = enumerate_expected_utilities(e.scenario, schedule);
    const auto sampled =
        run_trials(e.scenario, schedule, kMonteCarloTrials, kMonteCarloSeed,
                   cli::thread_count_from_env());
    for (std::size_t i = 0; i < e.scenario.size(); ++i) {
      const double expected = *expected_utility(e.scenario, CommuterId{i}, schedule);
      if (!exact) {
        within = false;
        continue;
      }
      worst_exact = std::max(worst_exact, std::abs((*exact)[i] - expected));
      const auto& u = sampled.summary.utility[i];
      const double gap = std::abs(u.mean - expected);
      // A zero-variance utility has standard error 0; its mean may still
      // differ from the closed form by rounding.
      if (gap > 3 * u.standard_error + kExact) within = false;
      if (u.standard_error > 0) worst_z = std::max(worst_z, gap / u.standard_error);
    }
  }
  const auto s = corpus::by_name("four-commuters-mixed");
  const auto schedule = commit_payments(s);
  std::ostringstream first;
  std::ostringstream second;
  cli::write_trials_csv(first, run_trials(s, schedule, 10000, kMonteCarloSeed, 1));
  cli::write_trials_csv(second, run_trials(s, schedule, 10000, kMonteCarloSeed, 4));
  bytes_equal = first.str() == second.str() && !first.str().empty();
  const bool pass = worst_exact <= kExact && within && bytes_equal;
  return {pass, fmt::format("{} linear scenarios: enumeration gap {} (tol {}); {} trials, largest "
                            "|mean - expected| = {:.3f} SE (limit 3); CSV bytes {}",
                            scenarios, worst_exact, kExact, kMonteCarloTrials, worst_z,
                            bytes_equal ? "identical" : "differ")};
}

Result allocation_oracle() {
  std::size_t checked = 0;
  std::string offenders;
  for (const auto& e : corpus::all()) {
    if (e.scenario.size() > 6) continue;
    ++checked;
    const auto mine = efficient_allocation(e.scenario);
    const auto naive = oracle::best(e.scenario);
    if (mine.allocation.encoding() != naive.map ||
        std::abs(mine.welfare - naive.welfare) > kExact) {
      offenders += " " + e.name;
    }
  }
  return {offenders.empty(),
          fmt::format("{} corpus scenarios, allocation identical and welfare within {}{}", checked,
                      kExact, offenders.empty() ? "" : ", mismatched:" + offenders)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"commit-based threshold manipulation gain", manipulation_reproduction},
      {"commit-based ex-post truthful on linear corpus", linear_positive_suite},
      {"Clarke manipulable under private probabilities", groves_private_negative},
      {"Clarke dominant-strategy truthful with public probabilities", groves_public_positive},
      {"non-linear valuations admit manipulation", necessity_witnesses},
      {"linearity oracles agree", linearity_oracles},
      {"commit payment independent of own report", payment_report_independence},
      {"individual rationality", individual_rationality},
      {"simulation consistency", simulation_consistency},
      {"allocation matches naive enumerator", allocation_oracle},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Result r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    if (!r.pass) ++failures;
    std::printf("%s %2zu  %s: %s\n", r.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
