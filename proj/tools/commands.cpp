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

#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <fstream>
#include <memory>
#include <ostream>
#include <system_error>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "rideshare/allocation.hpp"
#include "rideshare/audit.hpp"
#include "rideshare/corpus.hpp"
#include "rideshare/payments.hpp"
#include "scenario_io.hpp"

namespace rideshare::cli {

unsigned thread_count_from_env() {
  const char* raw = std::getenv("RIDESHARE_THREADS");
  unsigned requested = 0;
  if (raw != nullptr) {
    try {
      requested = static_cast<unsigned>(std::stoul(raw));
    } catch (const std::exception&) {
      requested = 0;
    }
  }
  if (requested == 0) requested = std::max(1U, std::thread::hardware_concurrency());
  return requested;
}

namespace {

std::string describe_assignment(const Assignment& a) {
  if (a.role == Role::None) return "none";
  std::string partners;
  for (std::size_t k = 0; k < a.partners.size(); ++k) {
    if (k > 0) partners += ", ";
    partners += std::to_string(a.partners[k].index);
  }
  return fmt::format("{} [{}]", role_name(a.role), partners);
}

std::string describe_allocation(const Allocation& a) {
  if (a.is_all_none()) return "all travel alone";
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& own = a[CommuterId{i}];
    if (own.role == Role::None) continue;
    if (!out.empty()) out += "; ";
    out += fmt::format("{} {}", i, describe_assignment(own));
  }
  return out;
}

void print_welfare(std::ostream& out, const WelfareReport& report) {
  const auto& a = report.allocation;
  if (a.is_all_none()) {
    fmt::print(out, "all travel alone, welfare {}\n", report.welfare);
    if (a.size() == 1) return;
  } else {
    fmt::print(out, "welfare {}\n", report.welfare);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    fmt::print(out, "commuter {}: {}, value {}\n", i,
               describe_assignment(a[CommuterId{i}]), report.per_commuter[i]);
  }
}

std::string describe_payment(const Payment& payment) {
  if (const auto* fixed = std::get_if<Unconditional>(&payment)) {
    return fmt::format("{}", fixed->amount);
  }
  const auto& c = std::get<Conditional>(payment);
  return fmt::format("({}, {})", c.on_commit, c.on_fail);
}

const std::map<std::string, Mechanism> kMechanisms{
    {"groves-zero", Mechanism::GrovesZero},
    {"groves-clarke", Mechanism::GrovesClarke},
    {"groves-clarke-public", Mechanism::GrovesClarkePublicP},
    {"commit", Mechanism::CommitBased},
};

PaymentSchedule schedule_for(const Scenario& s, Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::GrovesZero: return groves_payments(s, PivotRule::Zero);
    case Mechanism::GrovesClarke: return groves_payments(s, PivotRule::Clarke);
    case Mechanism::GrovesClarkePublicP: {
      const auto p = s.true_p();
      return groves_payments(s, PivotRule::Clarke, std::span<const double>(p));
    }
    case Mechanism::CommitBased: return commit_payments(s);
  }
  throw std::invalid_argument("unknown mechanism");
}

std::string describe_space(const DeviationSpace& space) {
  std::string scales;
  for (std::size_t k = 0; k < space.coefficient_scales.size(); ++k) {
    if (k > 0) scales += ", ";
    scales += fmt::format("{}", space.coefficient_scales[k]);
  }
  return fmt::format("p grid {} points, coefficient scales {{{}}}, gate toggles {}",
                     space.p_grid, scales, space.gate_toggles ? "on" : "off");
}

void print_report(std::ostream& out, const AuditReport& report) {
  fmt::print(out, "mechanism {}, notion {}\n", mechanism_name(report.mechanism),
             notion_name(report.notion));
  fmt::print(out, "deviation space: {}\n", describe_space(report.space));
  fmt::print(out, "verdict: {}\n", verdict_name(report.verdict));
  if (report.witness) {
    const auto& w = *report.witness;
    fmt::print(out,
               "witness: commuter {} reports p_commit {} with coefficient scale {}{}\n",
               w.commuter.index, w.deviated_report.p_commit,
               report.space.coefficient_scales.at(w.code.scale_index),
               w.code.gates_dropped ? " and gates dropped" : "");
    if (!w.opponent_reports.empty()) {
      for (std::size_t j = 0; j < w.opponent_reports.size(); ++j) {
        if (j == w.commuter.index) continue;
        fmt::print(out, "  opponent {} reports p_commit {}\n", j,
                   w.opponent_reports[j].p_commit);
      }
    }
    fmt::print(out, "  truthful utility {}\n  deviated utility {}\n  gain {}\n",
               w.truthful_utility, w.deviated_utility, w.gain);
  }
  fmt::print(out, "deviations checked {}, flagged {}\n", report.deviations_checked,
             report.flagged_deviations);
}

std::string format_mean(const MeanWithError& m) {
  return fmt::format("{} ± {}", m.mean, m.standard_error);
}

class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

Scenario load(const std::string& path) {
  try {
    return io::load_scenario(path);
  } catch (const std::system_error& e) {
    throw CommandError(kExitIoError, e.what());
  } catch (const io::ScenarioError& e) {
    throw CommandError(kExitInputError, fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace

void write_trials_csv(std::ostream& out, const SimulationResult& result) {
  out << "trial,commuter,committed,value,payment,utility\n";
  for (const auto& r : result.records) {
    for (std::size_t i = 0; i < r.commit.size(); ++i) {
      const int bit = r.commit.committed[i] ? 1 : 0;
      if (r.flagged) {
        fmt::print(out, "{},{},{},excluded,,\n", r.trial, i, bit);
      } else {
        fmt::print(out, "{},{},{},{},{},{}\n", r.trial, i, bit, r.values[i],
                   r.payments[i], r.utilities[i]);
      }
    }
  }
  const auto& s = result.summary;
  for (std::size_t i = 0; i < s.utility.size(); ++i) {
    fmt::print(out, "mean,{},{},{},{},{}\n", i, s.commit_rate[i].mean, s.value[i].mean,
               s.payment[i].mean, s.utility[i].mean);
  }
  for (std::size_t i = 0; i < s.utility.size(); ++i) {
    fmt::print(out, "stderr,{},{},{},{},{}\n", i, s.commit_rate[i].standard_error,
               s.value[i].standard_error, s.payment[i].standard_error,
               s.utility[i].standard_error);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ridesharing mechanisms under commitment uncertainty"};
  app.require_subcommand(1);

  std::string path;
  std::string mechanism_flag = "commit";
  bool public_p = false;
  std::string solver_flag = "exhaustive";

  auto* allocate = app.add_subcommand("allocate", "Efficient allocation of a scenario");
  allocate->add_option("scenario", path, "Scenario file")->required();
  allocate->add_option("--solver", solver_flag, "exhaustive or bnb")
      ->check(CLI::IsMember({"exhaustive", "bnb"}));

  auto* pay = app.add_subcommand("pay", "Payments under a mechanism");
  pay->add_option("scenario", path, "Scenario file")->required();
  pay->add_option("--mechanism", mechanism_flag, "groves-zero, groves-clarke or commit")
      ->check(CLI::IsMember({"groves-zero", "groves-clarke", "commit"}));
  pay->add_flag("--public-p", public_p,
                "Groves only: the mechanism knows the true probabilities");

  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::string csv_path;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo commitment realization");
  simulate->add_option("scenario", path, "Scenario file")->required();
  simulate->add_option("--trials", trials, "Number of trials")->required();
  simulate->add_option("--seed", seed, "Seed");
  simulate->add_option("--out", csv_path, "CSV output path")->required();
  simulate->add_option("--mechanism", mechanism_flag,
                       "groves-zero, groves-clarke, groves-clarke-public or commit")
      ->check(CLI::IsMember({"groves-zero", "groves-clarke", "groves-clarke-public", "commit"}));

  std::string notion_flag = "expost";
  DeviationSpace space;
  DeviationSpace opponent_space = DeviationSpace::opponents();
  bool no_gate_toggles = false;
  auto* audit = app.add_subcommand("audit", "Search for profitable misreports");
  audit->add_option("scenario", path, "Scenario file")->required();
  audit->add_option("--mechanism", mechanism_flag,
                    "groves-zero, groves-clarke, groves-clarke-public or commit")
      ->check(CLI::IsMember({"groves-zero", "groves-clarke", "groves-clarke-public", "commit"}));
  audit->add_option("--notion", notion_flag, "dominant or expost")
      ->check(CLI::IsMember({"dominant", "expost"}));
  audit->add_option("--grid", space.p_grid, "Points in the reported-probability grid")
      ->check(CLI::Range(2U, 100000U));
  audit->add_option("--opponent-grid", opponent_space.p_grid,
                    "Points in the opponents' probability grid (dominant)")
      ->check(CLI::Range(2U, 100000U));
  audit->add_option("--scales", space.coefficient_scales, "Coefficient multipliers");
  audit->add_flag("--no-gate-toggles", no_gate_toggles, "Never drop threshold gates");

  unsigned suite_grid = 21;
  auto* suite = app.add_subcommand("suite", "Run the bundled theorem suite");
  suite->add_option("--grid", suite_grid, "Points in the reported-probability grid")
      ->check(CLI::Range(2U, 100000U));

  std::string export_dir;
  auto* corpus_cmd = app.add_subcommand("corpus", "Write the bundled scenarios as files");
  corpus_cmd->add_option("directory", export_dir, "Output directory")->required();

  std::vector<std::string> argv_storage = args;
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  const unsigned threads = thread_count_from_env();
  try {
    if (*allocate) {
      const auto s = load(path);
      const auto solver = solver_flag == "bnb" ? Solver::BranchAndBound : Solver::Exhaustive;
      print_welfare(out, efficient_allocation(s, solver));
      return kExitOk;
    }

    if (*pay) {
      const auto s = load(path);
      Mechanism mechanism = kMechanisms.at(mechanism_flag);
      if (public_p) {
        if (mechanism == Mechanism::CommitBased) {
          throw CommandError(kExitInputError, "--public-p applies to Groves payments only");
        }
        if (mechanism == Mechanism::GrovesZero) {
          const auto p = s.true_p();
          const auto schedule = groves_payments(s, PivotRule::Zero, std::span<const double>(p));
          fmt::print(out, "mechanism groves-zero with public probabilities\n");
          fmt::print(out, "allocation: {}\n", describe_allocation(schedule.allocation));
          for (std::size_t i = 0; i < s.size(); ++i) {
            fmt::print(out, "commuter {}: {}\n", i, describe_payment(schedule.payments[i]));
          }
          return kExitOk;
        }
        mechanism = Mechanism::GrovesClarkePublicP;
      }
      const auto schedule = schedule_for(s, mechanism);
      fmt::print(out, "mechanism {}\n", mechanism_name(mechanism));
      fmt::print(out, "allocation: {}\n", describe_allocation(schedule.allocation));
      for (std::size_t i = 0; i < s.size(); ++i) {
        fmt::print(out, "commuter {}: {}\n", i, describe_payment(schedule.payments[i]));
      }
      return kExitOk;
    }

    if (*simulate) {
      if (trials == 0) throw CommandError(kExitInputError, "--trials must be positive");
      const auto s = load(path);
      std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
      if (!csv) throw CommandError(kExitIoError, "cannot write " + csv_path);
      const auto mechanism = kMechanisms.at(mechanism_flag);
      const auto result = run_trials(s, schedule_for(s, mechanism), trials, seed, threads);
      write_trials_csv(csv, result);
      csv.close();
      if (!csv) throw CommandError(kExitIoError, "failed writing " + csv_path);

      const auto& sum = result.summary;
      fmt::print(out, "mechanism {}, {} trials, seed {}, flagged {}\n",
                 mechanism_name(mechanism), sum.trials, seed, sum.flagged);
      for (std::size_t i = 0; i < sum.utility.size(); ++i) {
        fmt::print(out, "commuter {}: utility {}, value {}, payment {}\n", i,
                   format_mean(sum.utility[i]), format_mean(sum.value[i]),
                   format_mean(sum.payment[i]));
      }
      fmt::print(out, "welfare {}\ndeficit {}\n", format_mean(sum.welfare),
                 format_mean(sum.deficit));
      return kExitOk;
    }

    if (*audit) {
      const auto s = load(path);
      space.gate_toggles = !no_gate_toggles;
      opponent_space.gate_toggles = space.gate_toggles;
      const auto mechanism = kMechanisms.at(mechanism_flag);
      const AuditOptions options{threads};
      AuditReport report;
      try {
        report = notion_flag == "dominant"
                     ? audit_dominant(s, mechanism, space, opponent_space, options)
                     : audit_expost(s, mechanism, space, options);
      } catch (const AuditRefused& e) {
        throw CommandError(kExitInputError, e.what());
      }
      print_report(out, report);
      return report.verdict == Verdict::Violated ? kExitViolation : kExitOk;
    }

    if (*suite) {
      DeviationSpace suite_space;
      suite_space.p_grid = suite_grid;
      const auto results =
          run_theorem_suite(suite_space, DeviationSpace::opponents(), AuditOptions{threads});
      bool all_match = true;
      for (const auto& r : results) {
        all_match = all_match && r.matches;
        fmt::print(out, "{}  {:<52} {:<20} expected {:<20} got {:<20} gain {}\n",
                   r.matches ? "PASS" : "FAIL", r.entry.name,
                   fmt::format("{}/{}", mechanism_name(r.entry.mechanism),
                               notion_name(r.entry.notion)),
                   verdict_name(r.entry.expected), verdict_name(r.report.verdict),
                   r.report.witness ? r.report.witness->gain : 0.0);
      }
      fmt::print(out, "{} of {} entries as expected\n",
                 std::count_if(results.begin(), results.end(),
                               [](const auto& r) { return r.matches; }),
                 results.size());
      return all_match ? kExitOk : kExitViolation;
    }

    if (*corpus_cmd) {
      std::error_code ec;
      std::filesystem::create_directories(export_dir, ec);
      if (ec) throw CommandError(kExitIoError, "cannot create " + export_dir);
      for (const auto& entry : corpus::all()) {
        const auto file = std::filesystem::path(export_dir) / (entry.name + ".json");
        std::ofstream f(file, std::ios::binary | std::ios::trunc);
        f << io::serialize(entry.scenario);
        if (!f) throw CommandError(kExitIoError, "cannot write " + file.string());
        fmt::print(out, "{}\n", file.string());
      }
      return kExitOk;
    }
  } catch (const CommandError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return e.code();
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace rideshare::cli
