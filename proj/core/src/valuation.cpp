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

#include "rideshare/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace rideshare {

bool OutcomePattern::matches(const Assignment& own) const {
  if (own.role != own_role) return false;
  return std::visit(
      [&](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AnyPartners>) {
          return true;
        } else if constexpr (std::is_same_v<T, ExactPartners>) {
          return own.partners == c.partners;
        } else {
          return own.partners.size() >= c.count;
        }
      },
      partners);
}

namespace {

double power(double base, unsigned exponent) {
  double out = 1.0;
  for (unsigned e = 0; e < exponent; ++e) out *= base;
  return out;
}

double monomial_value(const Monomial& m, std::span<const double> p,
                      std::optional<CommuterId> absent) {
  double out = m.coefficient;
  for (const auto& f : m.factors) {
    const double x = (absent && f.subject == *absent) ? 0.0 : p[f.subject.index];
    out *= power(x, f.exponent);
  }
  return out;
}

bool gate_holds(const ThresholdGate& gate, std::span<const double> p,
                std::optional<CommuterId> absent) {
  if (absent && gate.subject == *absent) return false;
  const double x = p[gate.subject.index];
  return gate.direction == GateDirection::AtLeast ? x >= gate.bound
                                                  : x < gate.bound;
}

}  // namespace

double Monomial::evaluate(std::span<const double> p) const {
  return monomial_value(*this, p, std::nullopt);
}

Evaluation evaluate(const ValuationSpec& spec, const Allocation& allocation,
                    std::span<const double> p, std::optional<CommuterId> absent) {
  return evaluate_assignment(spec, allocation.at(spec.owner), p, absent);
}

Evaluation evaluate_assignment(const ValuationSpec& spec, const Assignment& own,
                               std::span<const double> p,
                               std::optional<CommuterId> absent) {
  for (const auto& clause : spec.clauses) {
    if (!clause.pattern.matches(own)) continue;
    if (clause.excluded) return Evaluation::excluded();
    for (const auto& gate : clause.gates) {
      if (!gate_holds(gate, p, absent)) return Evaluation::of(0.0);
    }
    double sum = 0.0;
    for (const auto& term : clause.terms) sum += monomial_value(term, p, absent);
    return Evaluation::of(sum);
  }
  return Evaluation::of(spec.default_value);
}

double max_value_bound(const ValuationSpec& spec, std::span<const double> p,
                       std::optional<CommuterId> absent) {
  double best = spec.default_value;
  for (const auto& clause : spec.clauses) {
    if (clause.excluded) continue;
    double sum = 0.0;
    for (const auto& term : clause.terms) sum += monomial_value(term, p, absent);
    // A failed gate makes the clause worth 0.
    best = std::max({best, sum, clause.gates.empty() ? sum : 0.0});
  }
  return best;
}

std::vector<std::string> spec_problems(const ValuationSpec& spec, std::size_t n) {
  std::vector<std::string> out;
  auto in_range = [n](CommuterId id) { return id.index < n; };
  if (!in_range(spec.owner)) out.push_back("owner is outside the scenario");
  if (!std::isfinite(spec.default_value)) out.push_back("default_value is not finite");
  for (std::size_t c = 0; c < spec.clauses.size(); ++c) {
    const auto& clause = spec.clauses[c];
    const std::string where = "clause " + std::to_string(c) + ": ";
    if (const auto* exact = std::get_if<ExactPartners>(&clause.pattern.partners)) {
      for (std::size_t k = 0; k < exact->partners.size(); ++k) {
        const auto id = exact->partners[k];
        if (!in_range(id)) out.push_back(where + "partner outside the scenario");
        if (id == spec.owner) out.push_back(where + "exact partners include the owner");
        if (k > 0 && !(exact->partners[k - 1] < id)) {
          out.push_back(where + "exact partners are not sorted and unique");
        }
      }
    }
    if (const auto* at_least = std::get_if<PartnerCountAtLeast>(&clause.pattern.partners)) {
      if (at_least->count < 1) out.push_back(where + "partner count bound must be >= 1");
    }
    if (clause.excluded && !clause.terms.empty()) {
      out.push_back(where + "excluded clause carries terms");
    }
    for (const auto& gate : clause.gates) {
      if (!in_range(gate.subject)) out.push_back(where + "gate subject outside the scenario");
      if (!(gate.bound >= 0.0 && gate.bound <= 1.0)) {
        out.push_back(where + "gate bound outside [0, 1]");
      }
    }
    for (const auto& term : clause.terms) {
      if (!std::isfinite(term.coefficient)) out.push_back(where + "coefficient is not finite");
      for (const auto& f : term.factors) {
        if (!in_range(f.subject)) out.push_back(where + "factor subject outside the scenario");
        if (f.exponent < 1) out.push_back(where + "factor exponent must be >= 1");
      }
    }
  }
  return out;
}

bool is_external_commit_independent(const ValuationSpec& spec) {
  for (const auto& clause : spec.clauses) {
    if (clause.excluded) continue;
    for (const auto& gate : clause.gates) {
      if (gate.subject != spec.owner) return false;
    }
    for (const auto& term : clause.terms) {
      for (const auto& f : term.factors) {
        if (f.subject != spec.owner) return false;
      }
    }
  }
  return true;
}

namespace {

// Canonical form of a clause's terms: like monomials merged, zero
// coefficients dropped. Keyed by subject -> total exponent.
std::map<std::map<std::size_t, unsigned>, double> normalized_terms(
    const Clause& clause) {
  std::map<std::map<std::size_t, unsigned>, double> out;
  for (const auto& term : clause.terms) {
    std::map<std::size_t, unsigned> key;
    for (const auto& f : term.factors) key[f.subject.index] += f.exponent;
    out[key] += term.coefficient;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

}  // namespace

bool is_linear_in_commitment(const ValuationSpec& spec) {
  for (const auto& clause : spec.clauses) {
    if (clause.excluded) continue;
    const auto terms = normalized_terms(clause);
    if (terms.empty()) continue;
    for (const auto& [key, coefficient] : terms) {
      for (const auto& [subject, exponent] : key) {
        if (exponent > 1) return false;
      }
    }
    // A gate at bound 0 never switches inside [0, 1]; any other bound does.
    for (const auto& gate : clause.gates) {
      if (gate.bound > 0.0) return false;
    }
  }
  return true;
}

std::vector<CommuterId> referenced_subjects(const ValuationSpec& spec) {
  std::vector<CommuterId> out;
  for (const auto& clause : spec.clauses) {
    for (const auto& gate : clause.gates) out.push_back(gate.subject);
    for (const auto& term : clause.terms) {
      for (const auto& f : term.factors) out.push_back(f.subject);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

constexpr std::size_t kMaxLatticeSubjects = 4;
constexpr double kOffLatticeValue = 0.5;

// Calls `fn(p)` at every point of the uniform lattice over `subjects`;
// coordinates not on the lattice sit at kOffLatticeValue.
template <typename Fn>
void for_each_lattice_point(std::size_t n, const std::vector<CommuterId>& subjects,
                            unsigned grid, Fn&& fn) {
  std::vector<double> p(n, kOffLatticeValue);
  std::vector<unsigned> odometer(subjects.size(), 0);
  const double step = 1.0 / static_cast<double>(grid - 1);
  while (true) {
    for (std::size_t k = 0; k < subjects.size(); ++k) {
      p[subjects[k].index] = odometer[k] * step;
    }
    fn(p);
    std::size_t k = 0;
    while (k < odometer.size() && ++odometer[k] == grid) odometer[k++] = 0;
    if (k == odometer.size()) break;
  }
}

std::vector<CommuterId> lattice_subjects(const ValuationSpec& spec) {
  auto subjects = referenced_subjects(spec);
  if (subjects.size() > kMaxLatticeSubjects) subjects.resize(kMaxLatticeSubjects);
  return subjects;
}

void require_grid(unsigned grid) {
  if (grid < 3) throw std::invalid_argument("lattice grid must have at least 3 points");
}

}  // namespace

double linearity_residual(const ValuationSpec& spec, const Allocation& allocation,
                          unsigned grid) {
  require_grid(grid);
  const std::size_t n = allocation.size();
  const auto subjects = lattice_subjects(spec);
  {
    const std::vector<double> probe(n, kOffLatticeValue);
    if (evaluate(spec, allocation, probe).is_excluded()) return 0.0;
  }
  double worst = 0.0;
  for_each_lattice_point(n, subjects, grid, [&](std::vector<double>& p) {
    const double v = evaluate(spec, allocation, p).value();
    for (const auto j : subjects) {
      const double pj = p[j.index];
      p[j.index] = 1.0;
      const double v1 = evaluate(spec, allocation, p).value();
      p[j.index] = 0.0;
      const double v0 = evaluate(spec, allocation, p).value();
      p[j.index] = pj;
      worst = std::max(worst, std::abs(v - (pj * v1 + (1.0 - pj) * v0)));
    }
  });
  return worst;
}

double independence_residual(const ValuationSpec& spec,
                             const Allocation& allocation, unsigned grid) {
  require_grid(grid);
  const std::size_t n = allocation.size();
  const auto subjects = lattice_subjects(spec);
  {
    const std::vector<double> probe(n, kOffLatticeValue);
    if (evaluate(spec, allocation, probe).is_excluded()) return 0.0;
  }
  const double step = 1.0 / static_cast<double>(grid - 1);
  double worst = 0.0;
  for_each_lattice_point(n, subjects, grid, [&](std::vector<double>& p) {
    const double v = evaluate(spec, allocation, p).value();
    for (const auto k : subjects) {
      if (k == spec.owner) continue;
      const double pk = p[k.index];
      for (unsigned g = 0; g < grid; ++g) {
        p[k.index] = g * step;
        worst = std::max(worst, std::abs(evaluate(spec, allocation, p).value() - v));
      }
      p[k.index] = pk;
    }
  });
  return worst;
}

bool check_linearity_numeric(const ValuationSpec& spec,
                             const Allocation& allocation, unsigned grid) {
  return linearity_residual(spec, allocation, grid) <= kLinearityTolerance;
}

bool check_independence_numeric(const ValuationSpec& spec,
                                const Allocation& allocation, unsigned grid) {
  return independence_residual(spec, allocation, grid) <= kIndependenceTolerance;
}

}  // namespace rideshare
