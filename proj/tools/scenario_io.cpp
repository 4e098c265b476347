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

#include "scenario_io.hpp"

#include <cerrno>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace rideshare::io {

using nlohmann::json;

namespace {

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string at_key(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void require_object(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ScenarioError(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw ScenarioError(at_key(path, key), "unknown field");
  }
}

const json& member(const json& j, const std::string& path, std::string_view key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(at_key(path, key), "missing required field");
  return *it;
}

const json& array_member(const json& j, const std::string& path, std::string_view key) {
  const auto& v = member(j, path, key);
  if (!v.is_array()) throw ScenarioError(at_key(path, key), "expected an array");
  return v;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError(path, "expected a finite number");
  return v;
}

std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ScenarioError(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

double as_probability(const json& j, const std::string& path) {
  const double p = as_number(j, path);
  if (p < 0.0 || p > 1.0) {
    std::ostringstream msg;
    msg << "probability " << p << " is outside [0, 1]";
    throw ScenarioError(path, msg.str());
  }
  return p;
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ScenarioError(path, "expected true or false");
  return j.get<bool>();
}

Role parse_role(const json& j, const std::string& path) {
  if (j == "drive") return Role::Drive;
  if (j == "ride") return Role::Ride;
  if (j == "none") return Role::None;
  throw ScenarioError(path, "expected one of \"drive\", \"ride\", \"none\"");
}

PartnerConstraint parse_partners(const json& j, const std::string& path) {
  if (j == "any") return AnyPartners{};
  if (!j.is_object() || j.size() != 1) {
    throw ScenarioError(path, "expected \"any\", {\"exact\": [...]} or {\"at_least\": k}");
  }
  require_object(j, path, {"exact", "at_least"});
  if (j.contains("exact")) {
    const auto& list = array_member(j, path, "exact");
    ExactPartners exact;
    for (std::size_t k = 0; k < list.size(); ++k) {
      exact.partners.push_back(CommuterId{as_index(list[k], at_index(at_key(path, "exact"), k))});
    }
    return exact;
  }
  return PartnerCountAtLeast{as_index(j.at("at_least"), at_key(path, "at_least"))};
}

ThresholdGate parse_gate(const json& j, const std::string& path) {
  require_object(j, path, {"subject", "bound", "direction"});
  ThresholdGate gate;
  gate.subject = CommuterId{as_index(member(j, path, "subject"), at_key(path, "subject"))};
  gate.bound = as_probability(member(j, path, "bound"), at_key(path, "bound"));
  const auto& dir = member(j, path, "direction");
  if (dir == "at_least") {
    gate.direction = GateDirection::AtLeast;
  } else if (dir == "below") {
    gate.direction = GateDirection::Below;
  } else {
    throw ScenarioError(at_key(path, "direction"), "expected \"at_least\" or \"below\"");
  }
  return gate;
}

Monomial parse_term(const json& j, const std::string& path) {
  require_object(j, path, {"coefficient", "factors"});
  Monomial m;
  m.coefficient = as_number(member(j, path, "coefficient"), at_key(path, "coefficient"));
  const auto& factors = array_member(j, path, "factors");
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto fpath = at_index(at_key(path, "factors"), k);
    require_object(factors[k], fpath, {"subject", "exponent"});
    Factor f;
    f.subject = CommuterId{as_index(member(factors[k], fpath, "subject"), at_key(fpath, "subject"))};
    const auto exponent = as_index(member(factors[k], fpath, "exponent"), at_key(fpath, "exponent"));
    if (exponent < 1) throw ScenarioError(at_key(fpath, "exponent"), "exponent must be at least 1");
    f.exponent = static_cast<unsigned>(exponent);
    m.factors.push_back(f);
  }
  return m;
}

Clause parse_clause(const json& j, const std::string& path) {
  require_object(j, path, {"role", "partners", "gates", "terms", "excluded"});
  Clause c;
  c.pattern.own_role = parse_role(member(j, path, "role"), at_key(path, "role"));
  c.pattern.partners = parse_partners(member(j, path, "partners"), at_key(path, "partners"));
  if (j.contains("gates")) {
    const auto& gates = array_member(j, path, "gates");
    for (std::size_t k = 0; k < gates.size(); ++k) {
      c.gates.push_back(parse_gate(gates[k], at_index(at_key(path, "gates"), k)));
    }
  }
  if (j.contains("terms")) {
    const auto& terms = array_member(j, path, "terms");
    for (std::size_t k = 0; k < terms.size(); ++k) {
      c.terms.push_back(parse_term(terms[k], at_index(at_key(path, "terms"), k)));
    }
  }
  if (j.contains("excluded")) c.excluded = as_bool(j.at("excluded"), at_key(path, "excluded"));
  return c;
}

ValuationSpec parse_valuation(const json& j, const std::string& path, CommuterId owner) {
  require_object(j, path, {"clauses", "default_value"});
  ValuationSpec v;
  v.owner = owner;
  if (j.contains("default_value")) {
    v.default_value = as_number(j.at("default_value"), at_key(path, "default_value"));
  }
  const auto& clauses = array_member(j, path, "clauses");
  for (std::size_t k = 0; k < clauses.size(); ++k) {
    v.clauses.push_back(parse_clause(clauses[k], at_index(at_key(path, "clauses"), k)));
  }
  return v;
}

TripType parse_trip(const json& j, const std::string& path, CommuterId owner) {
  require_object(j, path, {"p_commit", "valuation"});
  TripType t;
  t.p_commit = as_probability(member(j, path, "p_commit"), at_key(path, "p_commit"));
  t.valuation = parse_valuation(member(j, path, "valuation"), at_key(path, "valuation"), owner);
  return t;
}

Commuter parse_commuter(const json& j, const std::string& path, std::size_t position) {
  require_object(j, path, {"id", "has_vehicle", "seat_capacity", "trip", "reported"});
  Commuter c;
  c.id = CommuterId{as_index(member(j, path, "id"), at_key(path, "id"))};
  if (c.id.index != position) {
    throw ScenarioError(at_key(path, "id"), "ids must be 0..N-1 in order");
  }
  c.has_vehicle = as_bool(member(j, path, "has_vehicle"), at_key(path, "has_vehicle"));
  c.seat_capacity = as_index(member(j, path, "seat_capacity"), at_key(path, "seat_capacity"));
  c.true_type = parse_trip(member(j, path, "trip"), at_key(path, "trip"), c.id);
  c.reported_type = c.true_type;
  if (j.contains("reported")) {
    const auto rpath = at_key(path, "reported");
    const auto& r = j.at("reported");
    require_object(r, rpath, {"p_commit", "valuation"});
    if (r.contains("p_commit")) {
      c.reported_type.p_commit = as_probability(r.at("p_commit"), at_key(rpath, "p_commit"));
    }
    if (r.contains("valuation")) {
      c.reported_type.valuation = parse_valuation(r.at("valuation"), at_key(rpath, "valuation"), c.id);
    }
  }
  return c;
}

json partners_json(const PartnerConstraint& partners) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AnyPartners>) {
          return "any";
        } else if constexpr (std::is_same_v<T, ExactPartners>) {
          json list = json::array();
          for (auto id : c.partners) list.push_back(id.index);
          return json{{"exact", list}};
        } else {
          return json{{"at_least", c.count}};
        }
      },
      partners);
}

json valuation_json(const ValuationSpec& v) {
  json clauses = json::array();
  for (const auto& c : v.clauses) {
    json gates = json::array();
    for (const auto& g : c.gates) {
      gates.push_back({{"subject", g.subject.index},
                       {"bound", g.bound},
                       {"direction", g.direction == GateDirection::AtLeast ? "at_least" : "below"}});
    }
    json terms = json::array();
    for (const auto& m : c.terms) {
      json factors = json::array();
      for (const auto& f : m.factors) {
        factors.push_back({{"subject", f.subject.index}, {"exponent", f.exponent}});
      }
      terms.push_back({{"coefficient", m.coefficient}, {"factors", factors}});
    }
    clauses.push_back({{"role", role_name(c.pattern.own_role)},
                       {"partners", partners_json(c.pattern.partners)},
                       {"gates", gates},
                       {"terms", terms},
                       {"excluded", c.excluded}});
  }
  return {{"default_value", v.default_value}, {"clauses", clauses}};
}

}  // namespace

Scenario parse_scenario(const json& document) {
  require_object(document, "", {"schema_version", "metadata", "commuters", "compatibility"});
  const auto& version = member(document, "", "schema_version");
  if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion) {
    throw ScenarioError("schema_version",
                        "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }

  Scenario s;
  if (document.contains("metadata")) {
    const auto& meta = document.at("metadata");
    if (!meta.is_object()) throw ScenarioError("metadata", "expected an object");
    for (const auto& [key, value] : meta.items()) {
      if (!value.is_string()) throw ScenarioError("metadata." + key, "expected a string");
      s.metadata[key] = value.get<std::string>();
    }
  }

  const auto& commuters = array_member(document, "", "commuters");
  for (std::size_t i = 0; i < commuters.size(); ++i) {
    s.commuters.push_back(parse_commuter(commuters[i], at_index("commuters", i), i));
  }

  const auto& rows = array_member(document, "", "compatibility");
  std::vector<std::vector<bool>> matrix;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto rpath = at_index("compatibility", i);
    if (!rows[i].is_array()) throw ScenarioError(rpath, "expected an array");
    std::vector<bool> row;
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      row.push_back(as_bool(rows[i][k], at_index(rpath, k)));
    }
    matrix.push_back(std::move(row));
  }
  s.compatibility = Compatibility(std::move(matrix));

  const auto violations = validate_scenario(s);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::string field = "scenario";
    if (v.kind == ViolationKind::CompatibilityShape ||
        v.kind == ViolationKind::CompatibilityDiagonal ||
        v.kind == ViolationKind::CompatibilityAsymmetric) {
      field = "compatibility";
    } else if (!v.commuters.empty()) {
      field = at_index("commuters", v.commuters.front().index);
    }
    throw ScenarioError(field, v.message);
  }
  return s;
}

Scenario parse_scenario(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<document>", e.what());
  }
  return parse_scenario(document);
}

json to_json(const Scenario& s) {
  json commuters = json::array();
  for (const auto& c : s.commuters) {
    json entry{{"id", c.id.index},
               {"has_vehicle", c.has_vehicle},
               {"seat_capacity", c.seat_capacity},
               {"trip", {{"p_commit", c.true_type.p_commit},
                         {"valuation", valuation_json(c.true_type.valuation)}}}};
    if (!(c.reported_type == c.true_type)) {
      json reported{{"p_commit", c.reported_type.p_commit}};
      if (!(c.reported_type.valuation == c.true_type.valuation)) {
        reported["valuation"] = valuation_json(c.reported_type.valuation);
      }
      entry["reported"] = reported;
    }
    commuters.push_back(std::move(entry));
  }
  json metadata = json::object();
  for (const auto& [k, v] : s.metadata) metadata[k] = v;
  json compatibility = json::array();
  for (const auto& row : s.compatibility.rows()) {
    json r = json::array();
    for (bool b : row) r.push_back(b);
    compatibility.push_back(std::move(r));
  }
  return {{"schema_version", kSchemaVersion},
          {"metadata", metadata},
          {"commuters", commuters},
          {"compatibility", compatibility}};
}

std::string serialize(const Scenario& scenario) {
  return to_json(scenario).dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(errno ? errno : ENOENT, std::generic_category(),
                            "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(std::string_view(buffer.str()));
}

}  // namespace rideshare::io
