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

#include "rideshare/corpus.hpp"

#include <stdexcept>

namespace rideshare::corpus {

namespace {

CommuterId id(std::size_t i) { return CommuterId{i}; }

Monomial term(double coefficient, std::initializer_list<std::size_t> subjects) {
  Monomial m{coefficient, {}};
  for (auto s : subjects) m.factors.push_back({id(s), 1});
  return m;
}

Clause drive(std::vector<std::size_t> riders, std::vector<Monomial> terms) {
  ExactPartners exact;
  for (auto r : riders) exact.partners.push_back(id(r));
  return Clause{{Role::Drive, exact}, {}, std::move(terms), false};
}

Clause drive_any(std::vector<Monomial> terms) {
  return Clause{{Role::Drive, PartnerCountAtLeast{1}}, {}, std::move(terms), false};
}

Clause ride(std::size_t driver, std::vector<Monomial> terms,
            std::vector<ThresholdGate> gates = {}) {
  return Clause{{Role::Ride, ExactPartners{{id(driver)}}}, std::move(gates),
                std::move(terms), false};
}

Clause ride_any(std::vector<Monomial> terms) {
  return Clause{{Role::Ride, AnyPartners{}}, {}, std::move(terms), false};
}

Clause never(Role role) { return Clause{{role, AnyPartners{}}, {}, {}, true}; }

Clause alone(std::vector<Monomial> terms = {}) {
  return Clause{{Role::None, AnyPartners{}}, {}, std::move(terms), false};
}

ValuationSpec spec(std::size_t owner, std::vector<Clause> clauses) {
  return ValuationSpec{id(owner), std::move(clauses), 0.0};
}

Commuter driver(std::size_t i, std::size_t seats, double p, ValuationSpec v) {
  return Commuter::truthful(id(i), true, seats, TripType{std::move(v), p});
}

Commuter rider(std::size_t i, double p, ValuationSpec v) {
  return Commuter::truthful(id(i), false, 0, TripType{std::move(v), p});
}

Scenario make(std::vector<Commuter> commuters, std::string description) {
  Scenario s;
  s.compatibility = Compatibility(commuters.size());
  s.commuters = std::move(commuters);
  s.metadata["description"] = std::move(description);
  return s;
}

Scenario pair_with(ValuationSpec rider_spec, double alpha, double p_driver,
                   double p_rider, std::string description) {
  return make({driver(0, 1, p_driver, driver_cost(id(0), id(1), alpha)),
               rider(1, p_rider, std::move(rider_spec))},
              std::move(description));
}

}  // namespace

ValuationSpec driver_cost(CommuterId owner, CommuterId partner, double alpha) {
  return spec(owner.index, {drive({partner.index}, {term(alpha, {owner.index, partner.index})}),
                            never(Role::Ride), alone()});
}

ValuationSpec rider_benefit(CommuterId owner, CommuterId driver, double beta) {
  return spec(owner.index, {ride(driver.index, {term(beta, {driver.index, owner.index})}),
                            never(Role::Drive), alone()});
}

ValuationSpec rider_benefit_with_threshold(CommuterId owner, CommuterId driver,
                                           double beta, double min_driver_p) {
  return spec(owner.index,
              {ride(driver.index, {term(beta, {driver.index, owner.index})},
                    {ThresholdGate{driver, min_driver_p, GateDirection::AtLeast}}),
               never(Role::Drive), alone()});
}

ValuationSpec rider_benefit_quadratic(CommuterId owner, CommuterId driver,
                                      double beta) {
  Monomial m{beta, {{driver, 2}, {owner, 1}}};
  return spec(owner.index, {ride(driver.index, {m}), never(Role::Drive), alone()});
}

Scenario linear_pair(double alpha, double beta, double p_driver, double p_rider) {
  return pair_with(rider_benefit(id(1), id(0), beta), alpha, p_driver, p_rider,
                   "driver 0 with one seat; rider 1 values the ride linearly");
}

Scenario threshold_pair(double alpha, double beta, double min_driver_p,
                        double p_driver, double p_rider) {
  return pair_with(rider_benefit_with_threshold(id(1), id(0), beta, min_driver_p),
                   alpha, p_driver, p_rider,
                   "rider 1 only values the ride if the driver is reliable enough");
}

Scenario quadratic_pair(double alpha, double beta, double p_driver,
                        double p_rider) {
  return pair_with(rider_benefit_quadratic(id(1), id(0), beta), alpha, p_driver,
                   p_rider, "rider 1 values driver reliability quadratically");
}

std::vector<Entry> all() {
  std::vector<Entry> out;

  out.push_back({"single",
                 make({rider(0, 1.0, spec(0, {alone()}))}, "one commuter, nothing to share"),
                 true});
  out.push_back({"linear-pair", linear_pair(-2.0, 5.0, 0.5, 0.8), true});
  out.push_back({"linear-pair-inefficient", linear_pair(-5.0, 2.0, 0.7, 0.6), true});
  out.push_back({"linear-pair-reliable", linear_pair(-1.0, 3.0, 0.9, 0.3), true});

  out.push_back(
      {"two-drivers-one-rider",
       make({driver(0, 1, 0.6, spec(0, {drive({2}, {term(-1.0, {0, 2})}), never(Role::Ride), alone()})),
             driver(1, 1, 0.9, spec(1, {drive({2}, {term(-2.0, {1, 2})}), never(Role::Ride), alone()})),
             rider(2, 0.7, spec(2, {ride(0, {term(4.0, {0, 2})}), ride(1, {term(5.0, {1, 2})}), alone()}))},
            "rider 2 chooses between two single-seat drivers"),
       true});

  out.push_back(
      {"driver-two-seats",
       make({driver(0, 2, 0.8,
                    spec(0, {drive({1}, {term(-1.0, {0, 1})}), drive({2}, {term(-1.0, {0, 2})}),
                             drive({1, 2}, {term(-1.0, {0, 1}), term(-1.0, {0, 2}), term(-0.5, {0, 1, 2})}),
                             never(Role::Ride), alone()})),
             rider(1, 0.5, spec(1, {ride(0, {term(3.0, {0, 1})}), alone()})),
             rider(2, 0.6, spec(2, {ride(0, {term(2.0, {0, 2}), term(0.5, {0, 1, 2})}), alone()}))},
            "two riders share a two-seat car; rider 2 enjoys company"),
       true});

  out.push_back(
      {"constant-values",
       make({driver(0, 1, 0.4, spec(0, {drive_any({term(-1.0, {})}), never(Role::Ride), alone()})),
             rider(1, 0.7, spec(1, {ride_any({term(3.0, {})}), alone()})),
             rider(2, 0.9, spec(2, {ride_any({term(2.0, {})}), alone()}))},
            "values independent of every commitment probability"),
       true});

  {
    auto s = make(
        {driver(0, 2, 0.7,
                spec(0, {drive({2}, {term(-1.0, {0, 2})}), drive({3}, {term(-1.0, {0, 3})}),
                         drive({2, 3}, {term(-1.0, {0, 2}), term(-1.0, {0, 3})}),
                         never(Role::Ride), alone()})),
         driver(1, 1, 0.6, spec(1, {drive({2}, {term(-0.5, {1, 2})}), never(Role::Ride), alone()})),
         rider(2, 0.9, spec(2, {ride(0, {term(2.0, {0, 2})}), ride(1, {term(2.5, {1, 2})}), alone()})),
         rider(3, 0.5, spec(3, {ride(0, {term(3.0, {0, 3})}), alone()}))},
        "two drivers, two riders; rider 3 cannot travel with driver 1");
    s.compatibility.set(id(1), id(3), false);
    out.push_back({"four-commuters-mixed", std::move(s), true});
  }

  out.push_back(
      {"owner-only-linear",
       make({driver(0, 1, 0.6, spec(0, {drive({1}, {term(-1.5, {0})}), never(Role::Ride), alone()})),
             rider(1, 0.7, spec(1, {ride(0, {term(2.0, {1}), term(1.0, {})}), alone({term(0.5, {})})}))},
            "each valuation depends on its owner's probability only"),
       true});

  {
    auto s = make(
        {driver(0, 1, 0.6, spec(0, {drive({1}, {term(-1.0, {0, 1})}), never(Role::Ride), alone()})),
         rider(1, 0.8, spec(1, {ride(0, {term(3.0, {0, 1}), term(0.5, {2})}), alone({term(0.5, {2})})})),
         rider(2, 0.5, spec(2, {alone({term(0.2, {2})})}))},
        "rider 1 also cares whether bystander 2 travels");
    s.compatibility.set(id(0), id(2), false);
    s.compatibility.set(id(1), id(2), false);
    out.push_back({"externality-bystander", std::move(s), true});
  }

  out.push_back(
      {"car-owner-rides",
       make({driver(0, 1, 0.7, spec(0, {drive({1}, {term(-1.0, {0, 1})}), ride(1, {term(2.0, {0, 1})}), alone()})),
             driver(1, 1, 0.9, spec(1, {drive({0}, {term(-0.5, {0, 1})}), ride(0, {term(1.5, {0, 1})}), alone()}))},
            "both own cars; either may ride with the other"),
       true});

  out.push_back(
      {"alone-opt-out",
       make({driver(0, 2, 0.9,
                    spec(0, {drive({1}, {term(-0.6, {0, 1})}), drive({2}, {term(-0.6, {0, 2})}),
                             drive({1, 2}, {term(-0.6, {0, 1}), term(-0.6, {0, 2})}),
                             never(Role::Ride), alone()})),
             rider(1, 0.6, spec(1, {ride(0, {term(2.5, {0, 1}), term(0.2, {})}), alone({term(1.0, {})})})),
             rider(2, 0.8, spec(2, {ride(0, {term(1.5, {0, 2}), term(0.2, {})}), alone({term(1.0, {})})}))},
            "riders have a public-transport fallback worth 1"),
       true});

  out.push_back(
      {"three-seat-van",
       make({driver(0, 3, 0.5, spec(0, {drive_any({term(-0.3, {0})}), never(Role::Ride), alone()})),
             rider(1, 0.9, spec(1, {ride(0, {term(1.2, {0, 1})}), alone()})),
             rider(2, 0.6, spec(2, {ride(0, {term(0.4, {0, 2})}), alone()})),
             rider(3, 0.3, spec(3, {ride(0, {term(0.9, {0, 3})}), alone()}))},
            "one van, three riders, flat driving cost"),
       true});

  {
    auto s = make(
        {driver(0, 2, 0.8, spec(0, {drive_any({term(-0.4, {0})}), ride(1, {term(0.6, {0, 1})}), alone()})),
         driver(1, 2, 0.7, spec(1, {drive_any({term(-0.5, {1})}), ride(0, {term(0.5, {0, 1})}), alone()})),
         driver(2, 1, 0.9, spec(2, {drive_any({term(-0.2, {2})}), never(Role::Ride), alone()})),
         rider(3, 0.6, spec(3, {ride(0, {term(1.0, {0, 3})}), ride(1, {term(1.1, {1, 3})}),
                                ride(2, {term(0.7, {2, 3})}), alone()})),
         rider(4, 0.9, spec(4, {ride(0, {term(0.8, {0, 4})}), ride(2, {term(1.3, {2, 4})}), alone()})),
         rider(5, 0.4, spec(5, {ride(1, {term(2.0, {1, 5})}), ride(2, {term(0.3, {2, 5})}), alone()}))},
        "six commuters, three cars");
    s.compatibility.set(id(0), id(5), false);
    s.compatibility.set(id(1), id(4), false);
    out.push_back({"six-commuters", std::move(s), true});
  }

  out.push_back({"threshold-rider", threshold_pair(-2.0, 5.0, 0.6, 0.5, 0.8), false});
  {
    auto s = threshold_pair(-2.0, 5.0, 0.6, 0.5, 0.8);
    s.commuters[0].reported_type.p_commit = 0.6;
    s.metadata["description"] = "driver 0 overstates reliability to meet the threshold";
    out.push_back({"threshold-overstated", std::move(s), false});
  }
  out.push_back({"threshold-reliable-driver", threshold_pair(-2.0, 5.0, 0.6, 0.7, 0.8), false});
  out.push_back({"quadratic-reliability", quadratic_pair(-2.0, 3.0, 0.5, 0.8), false});

  for (auto& e : out) e.scenario.metadata["name"] = e.name;
  return out;
}

Scenario by_name(const std::string& name) {
  for (auto& e : all()) {
    if (e.name == name) return std::move(e.scenario);
  }
  throw std::out_of_range("no bundled scenario named '" + name + "'");
}

}  // namespace rideshare::corpus
