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

#include <string>
#include <vector>

#include "rideshare/model.hpp"

namespace rideshare::corpus {

// Valuation builders for a driver `owner` sharing with rider `partner`.

/// alpha * p_owner * p_partner when driving `partner`, Excluded when riding,
/// 0 when travelling alone.
ValuationSpec driver_cost(CommuterId owner, CommuterId partner, double alpha);

/// beta * p_driver * p_owner when riding with `driver`, Excluded when
/// driving, 0 alone.
ValuationSpec rider_benefit(CommuterId owner, CommuterId driver, double beta);

/// As rider_benefit, but the ride is only worth anything if the driver's
/// probability of commitment is at least `min_driver_p`; otherwise 0.
ValuationSpec rider_benefit_with_threshold(CommuterId owner, CommuterId driver,
                                           double beta, double min_driver_p);

/// beta * p_driver^2 * p_owner when riding with `driver`.
ValuationSpec rider_benefit_quadratic(CommuterId owner, CommuterId driver,
                                      double beta);

/// Two commuters: 0 drives (one seat) with driver_cost(alpha), 1 rides with
/// rider_benefit(beta).
Scenario linear_pair(double alpha, double beta, double p_driver, double p_rider);

/// As linear_pair, the rider requiring p_driver >= min_driver_p.
Scenario threshold_pair(double alpha, double beta, double min_driver_p,
                        double p_driver, double p_rider);

/// As linear_pair with the quadratic rider valuation.
Scenario quadratic_pair(double alpha, double beta, double p_driver,
                        double p_rider);

struct Entry {
  std::string name;
  Scenario scenario;
  /// Every valuation passes the structural linearity check.
  bool all_linear = false;
};

/// The bundled scenarios, in a fixed order. Names are unique.
std::vector<Entry> all();

/// Looks up a bundled scenario by name; throws std::out_of_range.
Scenario by_name(const std::string& name);

}  // namespace rideshare::corpus
