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

#include <compare>
#include <cstddef>
#include <string_view>
#include <vector>

namespace rideshare {

/// Dense index of a commuter within a scenario (0..N-1).
struct CommuterId {
  std::size_t index = 0;

  friend auto operator<=>(const CommuterId&, const CommuterId&) = default;
};

enum class Role { None, Drive, Ride };

std::string_view role_name(Role role);

/// One commuter's slot in an allocation. Partners are kept sorted by id.
struct Assignment {
  Role role = Role::None;
  std::vector<CommuterId> partners;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Per-commuter (role, partner set) assignment.
///
/// Every feasible allocation is determined by its rider map: which driver,
/// if any, each commuter rides with. `encoding()` exposes that map as
/// 0 (not riding) or driver index + 1, and enumeration order is
/// lexicographic over it.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<Assignment> assignments)
      : assignments_(std::move(assignments)) {}

  static Allocation all_none(std::size_t n);

  /// Builds the allocation from a rider map encoding (see class comment).
  /// Does not check feasibility.
  static Allocation from_encoding(const std::vector<std::size_t>& encoding);

  std::size_t size() const { return assignments_.size(); }
  const Assignment& operator[](CommuterId id) const {
    return assignments_[id.index];
  }
  const Assignment& at(CommuterId id) const { return assignments_.at(id.index); }
  const std::vector<Assignment>& assignments() const { return assignments_; }

  bool is_all_none() const;
  std::vector<std::size_t> encoding() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Assignment> assignments_;
};

}  // namespace rideshare
