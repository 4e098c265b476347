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

#include <iosfwd>
#include <string>
#include <vector>

#include "rideshare/simulate.hpp"

namespace rideshare::cli {

// Exit codes are a stable scripting contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitIoError = 3;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker threads from RIDESHARE_THREADS; unset or 0 means one per core.
unsigned thread_count_from_env();

/// Trial rows followed by per-commuter mean and standard-error rows.
void write_trials_csv(std::ostream& out, const SimulationResult& result);

}  // namespace rideshare::cli
