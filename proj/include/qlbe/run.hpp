// Copyright 2026 The qlbe-sim Authors
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

#ifndef QLBE_RUN_HPP
#define QLBE_RUN_HPP

#include <map>
#include <string>
#include <vector>

#include "qlbe/config.hpp"

namespace qlbe {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RunSummary {
    std::string scenario;
    std::string config_digest;
    std::optional<std::uint64_t> seed;
    std::map<std::string, double> scalars;
    std::vector<CheckResult> checks;
    std::vector<std::string> outputs; // file names, in write order
    double wall_time_s = 0.0;

    bool all_passed() const;
};

/// Executes the configured scenario: writes the CSV artifacts into the output
/// directory, then summary.json last (atomicity marker: its presence means the
/// run completed). Deterministic for fixed (config, seed). Throws ConfigError /
/// DomainError / NumericError with scenario context on failure.
RunSummary run(const RunConfig& config);

} // namespace qlbe

#endif
