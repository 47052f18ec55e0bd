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

#ifndef QLBE_ERRORS_HPP
#define QLBE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qlbe {

/// Input outside the mathematical domain of an operation (e.g. S(q,E) at q=0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance; message carries diagnostics.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A spec struct violates one of its invariants; message names the field.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Config file rejected; carries the 1-based line number of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line_number, const std::string& message)
        : std::runtime_error("config line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}
    int line;
};

} // namespace qlbe

#endif
