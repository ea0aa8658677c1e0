// Copyright 2026 The qecopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QECOPT_ERRORS_HPP
#define QECOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qecopt {

// Bad user input: malformed arguments, out-of-domain parameters, shape
// mismatches. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

// A file did not match its JSON schema. `field` names the offending entry.
class SchemaError : public ConfigError {
 public:
    SchemaError(const std::string& field, const std::string& what)
        : ConfigError("schema error at '" + field + "': " + what), field_(field) {}

    const std::string& field() const { return field_; }

 private:
    std::string field_;
};

// The numerics broke down (degenerate N(Pi), rank-deficient retraction, ...).
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

}  // namespace qecopt

#endif  // QECOPT_ERRORS_HPP
