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

#ifndef QECOPT_SERIALIZATION_HPP
#define QECOPT_SERIALIZATION_HPP

#include <string>

#include "json.hpp"

#include "qecopt/linalg.hpp"

// JSON file formats.
//
// Kraus map: {"n": int, "label": string, "kraus": [matrix, ...]}
// Code:      {"n": int, "d": int, "columns": [column, ...]}
// A matrix is a list of n rows of n entries; a column is a list of n
// entries; every entry is [re, im] as IEEE-754 doubles. NaN/Inf are rejected.
namespace qecopt {

class KrausMap;
class CodeFrame;

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, Index rows, Index cols, const std::string& field);

nlohmann::json kraus_to_json(const KrausMap& channel);
/// Warns on stderr when the map deviates from trace preservation by more
/// than kLoadedTpWarn; throws SchemaError on malformed input.
KrausMap kraus_from_json(const nlohmann::json& j);

nlohmann::json code_to_json(const CodeFrame& code);
CodeFrame code_from_json(const nlohmann::json& j);

KrausMap load_kraus(const std::string& path);
void save_kraus(const KrausMap& channel, const std::string& path);

CodeFrame load_code(const std::string& path);
void save_code(const CodeFrame& code, const std::string& path);

/// Parses a file as JSON; SchemaError with the path on I/O or syntax errors.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace qecopt

#endif  // QECOPT_SERIALIZATION_HPP
