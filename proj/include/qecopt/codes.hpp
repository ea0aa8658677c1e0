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

#ifndef QECOPT_CODES_HPP
#define QECOPT_CODES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qecopt/qec.hpp"

namespace qecopt {

struct NamedCode {
    std::string name;
    CodeFrame frame;
    std::string source;
};

/// Names accepted by known_code().
std::vector<std::string> known_code_names();

/// Literature codes: repetition3, leung4, bennett5, laflamme5.
NamedCode known_code(std::string_view name);

/// Haar-random n x d frame, deterministic per seed.
CodeFrame random_code(Index n, Index d, std::uint64_t seed);

/// Binary ket label of a basis index, qubit 1 leftmost: ket_label(3, 4) == "|0011>".
std::string ket_label(Index index, int qubits);

struct SparsityEntry {
    std::string label;
    Index index = 0;
    double magnitude = 0.0;
};

/// Per codeword, the basis states whose amplitude magnitude exceeds
/// `threshold`, sorted by decreasing magnitude (ties by basis index).
std::vector<std::vector<SparsityEntry>> sparsity_report(const CodeFrame& code, double threshold);

}  // namespace qecopt

#endif  // QECOPT_CODES_HPP
