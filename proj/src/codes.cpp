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

#include "qecopt/codes.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qecopt/errors.hpp"
#include "qecopt/stiefel.hpp"

namespace qecopt {

namespace {

struct Term {
    int sign;
    std::string_view ket;
};

int qubit_count(Index n) {
    int q = 0;
    while ((Index{1} << q) < n) ++q;
    return q;
}

Index ket_index(std::string_view ket) {
    Index idx = 0;
    for (char c : ket) idx = 2 * idx + (c == '1' ? 1 : 0);
    return idx;
}

Matrix frame_from_terms(int qubits, double scale, const std::vector<std::vector<Term>>& words) {
    Matrix u = Matrix::Zero(Index{1} << qubits, static_cast<Index>(words.size()));
    for (std::size_t col = 0; col < words.size(); ++col) {
        for (const Term& t : words[col]) u(ket_index(t.ket), col) += scale * t.sign;
    }
    return u;
}

// Bennett et al. five-qubit code, 16 terms per codeword, amplitude 1/4.
const std::vector<std::vector<Term>> kBennett = {
    {{+1, "00000"}, {-1, "00011"}, {+1, "00101"}, {-1, "00110"},
     {+1, "01001"}, {+1, "01010"}, {-1, "01100"}, {-1, "01111"},
     {-1, "10001"}, {+1, "10010"}, {+1, "10100"}, {-1, "10111"},
     {-1, "11000"}, {-1, "11011"}, {-1, "11101"}, {-1, "11110"}},
    {{-1, "00001"}, {-1, "00010"}, {-1, "00100"}, {-1, "00111"},
     {-1, "01000"}, {+1, "01011"}, {+1, "01101"}, {-1, "01110"},
     {-1, "10000"}, {-1, "10011"}, {+1, "10101"}, {+1, "10110"},
     {-1, "11001"}, {+1, "11010"}, {-1, "11100"}, {+1, "11111"}},
};

// Laflamme et al. five-qubit code, 8 terms per codeword, amplitude 1/(2 sqrt 2).
// The printed listing drops the operator before |01111>, |11100> and |10110>.
// Only "-" on all three makes the code pass the Knill-Laflamme test.
const std::vector<std::vector<Term>> kLaflamme = {
    {{+1, "00000"}, {-1, "00110"}, {-1, "01001"}, {-1, "01111"},
     {+1, "10011"}, {-1, "10101"}, {-1, "11010"}, {-1, "11100"}},
    {{+1, "00011"}, {+1, "00101"}, {+1, "01010"}, {-1, "01100"},
     {-1, "10000"}, {-1, "10110"}, {-1, "11001"}, {+1, "11111"}},
};

}  // namespace

std::vector<std::string> known_code_names() {
    return {"repetition3", "leung4", "bennett5", "laflamme5"};
}

NamedCode known_code(std::string_view name) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (name == "repetition3") {
        return {"repetition3", CodeFrame(frame_from_terms(3, 1.0, {{{1, "000"}}, {{1, "111"}}})),
                "three-qubit bit-flip repetition code {|000>, |111>}"};
    }
    if (name == "leung4") {
        return {"leung4",
                CodeFrame(frame_from_terms(4, inv_sqrt2,
                                           {{{1, "0000"}, {1, "1111"}}, {{1, "0011"}, {1, "1100"}}})),
                "Leung et al. approximate four-qubit amplitude-damping code"};
    }
    if (name == "bennett5") {
        return {"bennett5", CodeFrame(frame_from_terms(5, 0.25, kBennett)),
                "Bennett et al. perfect five-qubit code"};
    }
    if (name == "laflamme5") {
        return {"laflamme5", CodeFrame(frame_from_terms(5, 0.5 * inv_sqrt2, kLaflamme)),
                "Laflamme et al. perfect five-qubit code"};
    }
    throw ConfigError("unknown code '" + std::string(name) + "'");
}

CodeFrame random_code(Index n, Index d, std::uint64_t seed) {
    if (d < 1 || d > n) throw ConfigError("random_code needs 1 <= d <= n");
    return CodeFrame(stiefel::haar_isometry(n, d, seed));
}

std::string ket_label(Index index, int qubits) {
    std::string s = "|";
    for (int b = qubits - 1; b >= 0; --b) s += ((index >> b) & 1) ? '1' : '0';
    return s + ">";
}

std::vector<std::vector<SparsityEntry>> sparsity_report(const CodeFrame& code, double threshold) {
    if (!(threshold >= 0.0)) throw ConfigError("sparsity threshold must be >= 0");
    const int qubits = qubit_count(code.n());
    std::vector<std::vector<SparsityEntry>> out(code.d());
    for (Index j = 0; j < code.d(); ++j) {
        auto& col = out[j];
        for (Index i = 0; i < code.n(); ++i) {
            const double mag = std::abs(code.u()(i, j));
            if (mag > threshold) {
                col.push_back({ket_label(i, qubits), i, mag});
            }
        }
        std::stable_sort(col.begin(), col.end(), [](const SparsityEntry& a, const SparsityEntry& b) {
            return a.magnitude > b.magnitude;
        });
    }
    return out;
}

}  // namespace qecopt
