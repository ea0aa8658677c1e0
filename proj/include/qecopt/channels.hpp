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

#ifndef QECOPT_CHANNELS_HPP
#define QECOPT_CHANNELS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "qecopt/linalg.hpp"

namespace qecopt {

/// Trace-preservation tolerance for constructed noise models.
inline constexpr double kTpTol = 1e-8;
/// Deviation above which a file-loaded map triggers a warning.
inline constexpr double kLoadedTpWarn = 1e-3;

/// A completely positive map in operator-sum form, rho -> sum_j N_j rho N_j^dagger.
///
/// Immutable after construction. All operators are square, of equal size and
/// finite; trace preservation is not enforced here (recoveries may be
/// trace-non-increasing), see validate().
class KrausMap {
 public:
    KrausMap(std::vector<Matrix> ops, std::string label = {});

    Index dim() const { return dim_; }
    std::size_t size() const { return ops_.size(); }
    const std::vector<Matrix>& ops() const { return ops_; }
    const Matrix& op(std::size_t j) const { return ops_[j]; }
    const std::string& label() const { return label_; }

    /// sum_j N_j^dagger N_j.
    Matrix gram() const;

    static KrausMap identity(Index n);

 private:
    Index dim_;
    std::vector<Matrix> ops_;
    std::string label_;
};

enum class NoiseFamily {
    kBitflipIndependent,
    kBitflipCorrelatedToy,
    kBitflipFull,
    kAmpdampIndependent,
    kAmpdampFull,
    kDepolarizingIndependent,
    kDepolarizingFull,
    kIdentity,
    kFromFile,
};

NoiseFamily parse_noise_family(std::string_view name);
std::string_view to_string(NoiseFamily family);

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::kIdentity;
    int qubits = 1;
    double p = 0.0;
    double q = 0.0;
    std::string path;  // kFromFile only
};

/// Builds the Kraus operators of a noise family. Qubit 1 is the leftmost
/// tensor factor; operators with zero coefficient are dropped. Throws
/// ConfigError for invalid parameters and NumericalError if the result is not
/// trace preserving within kTpTol.
KrausMap build_noise(const NoiseSpec& spec);

/// The same physical noise acting on one bare qubit, used as the
/// "no error correction" baseline.
KrausMap single_qubit_reference(NoiseFamily family, double p);

Matrix apply(const KrausMap& channel, const Matrix& rho);

/// Kraus operators of `second` after `first`: {B_k A_j}, ordered with j outer.
KrausMap compose(const KrausMap& second, const KrausMap& first);

struct TpReport {
    double tp_deviation = 0.0;  // ||sum N^dagger N - 1||_F
    bool cp_ok = true;          // always true for operator-sum maps
};

TpReport validate(const KrausMap& channel);

/// Largest eigenvalue of sum N^dagger N; <= 1 for trace-non-increasing maps.
double max_gram_eigenvalue(const KrausMap& channel);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// Tensor product of single-qubit factors; factors[0] is qubit 1.
Matrix tensor(const std::vector<Matrix>& factors);

}  // namespace qecopt

#endif  // QECOPT_CHANNELS_HPP
