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

#include "qecopt/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "qecopt/errors.hpp"
#include "qecopt/serialization.hpp"

namespace qecopt {

KrausMap::KrausMap(std::vector<Matrix> ops, std::string label)
    : dim_(0), ops_(std::move(ops)), label_(std::move(label)) {
    if (ops_.empty()) throw ConfigError("Kraus map needs at least one operator");
    dim_ = ops_.front().rows();
    for (std::size_t j = 0; j < ops_.size(); ++j) {
        const Matrix& op = ops_[j];
        if (op.rows() != dim_ || op.cols() != dim_) {
            throw ConfigError("Kraus operator " + std::to_string(j) + " is " +
                              std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                              ", expected " + std::to_string(dim_) + "x" + std::to_string(dim_));
        }
        if (!op.allFinite()) {
            throw ConfigError("Kraus operator " + std::to_string(j) + " has non-finite entries");
        }
    }
}

Matrix KrausMap::gram() const {
    Matrix g = Matrix::Zero(dim_, dim_);
    for (const auto& op : ops_) g.noalias() += op.adjoint() * op;
    return g;
}

KrausMap KrausMap::identity(Index n) {
    return KrausMap({Matrix::Identity(n, n)}, "identity");
}

namespace {

struct FamilyName {
    NoiseFamily family;
    std::string_view name;
};

constexpr FamilyName kFamilyNames[] = {
    {NoiseFamily::kBitflipIndependent, "bitflip_independent"},
    {NoiseFamily::kBitflipCorrelatedToy, "bitflip_correlated_toy"},
    {NoiseFamily::kBitflipFull, "bitflip_full"},
    {NoiseFamily::kAmpdampIndependent, "ampdamp_independent"},
    {NoiseFamily::kAmpdampFull, "ampdamp_full"},
    {NoiseFamily::kDepolarizingIndependent, "depolarizing_independent"},
    {NoiseFamily::kDepolarizingFull, "depolarizing_full"},
    {NoiseFamily::kIdentity, "identity"},
    {NoiseFamily::kFromFile, "from_file"},
};

Matrix ampdamp_e0(double p) {
    Matrix e = Matrix::Zero(2, 2);
    e(0, 0) = 1.0;
    e(1, 1) = std::sqrt(1.0 - p);
    return e;
}

Matrix ampdamp_e1(double p) {
    Matrix e = Matrix::Zero(2, 2);
    e(0, 1) = std::sqrt(p);
    return e;
}

// Operator acting as `op` on `site` (0-based) and identity elsewhere.
Matrix on_site(const Matrix& op, int site, int qubits) {
    std::vector<Matrix> factors(qubits, pauli::identity());
    factors[site] = op;
    return tensor(factors);
}

// All products of per-qubit alphabet letters (letter 0 is the identity-like
// term), ordered by weight, then by the sites carrying a non-identity letter,
// then by the letters themselves.
std::vector<Matrix> iid_products(const std::vector<Matrix>& alphabet, int qubits) {
    const int k = static_cast<int>(alphabet.size());
    std::size_t total = 1;
    for (int i = 0; i < qubits; ++i) total *= k;

    using Key = std::tuple<int, std::vector<int>, std::vector<int>>;
    std::vector<std::pair<Key, std::vector<int>>> words;
    words.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<int> letters(qubits);
        std::size_t rest = code;
        for (int i = qubits - 1; i >= 0; --i) {
            letters[i] = static_cast<int>(rest % k);
            rest /= k;
        }
        std::vector<int> sites;
        std::vector<int> kinds;
        for (int i = 0; i < qubits; ++i) {
            if (letters[i] != 0) {
                sites.push_back(i);
                kinds.push_back(letters[i]);
            }
        }
        const int weight = static_cast<int>(sites.size());
        words.push_back({Key{weight, sites, kinds}, letters});
    }
    std::sort(words.begin(), words.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<Matrix> out;
    out.reserve(total);
    for (const auto& [key, letters] : words) {
        std::vector<Matrix> factors;
        factors.reserve(qubits);
        for (int letter : letters) factors.push_back(alphabet[letter]);
        out.push_back(tensor(factors));
    }
    return out;
}

void require_probability(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

std::vector<Matrix> drop_zero(std::vector<Matrix> ops) {
    std::erase_if(ops, [](const Matrix& m) { return m.cwiseAbs().maxCoeff() == 0.0; });
    return ops;
}

std::string describe(const NoiseSpec& spec) {
    std::string s(to_string(spec.family));
    s += " qubits=" + std::to_string(spec.qubits) + " p=" + std::to_string(spec.p);
    if (spec.family == NoiseFamily::kBitflipCorrelatedToy) s += " q=" + std::to_string(spec.q);
    return s;
}

}  // namespace

NoiseFamily parse_noise_family(std::string_view name) {
    for (const auto& entry : kFamilyNames) {
        if (entry.name == name) return entry.family;
    }
    throw ConfigError("unknown noise family '" + std::string(name) + "'");
}

std::string_view to_string(NoiseFamily family) {
    for (const auto& entry : kFamilyNames) {
        if (entry.family == family) return entry.name;
    }
    return "unknown";
}

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }

Matrix x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Matrix y() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = Complex(0.0, -1.0);
    m(1, 0) = Complex(0.0, 1.0);
    return m;
}

Matrix z() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}
}  // namespace pauli

Matrix tensor(const std::vector<Matrix>& factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) out = linalg::kron(out, f);
    return out;
}

KrausMap build_noise(const NoiseSpec& spec) {
    if (spec.family == NoiseFamily::kFromFile) {
        if (spec.path.empty()) throw ConfigError("from_file noise needs a path");
        return load_kraus(spec.path);
    }
    require_probability(spec.p, "p");
    require_probability(spec.q, "q");
    if (spec.qubits < 1 || spec.qubits > 10) {
        throw ConfigError("qubits must lie in [1, 10], got " + std::to_string(spec.qubits));
    }
    const int nq = spec.qubits;
    const double p = spec.p;
    std::vector<Matrix> ops;

    switch (spec.family) {
        case NoiseFamily::kIdentity:
            ops.push_back(tensor(std::vector<Matrix>(nq, pauli::identity())));
            break;
        case NoiseFamily::kBitflipIndependent:
        case NoiseFamily::kBitflipCorrelatedToy: {
            const bool toy = spec.family == NoiseFamily::kBitflipCorrelatedToy;
            if (toy && nq != 3) throw ConfigError("bitflip_correlated_toy is defined on 3 qubits");
            const double q = toy ? spec.q : 0.0;
            ops.push_back(std::sqrt(1.0 - p) * tensor(std::vector<Matrix>(nq, pauli::identity())));
            const double single = std::sqrt(p * (1.0 - q) / nq);
            for (int k = 0; k < nq; ++k) ops.push_back(single * on_site(pauli::x(), k, nq));
            if (toy) {
                ops.push_back(std::sqrt(p * q) *
                              tensor({pauli::identity(), pauli::x(), pauli::x()}));
            }
            break;
        }
        case NoiseFamily::kBitflipFull:
            ops = iid_products({std::sqrt(1.0 - p) * pauli::identity(), std::sqrt(p) * pauli::x()},
                               nq);
            break;
        case NoiseFamily::kAmpdampIndependent: {
            // Identity term plus E0 and E1 on each site, all equally weighted.
            const double w = std::sqrt(1.0 / (nq + 1));
            ops.push_back(w * tensor(std::vector<Matrix>(nq, pauli::identity())));
            for (int k = 0; k < nq; ++k) ops.push_back(w * on_site(ampdamp_e0(p), k, nq));
            for (int k = 0; k < nq; ++k) ops.push_back(w * on_site(ampdamp_e1(p), k, nq));
            break;
        }
        case NoiseFamily::kAmpdampFull:
            ops = iid_products({ampdamp_e0(p), ampdamp_e1(p)}, nq);
            break;
        case NoiseFamily::kDepolarizingIndependent: {
            ops.push_back(std::sqrt(1.0 - p) * tensor(std::vector<Matrix>(nq, pauli::identity())));
            const double w = std::sqrt(p / (3.0 * nq));
            for (const Matrix& sigma : {pauli::x(), pauli::y(), pauli::z()}) {
                for (int k = 0; k < nq; ++k) ops.push_back(w * on_site(sigma, k, nq));
            }
            break;
        }
        case NoiseFamily::kDepolarizingFull: {
            const double w = std::sqrt(p / 3.0);
            ops = iid_products({std::sqrt(1.0 - p) * pauli::identity(), w * pauli::x(),
                                w * pauli::y(), w * pauli::z()},
                               nq);
            break;
        }
        case NoiseFamily::kFromFile:
            break;
    }

    KrausMap out(drop_zero(std::move(ops)), describe(spec));
    const double dev = validate(out).tp_deviation;
    if (dev > kTpTol) {
        throw NumericalError("noise model " + out.label() +
                             " is not trace preserving: deviation " + std::to_string(dev));
    }
    return out;
}

KrausMap single_qubit_reference(NoiseFamily family, double p) {
    NoiseSpec spec;
    spec.qubits = 1;
    spec.p = p;
    switch (family) {
        case NoiseFamily::kBitflipIndependent:
        case NoiseFamily::kBitflipCorrelatedToy:
        case NoiseFamily::kBitflipFull:
            spec.family = NoiseFamily::kBitflipFull;
            break;
        case NoiseFamily::kAmpdampIndependent:
        case NoiseFamily::kAmpdampFull:
            spec.family = NoiseFamily::kAmpdampFull;
            break;
        case NoiseFamily::kDepolarizingIndependent:
        case NoiseFamily::kDepolarizingFull:
            spec.family = NoiseFamily::kDepolarizingFull;
            break;
        case NoiseFamily::kIdentity:
            spec.family = NoiseFamily::kIdentity;
            break;
        case NoiseFamily::kFromFile:
            throw ConfigError("no single-qubit reference for file-loaded noise");
    }
    return build_noise(spec);
}

Matrix apply(const KrausMap& channel, const Matrix& rho) {
    if (rho.rows() != channel.dim() || rho.cols() != channel.dim()) {
        throw ConfigError("apply: state is " + std::to_string(rho.rows()) + "x" +
                          std::to_string(rho.cols()) + ", channel dimension is " +
                          std::to_string(channel.dim()));
    }
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& op : channel.ops()) out.noalias() += op * rho * op.adjoint();
    return out;
}

KrausMap compose(const KrausMap& second, const KrausMap& first) {
    if (second.dim() != first.dim()) throw ConfigError("compose: dimension mismatch");
    std::vector<Matrix> ops;
    ops.reserve(second.size() * first.size());
    for (const auto& a : first.ops()) {
        for (const auto& b : second.ops()) ops.push_back(b * a);
    }
    return KrausMap(std::move(ops), second.label() + " o " + first.label());
}

TpReport validate(const KrausMap& channel) {
    TpReport report;
    report.tp_deviation = (channel.gram() - Matrix::Identity(channel.dim(), channel.dim())).norm();
    return report;
}

double max_gram_eigenvalue(const KrausMap& channel) {
    return linalg::eigh(channel.gram()).eigenvalues(0);
}

}  // namespace qecopt
