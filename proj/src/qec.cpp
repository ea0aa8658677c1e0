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

#include "qecopt/qec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qecopt/errors.hpp"
#include "qecopt/stiefel.hpp"

namespace qecopt {

namespace {

void require_pairing(const KrausMap& noise, Index n) {
    if (noise.dim() != n) {
        throw ConfigError("noise acts on dimension " + std::to_string(noise.dim()) +
                          " but the code lives in dimension " + std::to_string(n));
    }
}

}  // namespace

CodeFrame::CodeFrame(Matrix u, double tol) : u_(std::move(u)) {
    if (u_.cols() < 1 || u_.rows() < u_.cols()) {
        throw ConfigError("code frame must be n x d with 1 <= d <= n, got " +
                          std::to_string(u_.rows()) + "x" + std::to_string(u_.cols()));
    }
    if (!u_.allFinite()) throw ConfigError("code frame has non-finite entries");
    const double dev = linalg::isometry_deviation(u_);
    if (dev > tol) {
        throw ConfigError("code frame is not an isometry: ||U^dagger U - 1|| = " +
                          std::to_string(dev));
    }
}

RecoveryStack::RecoveryStack(Matrix stack, Index n, double tol) : stack_(std::move(stack)), n_(n) {
    if (n_ < 1 || stack_.cols() != n_ || stack_.rows() % n_ != 0 || stack_.rows() == 0) {
        throw ConfigError("recovery stack must be (r n) x n, got " +
                          std::to_string(stack_.rows()) + "x" + std::to_string(stack_.cols()));
    }
    if (!stack_.allFinite()) throw ConfigError("recovery stack has non-finite entries");
    const double dev = linalg::isometry_deviation(stack_);
    if (dev > tol) {
        throw ConfigError("recovery stack is not trace preserving: ||R^dagger R - 1|| = " +
                          std::to_string(dev));
    }
}

RecoveryStack RecoveryStack::from_kraus(const KrausMap& rec, double tol) {
    const Index n = rec.dim();
    Matrix stack(static_cast<Index>(rec.size()) * n, n);
    for (std::size_t k = 0; k < rec.size(); ++k) stack.middleRows(k * n, n) = rec.op(k);
    return RecoveryStack(std::move(stack), n, tol);
}

KrausMap RecoveryStack::to_kraus(std::string label) const {
    std::vector<Matrix> ops;
    ops.reserve(r());
    for (Index k = 0; k < r(); ++k) ops.emplace_back(block(k));
    return KrausMap(std::move(ops), std::move(label));
}

Matrix noisy_projector(const KrausMap& noise, const Matrix& u) {
    require_pairing(noise, u.rows());
    Matrix out = Matrix::Zero(u.rows(), u.rows());
    for (const auto& op : noise.ops()) {
        const Matrix w = op * u;
        out.noalias() += w * w.adjoint();
    }
    return out;
}

PetzData::PetzData(const KrausMap& noise, const Matrix& u, double rank_cut)
    : spectrum(noisy_projector(noise, u), 1e-10, rank_cut) {
    if (spectrum.rank() == 0 || spectrum.max_eigenvalue() < 1e-14) {
        throw NumericalError("N(Pi) is numerically zero: the code is annihilated by the noise");
    }
    pinv_sqrt = spectrum.pinv_sqrt();
    const std::size_t m = noise.size();
    noisy_frames.reserve(m);
    scaled_frames.reserve(m);
    for (const auto& op : noise.ops()) {
        noisy_frames.push_back(op * u);
        scaled_frames.push_back(pinv_sqrt * noisy_frames.back());
    }
    traces.resize(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            // tr(W_k^dagger S W_j) as a Frobenius pairing.
            traces(j, k) = noisy_frames[k].conjugate().cwiseProduct(scaled_frames[j]).sum();
        }
    }
}

KrausMap petz_recovery(const KrausMap& noise, const CodeFrame& code, const PetzOptions& opts) {
    const PetzData data(noise, code.u(), opts.rank_cut);
    const Matrix& u = code.u();
    std::vector<Matrix> ops;
    ops.reserve(noise.size() + 1);
    // Pi N_k^dagger S = U (S N_k U)^dagger.
    for (const auto& sw : data.scaled_frames) ops.push_back(u * sw.adjoint());
    if (opts.complete_tp && data.spectrum.rank() < data.spectrum.dim()) {
        const Matrix k = data.spectrum.kernel_basis();
        ops.push_back(k * k.adjoint());
    }
    return KrausMap(std::move(ops), "petz");
}

CorrectabilityOperator correctability_operator(const KrausMap& noise, const CodeFrame& code) {
    require_pairing(noise, code.n());
    const PetzData data(noise, code.u(), linalg::kDefaultRankCut);
    const Index d = code.d();
    const std::size_t m = noise.size();
    CorrectabilityOperator out;
    out.d = d;
    out.traces = data.traces;
    out.a_tilde = Matrix::Zero(d * d, d * d);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            // U^dagger A_jk U = (N_k U)^dagger S (N_j U).
            const Matrix b = data.noisy_frames[k].adjoint() * data.scaled_frames[j];
            out.a_tilde.noalias() += linalg::kron(b.conjugate(), b);
        }
    }
    return out;
}

double cost_J(const KrausMap& noise, const Matrix& u) { return PetzData(noise, u).cost(); }

double cost_J(const KrausMap& noise, const CodeFrame& code) { return cost_J(noise, code.u()); }

double l1_norm(const Matrix& u) { return u.cwiseAbs().sum(); }

double cost_J_reg(const KrausMap& noise, const CodeFrame& code, double lambda, L1Sign sign) {
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    return cost_J(noise, code) + l1_sign_factor(sign) * lambda * l1_norm(code.u());
}

double cro_fidelity(const KrausMap& op, const CodeFrame& code) {
    require_pairing(op, code.n());
    const Matrix& u = code.u();
    double total = 0.0;
    for (const auto& e : op.ops()) {
        const Complex t = (u.adjoint() * e * u).trace();
        total += std::norm(t);
    }
    const double d = static_cast<double>(code.d());
    return total / (d * d);
}

KnillLaflammeReport knill_laflamme_check(const KrausMap& noise, const CodeFrame& code,
                                         double tol) {
    require_pairing(noise, code.n());
    const Index d = code.d();
    const std::size_t m = noise.size();
    std::vector<Matrix> w;
    w.reserve(m);
    for (const auto& op : noise.ops()) w.push_back(op * code.u());

    KnillLaflammeReport out;
    out.alpha.resize(m, m);
    const Matrix id = Matrix::Identity(d, d);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const Matrix block = w[j].adjoint() * w[k];
            const Complex a = block.trace() / static_cast<double>(d);
            out.alpha(j, k) = a;
            out.deviation = std::max(out.deviation, (block - a * id).norm());
        }
    }
    out.correctable = out.deviation <= tol;
    return out;
}

double recovery_cost(const KrausMap& noise, const CodeFrame& code, const Matrix& stack) {
    require_pairing(noise, code.n());
    const Index n = code.n();
    if (stack.cols() != n || stack.rows() % n != 0) {
        throw ConfigError("recovery stack shape does not match the noise dimension");
    }
    const Index r = stack.rows() / n;
    double total = 0.0;
    for (const auto& op : noise.ops()) {
        const Matrix w = op * code.u();  // N_k U
        for (Index j = 0; j < r; ++j) {
            // tr(R_j N_k U U^dagger) = tr(U^dagger R_j N_k U)
            const Complex t = (code.u().adjoint() * stack.middleRows(j * n, n) * w).trace();
            total += std::norm(t);
        }
    }
    return total;
}

double recovery_cost(const KrausMap& noise, const CodeFrame& code, const RecoveryStack& rec) {
    if (rec.n() != code.n()) throw ConfigError("recovery dimension does not match the code");
    return recovery_cost(noise, code, rec.stack());
}

RecoveryStack petz_stack(const KrausMap& noise, const CodeFrame& code) {
    const PetzData data(noise, code.u());
    const Index n = code.n();
    const Index m = static_cast<Index>(noise.size());
    Matrix stack(m * n, n);
    for (Index k = 0; k < m; ++k) stack.middleRows(k * n, n) = code.u() * data.scaled_frames[k].adjoint();

    const Index rank = data.spectrum.rank();
    if (rank < n) {
        // R^dagger R is the support projector of N(Pi). Route ker N(Pi) into
        // directions orthogonal to range(R); those never touch N_k U.
        const Matrix range_basis = stack * data.spectrum.eigenvectors().leftCols(rank);
        Matrix basis(m * n, rank + (n - rank));
        basis.leftCols(rank) = range_basis;
        Index found = rank;
        for (Index i = 0; i < m * n && found < n; ++i) {
            Vector e = Vector::Zero(m * n);
            e(i) = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                e -= basis.leftCols(found) * (basis.leftCols(found).adjoint() * e);
            }
            const double norm = e.norm();
            if (norm > 1e-6) basis.col(found++) = e / norm;
        }
        const Matrix kernel = data.spectrum.kernel_basis();
        stack += basis.rightCols(n - rank) * kernel.adjoint();
    }
    if (linalg::isometry_deviation(stack) > 1e-12) stack = stiefel::renormalize(stack);
    return RecoveryStack(std::move(stack), n);
}

}  // namespace qecopt
