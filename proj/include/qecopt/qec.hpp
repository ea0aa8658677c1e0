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

#ifndef QECOPT_QEC_HPP
#define QECOPT_QEC_HPP

#include <vector>

#include "qecopt/channels.hpp"
#include "qecopt/linalg.hpp"

namespace qecopt {

inline constexpr double kIsometryTol = 1e-9;

/// An n x d isometry U spanning a subspace code; Pi = U U^dagger.
class CodeFrame {
 public:
    /// Throws ConfigError unless ||U^dagger U - 1||_F <= tol.
    explicit CodeFrame(Matrix u, double tol = kIsometryTol);

    Index n() const { return u_.rows(); }
    Index d() const { return u_.cols(); }
    const Matrix& u() const { return u_; }
    Matrix projector() const { return u_ * u_.adjoint(); }

 private:
    Matrix u_;
};

/// Stinespring stacking of r recovery operators into an (r n) x n isometry.
class RecoveryStack {
 public:
    RecoveryStack(Matrix stack, Index n, double tol = kIsometryTol);

    /// Stacks the operators of `rec`; throws if the result is not an isometry.
    static RecoveryStack from_kraus(const KrausMap& rec, double tol = kIsometryTol);

    Index n() const { return n_; }
    Index r() const { return stack_.rows() / n_; }
    const Matrix& stack() const { return stack_; }
    auto block(Index k) const { return stack_.middleRows(k * n_, n_); }

    KrausMap to_kraus(std::string label = "recovery") const;

 private:
    Matrix stack_;
    Index n_;
};

/// Everything the cost, the Petz map and the gradient share for one
/// (noise, U) pairing. U need not be an exact isometry; Pi is taken as U U^dagger
/// so that the cost extends smoothly to a neighborhood of the manifold.
struct PetzData {
    PetzData(const KrausMap& noise, const Matrix& u, double rank_cut = linalg::kDefaultRankCut);

    linalg::PsdSpectrum spectrum;      // of N(Pi)
    Matrix pinv_sqrt;                  // N(Pi)^{-1/2} (pseudo-inverse)
    std::vector<Matrix> noisy_frames;  // W_k = N_k U
    std::vector<Matrix> scaled_frames; // N(Pi)^{-1/2} W_k
    /// traces(j, k) = tr(R_k N_j Pi) = tr(W_k^dagger N(Pi)^{-1/2} W_j).
    Matrix traces;

    double cost() const { return traces.squaredNorm(); }
};

/// N(Pi) = sum_k N_k Pi N_k^dagger for Pi = U U^dagger.
Matrix noisy_projector(const KrausMap& noise, const Matrix& u);

struct PetzOptions {
    bool complete_tp = false;
    double rank_cut = linalg::kDefaultRankCut;
};

/// Petz recovery R_k = Pi N_k^dagger N(Pi)^{-1/2}. With complete_tp an extra
/// operator projecting onto ker N(Pi) makes the map exactly trace preserving.
KrausMap petz_recovery(const KrausMap& noise, const CodeFrame& code, const PetzOptions& opts = {});

struct CorrectabilityOperator {
    Index d = 0;
    Matrix a_tilde;  // d^2 x d^2, in the code basis
    Matrix traces;   // m x m, tr(A_jk)
};

CorrectabilityOperator correctability_operator(const KrausMap& noise, const CodeFrame& code);

/// J(Pi) = sum_jk |tr(A_jk)|^2, in [0, d^2]; equals d^2 iff Pi is correctable.
double cost_J(const KrausMap& noise, const CodeFrame& code);
double cost_J(const KrausMap& noise, const Matrix& u);

/// Sum of |U_jk|.
double l1_norm(const Matrix& u);

enum class L1Sign {
    kPenalty,  // J - lambda ||U||_1
    kBonus,    // J + lambda ||U||_1
};

inline double l1_sign_factor(L1Sign sign) { return sign == L1Sign::kPenalty ? -1.0 : 1.0; }

double cost_J_reg(const KrausMap& noise, const CodeFrame& code, double lambda,
                  L1Sign sign = L1Sign::kPenalty);

/// Code restricted operation fidelity (1/d^2) sum_j |tr(U^dagger E_j U)|^2.
double cro_fidelity(const KrausMap& op, const CodeFrame& code);

struct KnillLaflammeReport {
    bool correctable = false;
    double deviation = 0.0;
    Matrix alpha;  // alpha_jk = tr(U^dagger N_j^dagger N_k U) / d
};

KnillLaflammeReport knill_laflamme_check(const KrausMap& noise, const CodeFrame& code,
                                         double tol = 1e-9);

/// sum_jk |tr(R_j N_k Pi)|^2.
double recovery_cost(const KrausMap& noise, const CodeFrame& code, const Matrix& stack);
double recovery_cost(const KrausMap& noise, const CodeFrame& code, const RecoveryStack& rec);

/// Petz operators stacked and, when the Petz map is only trace preserving on
/// the support of N(Pi), completed to an isometry without changing the
/// recovery cost. The Kraus rank stays equal to the noise length.
RecoveryStack petz_stack(const KrausMap& noise, const CodeFrame& code);

}  // namespace qecopt

#endif  // QECOPT_QEC_HPP
