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

#ifndef QECOPT_STIEFEL_HPP
#define QECOPT_STIEFEL_HPP

#include <cstdint>

#include "qecopt/linalg.hpp"

// Geometry of the complex Stiefel manifold V_d(C^n) = {U : U^dagger U = 1_d}.
// Functions are shape-generic so they serve both n x d code frames and
// (r n) x n recovery stacks.
namespace qecopt::stiefel {

/// pi_U(X) = X - U Sym(U^dagger X).
Matrix project_tangent(const Matrix& u, const Matrix& x);

/// ||X^dagger U + U^dagger X||_F; zero for tangent vectors.
double tangency_deviation(const Matrix& u, const Matrix& x);

/// Canonical metric g_U(X, Y) = Re tr(X^dagger (1 - U U^dagger / 2) Y).
double canonical_inner(const Matrix& u, const Matrix& x, const Matrix& y);
double canonical_norm(const Matrix& u, const Matrix& x);

/// Riemannian gradient for the canonical metric: G - U G^dagger U.
Matrix riemannian_grad(const Matrix& u, const Matrix& egrad);

/// Canonical-metric geodesic exp_U(X) through the (2d x 2d) block exponential.
Matrix exp_map(const Matrix& u, const Matrix& x);

/// Q factor of U + X. Throws NumericalError if U + X is rank deficient.
Matrix qr_retract(const Matrix& u, const Matrix& x);

enum class Retraction { kQr, kExp };

Matrix retract(Retraction kind, const Matrix& u, const Matrix& x);

enum class Repair { kPolar, kQr };

/// Nearest isometry U (U^dagger U)^{-1/2} (polar) or the Q factor.
Matrix renormalize(const Matrix& u, Repair method = Repair::kPolar);

/// Haar-distributed isometry: Q factor of a seeded complex Gaussian matrix.
Matrix haar_isometry(Index n, Index d, std::uint64_t seed);

}  // namespace qecopt::stiefel

#endif  // QECOPT_STIEFEL_HPP
