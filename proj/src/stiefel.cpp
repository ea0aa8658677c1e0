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

#include "qecopt/stiefel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qecopt/errors.hpp"

namespace qecopt::stiefel {

namespace {

Matrix sym(const Matrix& z) { return 0.5 * (z + z.adjoint()); }

void require_full_rank(const linalg::QrResult& qr, const char* what) {
    const double scale = qr.r.cwiseAbs().maxCoeff();
    for (Index j = 0; j < qr.r.rows(); ++j) {
        if (qr.r(j, j).real() <= 1e-12 * scale || scale == 0.0) {
            throw NumericalError(std::string(what) + ": input is rank deficient");
        }
    }
}

}  // namespace

Matrix project_tangent(const Matrix& u, const Matrix& x) { return x - u * sym(u.adjoint() * x); }

double tangency_deviation(const Matrix& u, const Matrix& x) {
    return (x.adjoint() * u + u.adjoint() * x).norm();
}

double canonical_inner(const Matrix& u, const Matrix& x, const Matrix& y) {
    // tr(X^dagger Y) - tr((U^dagger X)^dagger (U^dagger Y)) / 2
    const Complex full = x.conjugate().cwiseProduct(y).sum();
    const Matrix ux = u.adjoint() * x;
    const Matrix uy = u.adjoint() * y;
    const Complex half = ux.conjugate().cwiseProduct(uy).sum();
    return (full - 0.5 * half).real();
}

double canonical_norm(const Matrix& u, const Matrix& x) {
    return std::sqrt(std::max(0.0, canonical_inner(u, x, x)));
}

Matrix riemannian_grad(const Matrix& u, const Matrix& egrad) {
    return egrad - u * egrad.adjoint() * u;
}

Matrix exp_map(const Matrix& u, const Matrix& x) {
    const Index d = u.cols();
    const Matrix a = u.adjoint() * x;
    const Matrix perp = x - u * a;
    const linalg::QrResult qr = linalg::thin_qr(perp);
    const double r_scale = std::max(1.0, qr.r.cwiseAbs().maxCoeff());
    if (qr.r.diagonal().real().minCoeff() <= 1e-13 * r_scale && perp.norm() > 0.0) {
        // Q is not determined by (1 - UU^dagger) X. Use the equivalent
        // n x n generator: exp_U(X) = exp(Omega) U with
        // Omega = P X U^dagger - U X^dagger P, P = 1 - UU^dagger / 2.
        const Matrix p = Matrix::Identity(u.rows(), u.rows()) - 0.5 * u * u.adjoint();
        return linalg::expm(p * x * u.adjoint() - u * x.adjoint() * p) * u;
    }
    Matrix block = Matrix::Zero(2 * d, 2 * d);
    block.topLeftCorner(d, d) = a;
    block.topRightCorner(d, d) = -qr.r.adjoint();
    block.bottomLeftCorner(d, d) = qr.r;
    const Matrix e = linalg::expm(block);
    return u * e.topLeftCorner(d, d) + qr.q * e.bottomLeftCorner(d, d);
}

Matrix qr_retract(const Matrix& u, const Matrix& x) {
    const linalg::QrResult qr = linalg::thin_qr(u + x);
    require_full_rank(qr, "qr_retract");
    return qr.q;
}

Matrix retract(Retraction kind, const Matrix& u, const Matrix& x) {
    return kind == Retraction::kExp ? exp_map(u, x) : qr_retract(u, x);
}

Matrix renormalize(const Matrix& u, Repair method) {
    if (method == Repair::kQr) {
        const linalg::QrResult qr = linalg::thin_qr(u);
        require_full_rank(qr, "renormalize");
        return qr.q;
    }
    const linalg::PsdSpectrum gram(u.adjoint() * u, 1e-10, 1e-14);
    if (gram.rank() < u.cols()) throw NumericalError("renormalize: input is rank deficient");
    return u * gram.pinv_sqrt();
}

Matrix haar_isometry(Index n, Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(n, d);
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return linalg::thin_qr(g).q;
}

}  // namespace qecopt::stiefel
