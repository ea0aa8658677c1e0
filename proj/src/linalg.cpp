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

#include "qecopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qecopt/errors.hpp"

namespace qecopt::linalg {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw ConfigError(std::string(what) + ": expected a square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

double scale_of(const Matrix& m) { return std::max(1.0, m.norm()); }

}  // namespace

Vector vec(const Matrix& m) {
    require_square(m, "vec");
    // Eigen storage is column-major, which is exactly column stacking.
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index n) {
    if (v.size() != n * n) {
        throw ConfigError("unvec: vector length " + std::to_string(v.size()) +
                          " is not " + std::to_string(n) + "^2");
    }
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

double hermitian_deviation(const Matrix& h) { return (h - h.adjoint()).norm(); }

double isometry_deviation(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

SpectralDecomposition eigh(const Matrix& h, double tol) {
    require_square(h, "eigh");
    if (hermitian_deviation(h) > tol * scale_of(h)) {
        throw ConfigError("eigh: matrix is not Hermitian (deviation " +
                          std::to_string(hermitian_deviation(h)) + ")");
    }
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigh: Hermitian eigensolver did not converge");
    }
    // Eigen returns ascending order.
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

PsdSpectrum::PsdSpectrum(const Matrix& h, double tol, double rank_cut) {
    auto spec = eigh(h, std::max(tol, 1e-9));
    const double scale = scale_of(h);
    for (Index i = 0; i < spec.eigenvalues.size(); ++i) {
        double& lam = spec.eigenvalues(i);
        if (lam < -tol * scale) {
            throw ConfigError("matrix is not PSD: eigenvalue " + std::to_string(lam));
        }
        if (lam < 0.0) lam = 0.0;
    }
    values_ = std::move(spec.eigenvalues);
    vectors_ = std::move(spec.eigenvectors);
    const double cut = rank_cut * max_eigenvalue();
    rank_ = 0;
    while (rank_ < values_.size() && values_(rank_) > cut && values_(rank_) > 0.0) ++rank_;
}

Matrix PsdSpectrum::spectral_function(double (*f)(double), bool support_only) const {
    const Index n = dim();
    const Index k = support_only ? rank_ : n;
    Eigen::VectorXd fx(k);
    for (Index i = 0; i < k; ++i) fx(i) = f(values_(i));
    const auto v = vectors_.leftCols(k);
    return v * fx.asDiagonal() * v.adjoint();
}

Matrix PsdSpectrum::sqrt() const {
    return spectral_function([](double x) { return std::sqrt(x); }, false);
}

Matrix PsdSpectrum::pinv_sqrt() const {
    return spectral_function([](double x) { return 1.0 / std::sqrt(x); }, true);
}

Matrix PsdSpectrum::pinv() const {
    return spectral_function([](double x) { return 1.0 / x; }, true);
}

Matrix PsdSpectrum::support_projector() const {
    const auto v = vectors_.leftCols(rank_);
    return v * v.adjoint();
}

Matrix PsdSpectrum::kernel_basis() const { return vectors_.rightCols(dim() - rank_); }

Matrix PsdSpectrum::sylvester_pinv(const Matrix& c) const {
    const Index n = dim();
    Matrix ct = vectors_.adjoint() * c * vectors_;
    // Kernel eigenvalues count as exact zeros; their rounding-level square
    // roots would otherwise leak into the mixed blocks.
    Eigen::VectorXd root = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < rank_; ++i) root(i) = std::sqrt(values_(i));
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (i >= rank_ && j >= rank_) {
                ct(i, j) = 0.0;
            } else {
                ct(i, j) /= root(i) + root(j);
            }
        }
    }
    return vectors_ * ct * vectors_.adjoint();
}

Matrix psd_sqrt(const Matrix& h, double tol) { return PsdSpectrum(h, tol).sqrt(); }

Matrix psd_pinv_sqrt(const Matrix& h, double tol, double rank_cut) {
    return PsdSpectrum(h, tol, rank_cut).pinv_sqrt();
}

QrResult thin_qr(const Matrix& x) {
    const Index n = x.rows();
    const Index d = x.cols();
    if (n < d) {
        throw ConfigError("thin_qr: need rows >= cols, got " + std::to_string(n) + "x" +
                          std::to_string(d));
    }
    Eigen::HouseholderQR<Matrix> qr(x);
    QrResult out;
    out.q = qr.householderQ() * Matrix::Identity(n, d);
    out.r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    for (Index j = 0; j < d; ++j) {
        const double mag = std::abs(out.r(j, j));
        if (mag == 0.0) continue;
        const Complex phase = out.r(j, j) / mag;
        out.r.row(j) *= std::conj(phase);
        out.q.col(j) *= phase;
        out.r(j, j) = mag;
    }
    return out;
}

Matrix expm(const Matrix& m) {
    require_square(m, "expm");
    return m.exp();
}

Vector sylvester_pinv_apply(const Matrix& sqrt_h, const Vector& b, double rank_cut) {
    const Index n = sqrt_h.rows();
    require_square(sqrt_h, "sylvester_pinv_apply");
    const Matrix bm = unvec(b, n);
    const auto spec = eigh(sqrt_h);
    const double mu_max = std::max(0.0, spec.eigenvalues.size() ? spec.eigenvalues(0) : 0.0);
    const Matrix& v = spec.eigenvectors;
    Matrix bt = v.adjoint() * bm * v;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double sum =
                std::max(0.0, spec.eigenvalues(i)) + std::max(0.0, spec.eigenvalues(j));
            if (sum <= rank_cut * 2.0 * mu_max || sum == 0.0) {
                bt(i, j) = 0.0;
            } else {
                bt(i, j) /= sum;
            }
        }
    }
    const Matrix x = v * bt * v.adjoint();
    return vec(x);
}

}  // namespace qecopt::linalg
