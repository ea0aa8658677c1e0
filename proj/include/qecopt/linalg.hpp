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

#ifndef QECOPT_LINALG_HPP
#define QECOPT_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

namespace qecopt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

namespace linalg {

/// Relative eigenvalue cutoff below which a PSD matrix is treated as singular.
inline constexpr double kDefaultRankCut = 1e-10;

/// Column-stacking vectorization of a square matrix.
Vector vec(const Matrix& m);

/// Inverse of vec(): reshapes an n*n vector into an n x n matrix.
Matrix unvec(const Vector& v, Index n);

Matrix kron(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& m);

/// ||H - H^dagger||_F.
double hermitian_deviation(const Matrix& h);

/// ||U^dagger U - 1||_F.
double isometry_deviation(const Matrix& u);

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  // descending
    Matrix eigenvectors;          // unitary, columns match eigenvalues
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
/// solving; throws ConfigError if it is further than `tol * max(1, ||H||)`
/// from Hermitian.
SpectralDecomposition eigh(const Matrix& h, double tol = 1e-9);

/// Spectral view of a Hermitian PSD matrix H with a relative rank cutoff.
///
/// Eigenvalues in (-tol, 0) are clamped to zero; eigenvalues below
/// `rank_cut * lambda_max` span the numerical kernel. Everything downstream
/// (square root, pseudo-inverse square root, Sylvester solves) shares one
/// eigendecomposition.
class PsdSpectrum {
 public:
    PsdSpectrum(const Matrix& h, double tol = 1e-10, double rank_cut = kDefaultRankCut);

    Index dim() const { return vectors_.rows(); }
    Index rank() const { return rank_; }
    double max_eigenvalue() const { return values_.size() ? values_(0) : 0.0; }
    const Eigen::VectorXd& eigenvalues() const { return values_; }
    const Matrix& eigenvectors() const { return vectors_; }

    Matrix sqrt() const;
    Matrix pinv_sqrt() const;
    Matrix pinv() const;
    Matrix support_projector() const;
    /// Orthonormal basis of the numerical kernel (n x (n - rank)).
    Matrix kernel_basis() const;

    /// Pseudo-inverse of X -> X S + S X with S = H^{1/2}, applied to C.
    Matrix sylvester_pinv(const Matrix& c) const;

 private:
    Matrix spectral_function(double (*f)(double), bool support_only) const;

    Eigen::VectorXd values_;
    Matrix vectors_;
    Index rank_ = 0;
};

/// H^{1/2} for Hermitian PSD H. Throws ConfigError if H has an eigenvalue
/// below -tol (relative to max(1, ||H||)).
Matrix psd_sqrt(const Matrix& h, double tol = 1e-10);

/// Moore-Penrose H^{-1/2}: inverse square root on the support, zero on the
/// kernel. All-zero H returns the zero matrix.
Matrix psd_pinv_sqrt(const Matrix& h, double tol = 1e-10, double rank_cut = kDefaultRankCut);

struct QrResult {
    Matrix q;  // n x d isometry
    Matrix r;  // d x d upper triangular, real non-negative diagonal
};

/// Thin QR of an n x d matrix (n >= d). The diagonal of R is real and
/// non-negative, which makes the factorization unique for full-rank input.
QrResult thin_qr(const Matrix& x);

Matrix expm(const Matrix& m);

/// Applies the pseudo-inverse of C = S^T (x) 1 + 1 (x) S to b, where
/// S = sqrt_h is Hermitian PSD and b = vec(B). Works in the eigenbasis of S,
/// so the n^2 x n^2 operator is never formed.
Vector sylvester_pinv_apply(const Matrix& sqrt_h, const Vector& b,
                            double rank_cut = kDefaultRankCut);

}  // namespace linalg
}  // namespace qecopt

#endif  // QECOPT_LINALG_HPP
