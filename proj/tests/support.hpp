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


#ifndef QECOPT_TESTS_SUPPORT_HPP
#define QECOPT_TESTS_SUPPORT_HPP

// Seeded generators and reference computations shared by the test suites.
// The reference computations are written from the definitions, without
// calling into the library code they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qecopt/channels.hpp"
#include "qecopt/linalg.hpp"

namespace qecopt::testing {

class Rng {
 public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    Complex complex() { return {normal(), normal()}; }

    Matrix matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) m(i, j) = complex();
        return m;
    }

    Matrix hermitian(Index n) {
        const Matrix a = matrix(n, n);
        return 0.5 * (a + a.adjoint());
    }

    Matrix skew_hermitian(Index n) {
        const Matrix a = matrix(n, n);
        return 0.5 * (a - a.adjoint());
    }

    // PSD matrix of the given rank with eigenvalues in [0.5, 2].
    Matrix psd(Index n, Index rank) {
        const Matrix v = isometry(n, n);
        Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
        for (Index i = 0; i < rank; ++i) lam(i) = uniform(0.5, 2.0);
        return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
    }

    // Haar-distributed isometry from Gram-Schmidt on Gaussian columns.
    Matrix isometry(Index n, Index d) {
        Matrix q = matrix(n, d);
        for (Index j = 0; j < d; ++j) {
            for (Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
            q.col(j).normalize();
        }
        return q;
    }

    Matrix unitary(Index n) { return isometry(n, n); }

    // Density matrix supported on range(U).
    Matrix code_state(const Matrix& u) {
        const Matrix a = matrix(u.cols(), u.cols());
        Matrix rho = a * a.adjoint();
        rho /= rho.trace().real();
        return u * rho * u.adjoint();
    }

    // Random trace-preserving channel: the blocks of an (m n) x n isometry.
    KrausMap channel(Index n, Index m) {
        const Matrix v = isometry(m * n, n);
        std::vector<Matrix> ops;
        for (Index k = 0; k < m; ++k) ops.push_back(v.middleRows(k * n, n));
        return KrausMap(std::move(ops), "random");
    }

    std::mt19937_64& engine() { return engine_; }

 private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline KrausMap noise_model(NoiseFamily family, int qubits, double p, double q = 0.0) {
    return build_noise({family, qubits, p, q, ""});
}

// Sum_j N_j rho N_j^dagger, written out directly.
inline Matrix apply_reference(const std::vector<Matrix>& ops, const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& op : ops) out += op * rho * op.adjoint();
    return out;
}

// H^{power} on the support of a Hermitian PSD matrix, via a fresh
// SelfAdjointEigenSolver and a relative cutoff.
inline Matrix spectral_power(const Matrix& h, double power, double rank_cut = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(h.rows());
    for (Index i = 0; i < h.rows(); ++i) {
        const double l = es.eigenvalues()(i);
        if (l > rank_cut * top) f(i) = std::pow(l, power);
    }
    return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

// Petz operators Pi N_k^dagger N(Pi)^{-1/2} from the textbook formula.
inline std::vector<Matrix> petz_reference(const std::vector<Matrix>& noise, const Matrix& u) {
    const Matrix pi = u * u.adjoint();
    const Matrix s = spectral_power(apply_reference(noise, pi), -0.5);
    std::vector<Matrix> out;
    for (const auto& n : noise) out.push_back(pi * n.adjoint() * s);
    return out;
}

// CRO fidelity of the composed map R o N restricted to the code, from the
// entanglement-fidelity definition <Phi| (id (x) E)(|Phi><Phi|) |Phi> with
// |Phi> maximally entangled between a d-dimensional reference and range(U).
inline double entanglement_fidelity_reference(const std::vector<Matrix>& rec,
                                              const std::vector<Matrix>& noise, const Matrix& u) {
    const Index d = u.cols();
    const Index n = u.rows();
    Vector phi = Vector::Zero(d * n);
    for (Index a = 0; a < d; ++a) phi.segment(a * n, n) = u.col(a) / std::sqrt(double(d));
    double f = 0.0;
    for (const auto& r : rec) {
        for (const auto& k : noise) {
            const Matrix e = r * k;
            Vector out = Vector::Zero(d * n);
            for (Index a = 0; a < d; ++a) out.segment(a * n, n) = e * phi.segment(a * n, n);
            f += std::norm(phi.dot(out));
        }
    }
    return f;
}

// Dense Kronecker form of X -> S X + X S acting on vec(X), for small n.
inline Matrix dense_sylvester(const Matrix& s) {
    const Index n = s.rows();
    const Matrix id = Matrix::Identity(n, n);
    Matrix c = Matrix::Zero(n * n, n * n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index k = 0; k < n; ++k) {
                for (Index l = 0; l < n; ++l) {
                    // kron(S^T, 1) + kron(1, S), entry ((i,k),(j,l)) with row i*n+k
                    Complex v = s(j, i) * id(k, l) + id(i, j) * s(k, l);
                    c(i * n + k, j * n + l) = v;
                }
            }
        }
    }
    return c;
}

// Moore-Penrose pseudo-inverse through an SVD with a relative cutoff.
inline Matrix pinv_reference(const Matrix& a, double rank_cut = 1e-10) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    Eigen::VectorXcd inv = Eigen::VectorXcd::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_cut * top) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

// Knill-Laflamme deviation computed with full projectors, independent of
// the code-basis shortcut used by the library.
inline double kl_deviation_reference(const std::vector<Matrix>& noise, const Matrix& u) {
    const Matrix pi = u * u.adjoint();
    const double d = static_cast<double>(u.cols());
    double worst = 0.0;
    for (const auto& a : noise) {
        for (const auto& b : noise) {
            const Matrix m = pi * a.adjoint() * b * pi;
            const Complex alpha = m.trace() / d;
            worst = std::max(worst, (m - alpha * pi).norm());
        }
    }
    return worst;
}

// Frobenius distance between two frames after removing the best d x d
// unitary gauge (orthogonal Procrustes).
inline double gauge_distance(const Matrix& a, const Matrix& b) {
    Eigen::JacobiSVD<Matrix> svd(b.adjoint() * a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
    return (a - b * w).norm();
}

}  // namespace qecopt::testing

#endif  // QECOPT_TESTS_SUPPORT_HPP
