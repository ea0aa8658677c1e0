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

#include "qecopt/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qecopt/errors.hpp"

namespace qecopt::gradients {

namespace {

// Y = L^+(C) for the Moore-Penrose derivative of tr(A N^{-1/2}) where
// L(X) = X N^{1/2} + N^{1/2} X. The kernel terms vanish at full rank.
Matrix pinvsqrt_adjoint(const linalg::PsdSpectrum& spectrum, const Matrix& s, const Matrix& a,
                        std::size_t& solves) {
    Matrix c = -(s * a * s);
    if (spectrum.rank() < spectrum.dim()) {
        const Matrix kernel = spectrum.kernel_basis();
        const Matrix kproj = kernel * kernel.adjoint();
        const Matrix c2 = s * s * a * kproj;
        c += c2 + c2.adjoint();
    }
    ++solves;
    return spectrum.sylvester_pinv(c);
}

// 2 (sum_k N_k^dagger Y N_k) U given W_k = N_k U.
Matrix pushback(const KrausMap& noise, const std::vector<Matrix>& w, const Matrix& y) {
    Matrix out = Matrix::Zero(w.front().rows(), w.front().cols());
    for (std::size_t k = 0; k < noise.size(); ++k) out.noalias() += noise.op(k).adjoint() * (y * w[k]);
    return 2.0 * out;
}

}  // namespace

Matrix egrad_trace_projector(const Matrix& a, const Matrix& u) { return (a + a.adjoint()) * u; }

Matrix egrad_trace_pinvsqrt(const Matrix& a, const KrausMap& noise, const Matrix& u,
                            double rank_cut) {
    const PetzData data(noise, u, rank_cut);
    std::size_t solves = 0;
    const Matrix y = pinvsqrt_adjoint(data.spectrum, data.pinv_sqrt, a, solves);
    return pushback(noise, data.noisy_frames, y);
}

GradientReport egrad_cost_J(const KrausMap& noise, const Matrix& u, const CostGradientOptions& opts) {
    const PetzData data(noise, u, opts.rank_cut);
    const std::size_t m = noise.size();
    const Matrix& t = data.traces;  // t(j, k) = tr(R_k N_j Pi)

    GradientReport report;
    report.value = data.cost();
    report.trace_evals = m * m;

    // dJ = 2 Re sum conj(t_jk) dt_jk splits into a projector part with
    // G = sum conj(t_jk) N_k^dagger S N_j and an N(Pi)^{-1/2} part with
    // H = sum conj(t_jk) N_j Pi N_k^dagger. Both are Hermitian because
    // t_kj = conj(t_jk).
    Matrix gu = Matrix::Zero(u.rows(), u.cols());
    Matrix h = Matrix::Zero(u.rows(), u.rows());
    for (std::size_t k = 0; k < m; ++k) {
        Matrix sw = Matrix::Zero(u.rows(), u.cols());
        Matrix wk = Matrix::Zero(u.rows(), u.cols());
        for (std::size_t j = 0; j < m; ++j) {
            const Complex c = std::conj(t(j, k));
            if (c == Complex(0.0)) continue;
            sw.noalias() += c * data.scaled_frames[j];
            wk.noalias() += c * data.noisy_frames[j];
        }
        gu.noalias() += noise.op(k).adjoint() * sw;
        h.noalias() += wk * data.noisy_frames[k].adjoint();
    }
    h = 0.5 * (h + h.adjoint());

    const Matrix y =
        pinvsqrt_adjoint(data.spectrum, data.pinv_sqrt, h, report.sylvester_solves);
    report.egrad = 4.0 * gu + 2.0 * pushback(noise, data.noisy_frames, y);

    if (opts.verify) {
        const Matrix fd = fd_oracle(
            [&](const Matrix& x) { return cost_J(noise, x); }, u, opts.fd_step);
        report.fd_relative_error = relative_error(report.egrad, fd, 1e-8);
    }
    return report;
}

Matrix egrad_l1(const Matrix& u, double lambda) {
    Matrix out = Matrix::Zero(u.rows(), u.cols());
    for (Index j = 0; j < u.cols(); ++j) {
        for (Index i = 0; i < u.rows(); ++i) {
            const double mag = std::abs(u(i, j));
            if (mag > kL1Eps) out(i, j) = lambda * u(i, j) / mag;
        }
    }
    return out;
}

Matrix egrad_recovery(const KrausMap& noise, const CodeFrame& code, const Matrix& stack) {
    const Index n = code.n();
    if (noise.dim() != n || stack.cols() != n || stack.rows() % n != 0) {
        throw ConfigError("egrad_recovery: shapes of noise, code and stack do not match");
    }
    const Index r = stack.rows() / n;
    const Matrix& u = code.u();
    std::vector<Matrix> w;
    w.reserve(noise.size());
    for (const auto& op : noise.ops()) w.push_back(op * u);

    Matrix out(stack.rows(), n);
    for (Index k = 0; k < r; ++k) {
        const Matrix ur = u.adjoint() * stack.middleRows(k * n, n);  // U^dagger R_k
        // block_k = 2 sum_j tr(R_k N_j Pi) Pi N_j^dagger = 2 U (sum_j t_kj W_j^dagger)
        Matrix acc = Matrix::Zero(u.cols(), n);
        for (const auto& wj : w) {
            const Complex tkj = (ur * wj).trace();
            acc.noalias() += tkj * wj.adjoint();
        }
        out.middleRows(k * n, n) = 2.0 * u * acc;
    }
    return out;
}

Matrix fd_oracle(const RealFunction& f, const Matrix& x0, double h) {
    if (!(h >= 1e-8 && h <= 1e-4)) {
        throw ConfigError("finite-difference step must lie in [1e-8, 1e-4], got " + std::to_string(h));
    }
    Matrix grad(x0.rows(), x0.cols());
    Matrix x = x0;
    for (Index j = 0; j < x0.cols(); ++j) {
        for (Index i = 0; i < x0.rows(); ++i) {
            const Complex orig = x0(i, j);
            x(i, j) = orig + h;
            const double re_plus = f(x);
            x(i, j) = orig - h;
            const double re_minus = f(x);
            x(i, j) = orig + Complex(0.0, h);
            const double im_plus = f(x);
            x(i, j) = orig - Complex(0.0, h);
            const double im_minus = f(x);
            x(i, j) = orig;
            grad(i, j) = Complex((re_plus - re_minus) / (2.0 * h), (im_plus - im_minus) / (2.0 * h));
        }
    }
    return grad;
}

double relative_error(const Matrix& a, const Matrix& b, double floor) {
    return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace qecopt::gradients
