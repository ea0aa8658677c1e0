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

#ifndef QECOPT_GRADIENTS_HPP
#define QECOPT_GRADIENTS_HPP

#include <cstddef>
#include <functional>
#include <optional>

#include "qecopt/channels.hpp"
#include "qecopt/qec.hpp"

// Euclidean gradients of the code and recovery costs.
//
// Convention: for a real function f of a complex matrix X the gradient is
// df/dRe(X) + i df/dIm(X), so that the first-order change along a direction
// D is Re tr(grad^dagger D).
namespace qecopt::gradients {

inline constexpr double kDefaultFdStep = 1e-6;
inline constexpr double kL1Eps = 1e-12;

struct GradientReport {
    Matrix egrad;
    double value = 0.0;  // cost at the base point
    std::optional<double> fd_relative_error;
    // Instrumentation: trace evaluations and Sylvester pseudo-inverse solves.
    std::size_t trace_evals = 0;
    std::size_t sylvester_solves = 0;
};

/// Gradient of tr(A Pi_U): (A + A^dagger) U, i.e. 2 A U for Hermitian A.
Matrix egrad_trace_projector(const Matrix& a, const Matrix& u);

/// Gradient of tr(A N(Pi_U)^{-1/2}) for Hermitian A, with the Moore-Penrose
/// kernel terms included when N(Pi_U) is singular.
Matrix egrad_trace_pinvsqrt(const Matrix& a, const KrausMap& noise, const Matrix& u,
                            double rank_cut = linalg::kDefaultRankCut);

struct CostGradientOptions {
    bool verify = false;  // also run the finite-difference oracle
    double fd_step = kDefaultFdStep;
    double rank_cut = linalg::kDefaultRankCut;
};

/// Gradient of J(U) = sum_jk |tr(U^dagger N_k^dagger N(Pi)^{-1/2} N_j U)|^2.
GradientReport egrad_cost_J(const KrausMap& noise, const Matrix& u,
                            const CostGradientOptions& opts = {});

/// Gradient of lambda ||U||_1 (entrywise U/|U|, zero where |U| <= kL1Eps).
Matrix egrad_l1(const Matrix& u, double lambda);

/// Gradient of sum_jk |tr(R_j N_k Pi)|^2 with respect to the stacked R.
Matrix egrad_recovery(const KrausMap& noise, const CodeFrame& code, const Matrix& stack);

using RealFunction = std::function<double(const Matrix&)>;

/// Central differences along the real and imaginary part of every entry,
/// assembled as d/dRe + i d/dIm.
Matrix fd_oracle(const RealFunction& f, const Matrix& x0, double h = kDefaultFdStep);

/// ||a - b||_F / max(||b||_F, floor).
double relative_error(const Matrix& a, const Matrix& b, double floor = 1e-12);

}  // namespace qecopt::gradients

#endif  // QECOPT_GRADIENTS_HPP
