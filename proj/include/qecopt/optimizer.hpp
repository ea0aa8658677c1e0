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

#ifndef QECOPT_OPTIMIZER_HPP
#define QECOPT_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qecopt/channels.hpp"
#include "qecopt/qec.hpp"
#include "qecopt/stiefel.hpp"

namespace qecopt {

struct OptConfig {
    int max_iters = 500;
    double grad_tol = 1e-7;  // on the canonical norm of the Riemannian gradient
    double c1 = 1e-4;
    double tau = 0.5;
    double t0 = 1.0;
    bool use_bb = true;
    stiefel::Retraction retraction = stiefel::Retraction::kQr;
    double lambda = 0.0;
    L1Sign l1_sign = L1Sign::kPenalty;
    std::uint64_t seed = 0;
    int n_starts = 1;
    int max_backtracks = 60;
    double stall_tol = 1e-12;  // |delta J| counted as a stall
    int stall_steps = 5;       // consecutive stalls before stopping
    double rank_cut = linalg::kDefaultRankCut;

    /// Throws ConfigError if a field is out of its domain.
    void validate() const;
};

enum class StopReason { kGradTol, kStalled, kStepUnderflow, kMaxIters };

std::string_view to_string(StopReason reason);

struct TraceEntry {
    double objective;  // cost including the l1 term
    double cost;       // J without regularization
    double grad_norm;
    double step;
};

struct OptResult {
    Matrix frame;  // n x d code frame or (r n) x n recovery stack
    double final_J = 0.0;
    double final_objective = 0.0;
    int iterations = 0;
    std::vector<TraceEntry> trace;
    bool converged = false;
    StopReason stop_reason = StopReason::kMaxIters;
    double wall_time = 0.0;  // seconds
    std::uint64_t seed = 0;
    int redraws = 0;
};

struct BacktrackResult {
    double step = 0.0;
    double value = 0.0;  // phi(step)
    bool ok = false;     // false: no admissible step within max_backtracks shrinks
    int shrinks = 0;
};

/// Largest t in {t_init tau^i} with phi(t) >= phi0 + c1 t slope0
/// (sufficient increase), i <= cfg.max_backtracks. When c1 t slope0 is
/// below the rounding level of phi0, phi(t) > phi0 suffices.
BacktrackResult backtrack(const std::function<double(double)>& phi, double phi0, double slope0,
                          double t_init, const OptConfig& cfg);
BacktrackResult backtrack(const std::function<double(double)>& phi, double phi0, double slope0,
                          const OptConfig& cfg);

/// Two-point step Re<dU, dG> / Re<dG, dG>, clamped to [1e-10, 1e4];
/// returns `fallback` when dG vanishes.
double bb_step(const Matrix& du, const Matrix& dg, double fallback);

/// A smooth-enough objective on a Stiefel manifold, maximized by ascend().
struct Objective {
    struct Value {
        double objective;
        double cost;
    };
    std::function<Value(const Matrix&)> evaluate;
    /// Euclidean gradient of the smooth part of the objective.
    std::function<Matrix(const Matrix&)> egrad;
    /// Optional nonsmooth part (an l1 subgradient). It joins the search
    /// direction but not the two-point step estimate, whose gradient
    /// differences would otherwise jump across the kinks.
    std::function<Matrix(const Matrix&)> subgrad;
};

/// Riemannian gradient ascent with Armijo backtracking and optional
/// Barzilai-Borwein initial steps, starting from the isometry `start`.
OptResult ascend(const Objective& objective, const Matrix& start, const OptConfig& cfg);

/// J (optionally l1-regularized) as an Objective over n x d frames.
Objective code_objective(const KrausMap& noise, const OptConfig& cfg);

/// Maximizes the regularized code cost over V_d(C^n). Without `start` a
/// Haar-random frame is drawn from cfg.seed; degenerate draws are redrawn up
/// to 10 times.
OptResult optimize_code(const KrausMap& noise, Index d, const OptConfig& cfg,
                        const std::optional<CodeFrame>& start = std::nullopt);

struct MultistartResult {
    std::size_t best = 0;
    std::vector<OptResult> runs;  // ordered by seed

    const OptResult& best_run() const { return runs[best]; }
};

/// cfg.n_starts runs with seeds cfg.seed, cfg.seed + 1, ... The best run has
/// the largest final objective; ties go to the smaller ||U||_1, then the
/// smaller seed. Runs execute on up to QECOPT_THREADS threads.
MultistartResult multistart(const KrausMap& noise, Index d, const OptConfig& cfg);

/// Maximizes the recovery cost over V_n(C^{r n}) with r = noise length,
/// starting from the (completed) Petz stack unless `start` is given.
OptResult optimize_recovery(const KrausMap& noise, const CodeFrame& code, const OptConfig& cfg,
                            const std::optional<RecoveryStack>& start = std::nullopt);

/// Worker count from QECOPT_THREADS (defaults to the hardware concurrency).
unsigned worker_threads();

}  // namespace qecopt

#endif  // QECOPT_OPTIMIZER_HPP
