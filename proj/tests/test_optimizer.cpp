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


#include <cmath>
#include <cstdlib>
#include <limits>

#include <gtest/gtest.h>

#include "qecopt/codes.hpp"
#include "qecopt/errors.hpp"
#include "qecopt/gradients.hpp"
#include "qecopt/optimizer.hpp"
#include "qecopt/stiefel.hpp"
#include "support.hpp"

namespace qecopt {
namespace {

using testing::noise_model;
using testing::Rng;

void expect_monotone(const OptResult& run) {
    for (std::size_t i = 1; i < run.trace.size(); ++i) {
        // Accepted steps never lose more than the drift repair's rounding.
        EXPECT_GE(run.trace[i].objective, run.trace[i - 1].objective - 1e-12) << "step " << i;
    }
}

TEST(OptConfig, DefaultsAreValid) {
    const OptConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.max_iters, 500);
    EXPECT_EQ(cfg.grad_tol, 1e-7);
    EXPECT_EQ(cfg.c1, 1e-4);
    EXPECT_EQ(cfg.tau, 0.5);
    EXPECT_EQ(cfg.t0, 1.0);
    EXPECT_TRUE(cfg.use_bb);
    EXPECT_EQ(cfg.retraction, stiefel::Retraction::kQr);
}

TEST(OptConfig, RejectsOutOfDomainFields) {
    auto bad = [](auto mutate) {
        OptConfig cfg;
        mutate(cfg);
        EXPECT_THROW(cfg.validate(), ConfigError);
    };
    bad([](OptConfig& c) { c.c1 = 0.0; });
    bad([](OptConfig& c) { c.c1 = 1.0; });
    bad([](OptConfig& c) { c.tau = 1.0; });
    bad([](OptConfig& c) { c.tau = 0.0; });
    bad([](OptConfig& c) { c.t0 = 0.0; });
    bad([](OptConfig& c) { c.lambda = -0.1; });
    bad([](OptConfig& c) { c.n_starts = 0; });
    bad([](OptConfig& c) { c.max_iters = -1; });
    bad([](OptConfig& c) { c.grad_tol = std::nan(""); });
}

TEST(StopReason, Names) {
    EXPECT_EQ(to_string(StopReason::kGradTol), "grad_tol");
    EXPECT_EQ(to_string(StopReason::kStalled), "stalled");
    EXPECT_EQ(to_string(StopReason::kStepUnderflow), "step_underflow");
    EXPECT_EQ(to_string(StopReason::kMaxIters), "max_iters");
}

TEST(Backtrack, LinearAcceptsInitialStep) {
    const OptConfig cfg;
    const auto r = backtrack([](double t) { return 1.0 + 2.0 * t; }, 1.0, 2.0, cfg);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.step, cfg.t0);
    EXPECT_EQ(r.shrinks, 0);
    EXPECT_EQ(r.value, 3.0);
}

TEST(Backtrack, QuadraticAcceptsLargestAdmissibleStep) {
    OptConfig cfg;
    for (double slope : {0.5, 1.0, 3.0, 7.5}) {
        const double phi0 = 2.0;
        const auto phi = [&](double t) { return phi0 + slope * t - 10.0 * t * t; };
        const auto r = backtrack(phi, phi0, slope, cfg);
        ASSERT_TRUE(r.ok);
        EXPECT_GE(phi(r.step), phi0 + cfg.c1 * r.step * slope);
        EXPECT_LE(r.step, slope * (1.0 - cfg.c1) / 10.0);
        // The previous trial step was inadmissible.
        if (r.shrinks > 0) {
            const double bigger = r.step / cfg.tau;
            EXPECT_LT(phi(bigger), phi0 + cfg.c1 * bigger * slope);
        }
        EXPECT_NEAR(r.step, cfg.t0 * std::pow(cfg.tau, r.shrinks), 1e-15);
    }
}

TEST(Backtrack, WrongDirectionUnderflows) {
    OptConfig cfg;
    const auto r = backtrack([](double t) { return 1.0 - t; }, 1.0, 1.0, cfg);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.shrinks, cfg.max_backtracks);
}

TEST(Backtrack, CustomInitialStepAndInfiniteValues) {
    OptConfig cfg;
    const auto phi = [](double t) {
        return t > 0.3 ? -std::numeric_limits<double>::infinity() : 1.0 + t;
    };
    const auto r = backtrack(phi, 1.0, 1.0, 4.0, cfg);
    ASSERT_TRUE(r.ok);
    EXPECT_EQ(r.step, 0.25);
}

TEST(BbStep, Examples) {
    Rng rng(110);
    const Matrix g = rng.matrix(4, 2);
    EXPECT_NEAR(bb_step(g, g, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(bb_step(2.0 * g, g, 1.0), 2.0, 1e-15);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix du = rng.matrix(5, 2);
        const Matrix dg = rng.matrix(5, 2);
        const double raw = (du.adjoint() * dg).trace().real() / (dg.adjoint() * dg).trace().real();
        const double expected = std::clamp(raw, 1e-10, 1e4);
        EXPECT_NEAR(bb_step(du, dg, 1.0), expected, 1e-12 * std::max(1.0, expected));
    }
}

TEST(BbStep, ClampsAndFallsBack) {
    Rng rng(111);
    const Matrix g = rng.matrix(3, 2);
    EXPECT_EQ(bb_step(g, Matrix::Zero(3, 2), 0.75), 0.75);
    EXPECT_EQ(bb_step(-g, g, 1.0), 1e-10);
    EXPECT_EQ(bb_step(1e6 * g, g, 1.0), 1e4);
}

TEST(OptimizeCode, IdentityChannelConvergesImmediately) {
    OptConfig cfg;
    cfg.seed = 3;
    const auto run = optimize_code(KrausMap::identity(8), 2, cfg);
    EXPECT_NEAR(run.trace.front().cost, 4.0, 1e-12);
    EXPECT_EQ(run.iterations, 0);
    EXPECT_TRUE(run.converged);
    EXPECT_EQ(run.stop_reason, StopReason::kGradTol);
}

TEST(OptimizeCode, RejectsBadDimensionsAndStarts) {
    const OptConfig cfg;
    const KrausMap noise = noise_model(NoiseFamily::kBitflipIndependent, 3, 0.1);
    EXPECT_THROW(optimize_code(noise, 0, cfg), ConfigError);
    EXPECT_THROW(optimize_code(noise, 9, cfg), ConfigError);
    EXPECT_THROW(optimize_code(noise, 2, cfg, CodeFrame(Matrix::Identity(8, 3))), ConfigError);
    Matrix lower = Matrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    EXPECT_THROW(optimize_code(KrausMap({lower}), 1, cfg, CodeFrame(Matrix::Identity(2, 1))),
                 NumericalError);
}

TEST(OptimizeCode, FindsPerfectCodesForIndependentBitflip) {
    OptConfig cfg;
    cfg.n_starts = 20;
    cfg.seed = 1;
    const auto ms = multistart(noise_model(NoiseFamily::kBitflipIndependent, 3, 0.25), 2, cfg);
    ASSERT_EQ(ms.runs.size(), 20u);
    EXPECT_GE(ms.best_run().final_J, 4.0 - 1e-6);
    for (const auto& run : ms.runs) {
        EXPECT_GT(run.final_J, 3.99) << "seed " << run.seed;
        EXPECT_LE(run.final_J, 4.0 + 1e-6);
        expect_monotone(run);
        EXPECT_LT(linalg::isometry_deviation(run.frame), 1e-9);
    }
}

TEST(OptimizeCode, AmplitudeDampingReachesKnownOptimum) {
    OptConfig cfg;
    cfg.n_starts = 20;
    const auto ms = multistart(noise_model(NoiseFamily::kAmpdampFull, 4, 0.25), 2, cfg);
    EXPECT_NEAR(ms.best_run().final_J / 4.0, 0.9034, 0.01);
    for (const auto& run : ms.runs) {
        expect_monotone(run);
        EXPECT_LE(run.final_J, 4.0 + 1e-6);
    }
}

TEST(OptimizeCode, PropertyMonotoneFeasibleBoundedOnRandomChannels) {
    Rng rng(112);
    for (int trial = 0; trial < 15; ++trial) {
        const Index n = rng.integer(3, 6);
        const Index d = rng.integer(1, 2);
        const KrausMap noise = rng.channel(n, rng.integer(1, 4));
        OptConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        cfg.max_iters = 100;
        cfg.lambda = trial % 3 == 0 ? 0.01 : 0.0;
        cfg.retraction = trial % 2 ? stiefel::Retraction::kExp : stiefel::Retraction::kQr;
        const auto run = optimize_code(noise, d, cfg);
        expect_monotone(run);
        EXPECT_LT(linalg::isometry_deviation(run.frame), 1e-8);
        EXPECT_LE(run.final_J, static_cast<double>(d * d) + 1e-6);
        EXPECT_GE(run.final_objective, run.trace.front().objective);
        EXPECT_EQ(run.trace.size(), static_cast<std::size_t>(run.iterations) + 1);
    }
}

TEST(OptimizeCode, DeterministicGivenSeed) {
    OptConfig cfg;
    cfg.seed = 42;
    cfg.max_iters = 60;
    const KrausMap noise = noise_model(NoiseFamily::kAmpdampFull, 3, 0.2);
    const auto a = optimize_code(noise, 2, cfg);
    const auto b = optimize_code(noise, 2, cfg);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].objective, b.trace[i].objective);
        EXPECT_EQ(a.trace[i].step, b.trace[i].step);
    }
    EXPECT_EQ(a.frame, b.frame);
}

TEST(OptimizeCode, ResultIsGaugeRobust) {
    Rng rng(113);
    OptConfig cfg;
    cfg.seed = 5;
    const KrausMap noise = noise_model(NoiseFamily::kAmpdampFull, 3, 0.25);
    const auto run = optimize_code(noise, 2, cfg);
    const Matrix rotated = run.frame * rng.unitary(2);
    EXPECT_NEAR(cost_J(noise, CodeFrame(rotated)), cost_J(noise, CodeFrame(run.frame)), 1e-10);
}

TEST(OptimizeCode, StartFrameIsUsed) {
    const KrausMap noise = noise_model(NoiseFamily::kBitflipIndependent, 3, 0.2);
    const CodeFrame start(known_code("repetition3").frame);
    OptConfig cfg;
    const auto run = optimize_code(noise, 2, cfg, start);
    EXPECT_EQ(run.iterations, 0);
    EXPECT_NEAR(run.final_J, 4.0, 1e-9);
}

TEST(OptimizeCode, L1PenaltyFavorsSparseFrames) {
    OptConfig cfg;
    cfg.n_starts = 20;
    cfg.lambda = 0.1;
    const auto ms = multistart(noise_model(NoiseFamily::kBitflipIndependent, 3, 0.1), 2, cfg);
    const auto& best = ms.best_run();
    EXPECT_NEAR(best.final_objective, best.final_J - 0.1 * l1_norm(best.frame), 1e-9);
    // Unit-norm columns have ||u||_1 >= 1, with equality only for basis kets.
    EXPECT_LT(l1_norm(best.frame), 2.0 + 1e-3);
    EXPECT_GT(best.final_J, 3.99);
}

TEST(Multistart, SingleStartMatchesOptimizeCode) {
    OptConfig cfg;
    cfg.seed = 9;
    cfg.max_iters = 80;
    const KrausMap noise = noise_model(NoiseFamily::kAmpdampFull, 3, 0.3);
    const auto ms = multistart(noise, 2, cfg);
    ASSERT_EQ(ms.runs.size(), 1u);
    const auto single = optimize_code(noise, 2, cfg);
    EXPECT_EQ(ms.best_run().frame, single.frame);
    EXPECT_EQ(ms.best_run().final_J, single.final_J);
}

TEST(Multistart, SeedsAreConsecutiveAndBestFollowsTieRule) {
    OptConfig cfg;
    cfg.seed = 100;
    cfg.n_starts = 6;
    // Every frame is optimal under the identity channel, so ties are resolved
    // by the l1 norm and then by the seed.
    const auto ms = multistart(KrausMap::identity(4), 2, cfg);
    ASSERT_EQ(ms.runs.size(), 6u);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < ms.runs.size(); ++i) {
        EXPECT_EQ(ms.runs[i].seed, 100u + i);
        const auto& a = ms.runs[i];
        const auto& b = ms.runs[expected];
        if (a.final_objective > b.final_objective + 1e-9 ||
            (std::abs(a.final_objective - b.final_objective) <= 1e-9 &&
             l1_norm(a.frame) < l1_norm(b.frame))) {
            expected = i;
        }
    }
    EXPECT_EQ(ms.best, expected);
}

TEST(Multistart, DeterministicAcrossCalls) {
    OptConfig cfg;
    cfg.n_starts = 4;
    cfg.max_iters = 50;
    const KrausMap noise = noise_model(NoiseFamily::kBitflipFull, 3, 0.25);
    const auto a = multistart(noise, 2, cfg);
    const auto b = multistart(noise, 2, cfg);
    EXPECT_EQ(a.best, b.best);
    for (std::size_t i = 0; i < a.runs.size(); ++i) EXPECT_EQ(a.runs[i].frame, b.runs[i].frame);
}

TEST(OptimizeRecovery, PetzIsOptimalForCorrectablePairs) {
    const KrausMap noise = noise_model(NoiseFamily::kBitflipIndependent, 3, 0.25);
    const CodeFrame code(known_code("repetition3").frame);
    const auto run = optimize_recovery(noise, code, OptConfig{});
    EXPECT_EQ(run.iterations, 0);
    EXPECT_LT(run.trace.front().grad_norm, 1e-6);
    EXPECT_NEAR(run.final_J, 4.0, 1e-9);
}

class RecoveryImproves : public ::testing::TestWithParam<NoiseFamily> {};

TEST_P(RecoveryImproves, NoWorseThanPetzAndStaysTracePreserving) {
    const KrausMap noise = noise_model(GetParam(), 3, 0.25);
    OptConfig cfg;
    cfg.n_starts = 5;
    const CodeFrame code(multistart(noise, 2, cfg).best_run().frame);
    const double petz = cost_J(noise, code);
    const auto run = optimize_recovery(noise, code, OptConfig{});
    EXPECT_NEAR(run.trace.front().cost, recovery_cost(noise, code, petz_stack(noise, code)), 1e-9);
    EXPECT_GE(run.final_J, petz - 1e-9);
    expect_monotone(run);
    EXPECT_LT(linalg::isometry_deviation(run.frame), 1e-9);
    EXPECT_EQ(run.frame.rows(), static_cast<Index>(noise.size()) * 8);
}

INSTANTIATE_TEST_SUITE_P(FullModels, RecoveryImproves,
                         ::testing::Values(NoiseFamily::kBitflipFull, NoiseFamily::kAmpdampFull),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Backtrack, RoundingLevelGainNeedsStrictIncrease) {
    OptConfig cfg;
    // Predicted gains sit below the rounding level of phi0 = 1e6 after a
    // few shrinks; a flat phi is still rejected, a rising one accepted.
    EXPECT_FALSE(backtrack([](double) { return 1e6; }, 1e6, 1e-8, cfg).ok);
    const auto r = backtrack([](double t) { return t < 1e-3 ? 1e6 + 1e-9 : 0.0; }, 1e6, 1e-8, cfg);
    EXPECT_TRUE(r.ok);
    EXPECT_LT(r.step, 1e-3);
}

TEST(OptimizeRecovery, BeatsPetzForLeungUnderAmplitudeDamping) {
    const KrausMap noise = noise_model(NoiseFamily::kAmpdampFull, 4, 0.25);
    const CodeFrame code(known_code("leung4").frame);
    const auto run = optimize_recovery(noise, code, OptConfig{});
    EXPECT_GT(run.final_J, cost_J(noise, code) + 1e-3);
}

TEST(OptimizeRecovery, RejectsMismatchedStart) {
    const KrausMap noise = noise_model(NoiseFamily::kBitflipIndependent, 3, 0.25);
    const CodeFrame code(known_code("repetition3").frame);
    Rng rng(114);
    EXPECT_THROW(optimize_recovery(noise, code, OptConfig{}, RecoveryStack(rng.isometry(8, 4), 4)),
                 ConfigError);
}

TEST(WorkerThreads, ReadsEnvironment) {
    ::setenv("QECOPT_THREADS", "3", 1);
    EXPECT_EQ(worker_threads(), 3u);
    ::unsetenv("QECOPT_THREADS");
    EXPECT_GE(worker_threads(), 1u);
}

}  // namespace
}  // namespace qecopt
