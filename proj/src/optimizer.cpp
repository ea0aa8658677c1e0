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

#include "qecopt/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>
#include <thread>

#include "qecopt/errors.hpp"
#include "qecopt/gradients.hpp"

namespace qecopt {

namespace {

constexpr int kMaxRedraws = 10;
constexpr double kRepairThreshold = 1e-8;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Matrix repair_if_drifted(Matrix u) {
    if (linalg::isometry_deviation(u) > kRepairThreshold) {
        return stiefel::renormalize(u, stiefel::Repair::kPolar);
    }
    return u;
}

}  // namespace

void OptConfig::validate() const {
    if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
    if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be >= 0");
    if (!(c1 > 0.0 && c1 < 1.0)) throw ConfigError("c1 must lie in (0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
    if (!(t0 > 0.0)) throw ConfigError("t0 must be > 0");
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    if (n_starts < 1) throw ConfigError("n_starts must be >= 1");
    if (max_backtracks < 1) throw ConfigError("max_backtracks must be >= 1");
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::kGradTol:
            return "grad_tol";
        case StopReason::kStalled:
            return "stalled";
        case StopReason::kStepUnderflow:
            return "step_underflow";
        case StopReason::kMaxIters:
            return "max_iters";
    }
    return "unknown";
}

BacktrackResult backtrack(const std::function<double(double)>& phi, double phi0, double slope0,
                          double t_init, const OptConfig& cfg) {
    BacktrackResult out;
    // Below this predicted gain the Armijo test only measures rounding noise;
    // there any strict increase is accepted so the gradient keeps shrinking.
    const double noise_floor = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi0));
    double t = t_init;
    for (int i = 0; i <= cfg.max_backtracks; ++i) {
        const double value = phi(t);
        const double gain = cfg.c1 * t * slope0;
        const bool admissible = gain < noise_floor ? value > phi0 : value >= phi0 + gain;
        if (std::isfinite(value) && admissible) {
            out.step = t;
            out.value = value;
            out.ok = true;
            out.shrinks = i;
            return out;
        }
        t *= cfg.tau;
    }
    out.shrinks = cfg.max_backtracks;
    return out;
}

BacktrackResult backtrack(const std::function<double(double)>& phi, double phi0, double slope0,
                          const OptConfig& cfg) {
    return backtrack(phi, phi0, slope0, cfg.t0, cfg);
}

double bb_step(const Matrix& du, const Matrix& dg, double fallback) {
    const double den = dg.squaredNorm();
    if (den == 0.0) return fallback;
    const double num = du.conjugate().cwiseProduct(dg).sum().real();
    return std::clamp(num / den, 1e-10, 1e4);
}

namespace {

// Riemannian gradient of the full objective; `smooth` receives the part
// coming from Objective::egrad alone.
Matrix search_direction(const Objective& objective, const Matrix& u, Matrix& smooth) {
    smooth = stiefel::riemannian_grad(u, objective.egrad(u));
    if (!objective.subgrad) return smooth;
    return smooth + stiefel::riemannian_grad(u, objective.subgrad(u));
}

}  // namespace

OptResult ascend(const Objective& objective, const Matrix& start, const OptConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    OptResult out;
    Matrix u = repair_if_drifted(start);
    Objective::Value val = objective.evaluate(u);
    Matrix smooth;
    Matrix rgrad = search_direction(objective, u, smooth);
    double gnorm = stiefel::canonical_norm(u, rgrad);
    out.trace.push_back({val.objective, val.cost, gnorm, 0.0});

    Matrix u_prev;
    Matrix smooth_prev;
    int stalls = 0;
    out.stop_reason = StopReason::kMaxIters;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        if (gnorm < cfg.grad_tol) {
            out.stop_reason = StopReason::kGradTol;
            break;
        }
        double t_init = cfg.t0;
        if (cfg.use_bb && iter > 0) {
            // Differences of the descent direction -grad, so that the
            // two-point estimate is positive near a maximum.
            const Matrix du = u - u_prev;
            const Matrix dg = smooth_prev - smooth;
            if (du.conjugate().cwiseProduct(dg).sum().real() > 0.0) {
                t_init = bb_step(du, dg, cfg.t0);
            }
        }

        Matrix candidate;
        Objective::Value candidate_val{};
        const auto phi = [&](double t) {
            try {
                candidate = repair_if_drifted(stiefel::retract(cfg.retraction, u, t * rgrad));
                candidate_val = objective.evaluate(candidate);
                return candidate_val.objective;
            } catch (const NumericalError&) {
                return -std::numeric_limits<double>::infinity();
            }
        };
        const BacktrackResult bt = backtrack(phi, val.objective, gnorm * gnorm, t_init, cfg);
        if (!bt.ok) {
            out.stop_reason = StopReason::kStepUnderflow;
            break;
        }

        u_prev = std::move(u);
        smooth_prev = std::move(smooth);
        u = std::move(candidate);
        const double delta = candidate_val.objective - val.objective;
        val = candidate_val;
        rgrad = search_direction(objective, u, smooth);
        gnorm = stiefel::canonical_norm(u, rgrad);
        out.trace.push_back({val.objective, val.cost, gnorm, bt.step});

        stalls = std::abs(delta) < cfg.stall_tol ? stalls + 1 : 0;
        if (stalls >= cfg.stall_steps) {
            out.stop_reason = StopReason::kStalled;
            ++iter;
            break;
        }
    }

    out.frame = std::move(u);
    out.final_objective = val.objective;
    out.final_J = val.cost;
    out.iterations = iter;
    out.converged = out.stop_reason != StopReason::kMaxIters;
    out.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

Objective code_objective(const KrausMap& noise, const OptConfig& cfg) {
    const double reg = l1_sign_factor(cfg.l1_sign) * cfg.lambda;
    const double rank_cut = cfg.rank_cut;
    Objective obj;
    obj.evaluate = [&noise, reg, rank_cut](const Matrix& u) {
        const double j = PetzData(noise, u, rank_cut).cost();
        return Objective::Value{j + reg * l1_norm(u), j};
    };
    obj.egrad = [&noise, reg, rank_cut](const Matrix& u) {
        gradients::CostGradientOptions opts;
        opts.rank_cut = rank_cut;
        return gradients::egrad_cost_J(noise, u, opts).egrad;
    };
    if (reg != 0.0) {
        obj.subgrad = [reg](const Matrix& u) { return gradients::egrad_l1(u, reg); };
    }
    return obj;
}

OptResult optimize_code(const KrausMap& noise, Index d, const OptConfig& cfg,
                        const std::optional<CodeFrame>& start) {
    cfg.validate();
    const Index n = noise.dim();
    if (d < 1 || d > n) {
        throw ConfigError("code dimension d must lie in [1, " + std::to_string(n) + "], got " +
                          std::to_string(d));
    }
    if (start && (start->n() != n || start->d() != d)) {
        throw ConfigError("starting frame shape does not match (n, d)");
    }

    Matrix u0;
    int redraws = 0;
    if (start) {
        u0 = start->u();
        PetzData probe(noise, u0, cfg.rank_cut);  // throws if degenerate
    } else {
        for (;; ++redraws) {
            const std::uint64_t seed = redraws == 0 ? cfg.seed : splitmix64(cfg.seed + redraws);
            u0 = stiefel::haar_isometry(n, d, seed);
            try {
                PetzData probe(noise, u0, cfg.rank_cut);
                break;
            } catch (const NumericalError&) {
                if (redraws + 1 >= kMaxRedraws) {
                    throw NumericalError("N(Pi) degenerate for " + std::to_string(kMaxRedraws) +
                                         " random starting frames");
                }
                std::clog << "qecopt: warning: degenerate starting frame (seed " << cfg.seed
                          << ", attempt " << redraws + 1 << "), redrawing\n";
            }
        }
    }

    OptResult out = ascend(code_objective(noise, cfg), u0, cfg);
    out.seed = cfg.seed;
    out.redraws = redraws;
    return out;
}

unsigned worker_threads() {
    unsigned fallback = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QECOPT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    return fallback;
}

MultistartResult multistart(const KrausMap& noise, Index d, const OptConfig& cfg) {
    cfg.validate();
    const std::size_t runs = static_cast<std::size_t>(cfg.n_starts);
    MultistartResult out;
    out.runs.resize(runs);
    std::vector<std::exception_ptr> errors(runs);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < runs; i = next++) {
            OptConfig run_cfg = cfg;
            run_cfg.seed = cfg.seed + i;
            try {
                out.runs[i] = optimize_code(noise, d, run_cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(runs));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    constexpr double kTie = 1e-9;
    for (std::size_t i = 1; i < runs; ++i) {
        const OptResult& a = out.runs[i];
        const OptResult& b = out.runs[out.best];
        if (a.final_objective > b.final_objective + kTie) {
            out.best = i;
        } else if (std::abs(a.final_objective - b.final_objective) <= kTie &&
                   l1_norm(a.frame) < l1_norm(b.frame) - kTie) {
            out.best = i;
        }
    }
    return out;
}

OptResult optimize_recovery(const KrausMap& noise, const CodeFrame& code, const OptConfig& cfg,
                            const std::optional<RecoveryStack>& start) {
    cfg.validate();
    if (noise.dim() != code.n()) throw ConfigError("noise and code dimensions differ");
    const RecoveryStack r0 = start ? *start : petz_stack(noise, code);
    if (r0.n() != code.n()) throw ConfigError("starting recovery has the wrong dimension");

    Objective obj;
    obj.evaluate = [&](const Matrix& stack) {
        const double j = recovery_cost(noise, code, stack);
        return Objective::Value{j, j};
    };
    obj.egrad = [&](const Matrix& stack) { return gradients::egrad_recovery(noise, code, stack); };

    OptConfig run_cfg = cfg;
    run_cfg.lambda = 0.0;
    OptResult out = ascend(obj, r0.stack(), run_cfg);
    out.seed = cfg.seed;
    return out;
}

}  // namespace qecopt
