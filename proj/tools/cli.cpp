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


#include "cli.hpp"

#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "qecopt/channels.hpp"
#include "qecopt/codes.hpp"
#include "qecopt/errors.hpp"
#include "qecopt/optimizer.hpp"
#include "qecopt/qec.hpp"
#include "qecopt/serialization.hpp"
#include "qecopt/sweep.hpp"

namespace qecopt::cli {

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kNotCorrectable = 1, kConfig = 2, kNumerical = 3 };

struct NoiseArgs {
    std::string family;
    int qubits = 0;
    double p = 0.0;
    double q = 0.0;
    std::string file;

    void attach(CLI::App* app) {
        app->add_option("--family", family, "noise family, e.g. bitflip_independent");
        app->add_option("--qubits", qubits, "number of physical qubits")->check(CLI::PositiveNumber);
        app->add_option("--p", p, "error probability")->check(CLI::Range(0.0, 1.0));
        app->add_option("--q", q, "correlation parameter")->check(CLI::Range(0.0, 1.0));
        app->add_option("--noise", file, "Kraus JSON file (instead of --family)");
    }

    KrausMap build() const {
        if (!file.empty()) {
            if (!family.empty()) throw ConfigError("--noise and --family are mutually exclusive");
            return load_kraus(file);
        }
        if (family.empty()) throw ConfigError("--family or --noise is required");
        NoiseSpec spec;
        spec.family = parse_noise_family(family);
        if (spec.family == NoiseFamily::kFromFile) throw ConfigError("use --noise FILE for file-loaded noise");
        spec.qubits = qubits;
        if (qubits < 1) throw ConfigError("--qubits is required with --family");
        spec.p = p;
        spec.q = q;
        return build_noise(spec);
    }
};

struct OptArgs {
    int max_iters = OptConfig{}.max_iters;
    double grad_tol = OptConfig{}.grad_tol;
    std::string retraction = "qr";
    bool no_bb = false;

    void attach(CLI::App* app) {
        app->add_option("--max-iters", max_iters, "iteration cap per start")->check(CLI::NonNegativeNumber);
        app->add_option("--grad-tol", grad_tol, "stop when the gradient norm falls below this");
        app->add_option("--retraction", retraction, "qr or exp")->check(CLI::IsMember({"qr", "exp"}));
        app->add_flag("--no-bb", no_bb, "always start the line search at t0");
    }

    OptConfig config() const {
        OptConfig cfg;
        cfg.max_iters = max_iters;
        cfg.grad_tol = grad_tol;
        cfg.retraction = retraction == "exp" ? stiefel::Retraction::kExp : stiefel::Retraction::kQr;
        cfg.use_bb = !no_bb;
        return cfg;
    }
};

struct CodeArgs {
    std::string file;
    std::string fixture;

    void attach(CLI::App* app) {
        auto* f = app->add_option("--code", file, "Code JSON file");
        auto* x = app->add_option("--fixture", fixture, "named code, e.g. repetition3");
        f->excludes(x);
    }

    CodeFrame load() const {
        if (!file.empty()) return load_code(file);
        if (!fixture.empty()) return known_code(fixture).frame;
        throw ConfigError("--code or --fixture is required");
    }
};

void require_pairing(const KrausMap& noise, const CodeFrame& code) {
    if (noise.dim() != code.n()) {
        throw ConfigError("code has n = " + std::to_string(code.n()) + " but the noise acts on dimension " +
                          std::to_string(noise.dim()));
    }
}

std::string default_report_path(const std::string& out) {
    const auto dot = out.rfind('.');
    const auto slash = out.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + ".report.json";
    return out.substr(0, dot) + ".report.json";
}

json sparsity_json(const CodeFrame& code, double threshold) {
    json cols = json::array();
    for (const auto& col : sparsity_report(code, threshold)) {
        json entries = json::array();
        for (const auto& e : col) entries.push_back({{"ket", e.label}, {"magnitude", e.magnitude}});
        cols.push_back(entries);
    }
    return cols;
}

int cmd_optimize(const NoiseArgs& noise_args, const OptArgs& opt_args, Index d, int starts,
                 std::uint64_t seed, double lambda, const std::string& l1_sign, const std::string& out_path,
                 std::string report_path, double sparsity_threshold, std::ostream& out) {
    const KrausMap noise = noise_args.build();
    if (d < 1 || d > noise.dim()) {
        throw ConfigError("--d must lie in [1, " + std::to_string(noise.dim()) + "]");
    }
    OptConfig cfg = opt_args.config();
    cfg.n_starts = starts;
    cfg.seed = seed;
    cfg.lambda = lambda;
    cfg.l1_sign = l1_sign == "bonus" ? L1Sign::kBonus : L1Sign::kPenalty;
    cfg.validate();

    const MultistartResult result = multistart(noise, d, cfg);
    const OptResult& best = result.best_run();
    const CodeFrame code(best.frame);
    save_code(code, out_path);

    const double d2 = static_cast<double>(d * d);
    json runs = json::array();
    for (const auto& run : result.runs) {
        runs.push_back({{"seed", run.seed},
                        {"final_J", run.final_J},
                        {"final_objective", run.final_objective},
                        {"iterations", run.iterations},
                        {"stop_reason", std::string(to_string(run.stop_reason))}});
    }
    json trace = {{"iterations", best.iterations},
                  {"converged", best.converged},
                  {"stop_reason", std::string(to_string(best.stop_reason))},
                  {"redraws", best.redraws}};
    if (!best.trace.empty()) {
        trace["initial_J"] = best.trace.front().cost;
        trace["initial_objective"] = best.trace.front().objective;
        trace["final_grad_norm"] = best.trace.back().grad_norm;
    }
    json report = {{"noise", noise.label()},
                   {"n", code.n()},
                   {"d", code.d()},
                   {"final_J", best.final_J},
                   {"fidelity", best.final_J / d2},
                   {"final_objective", best.final_objective},
                   {"lambda", lambda},
                   {"l1_sign", l1_sign},
                   {"l1_norm", l1_norm(code.u())},
                   {"seed", best.seed},
                   {"starts", starts},
                   {"wall_time_s", best.wall_time},
                   {"sparsity_threshold", sparsity_threshold},
                   {"sparsity", sparsity_json(code, sparsity_threshold)},
                   {"trace", trace},
                   {"runs", runs}};
    if (report_path.empty()) report_path = default_report_path(out_path);
    write_json_file(report, report_path);

    out << "final_J " << best.final_J << "\n"
        << "fidelity " << best.final_J / d2 << "\n"
        << "seed " << best.seed << "\n"
        << "code " << out_path << "\n"
        << "report " << report_path << "\n";
    return kOk;
}

int cmd_certify(const NoiseArgs& noise_args, const CodeArgs& code_args, const std::string& recovery_path,
                double tol, std::ostream& out) {
    const KrausMap noise = noise_args.build();
    const CodeFrame code = code_args.load();
    require_pairing(noise, code);
    if (!(tol > 0.0)) throw ConfigError("--tol must be > 0");

    const auto kl = knill_laflamme_check(noise, code, tol);
    const double d2 = static_cast<double>(code.d() * code.d());
    const double J = cost_J(noise, code);
    json report = {{"correctable", kl.correctable},
                   {"kl_deviation", kl.deviation},
                   {"J", J},
                   {"d2", d2},
                   {"fidelity_with_petz", J / d2}};
    if (!recovery_path.empty()) {
        const KrausMap rec = load_kraus(recovery_path);
        if (rec.dim() != code.n()) throw ConfigError("recovery dimension does not match the code");
        report["fidelity_with_recovery"] = recovery_cost(noise, code, RecoveryStack::from_kraus(rec)) / d2;
    }
    out << report.dump(1) << "\n";
    return kl.correctable ? kOk : kNotCorrectable;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override, bool no_timing,
              std::ostream& out) {
    SweepConfig cfg = load_sweep_config(config_path);
    if (!out_override.empty()) cfg.out = out_override;
    if (no_timing) cfg.record_wall_time = false;
    const auto rows = run_sweep(cfg);
    if (cfg.out.empty() || cfg.out == "-") {
        write_csv(rows, out);
        return kOk;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw ConfigError("cannot write '" + cfg.out + "'");
    write_csv(rows, file);
    out << "rows " << rows.size() << "\n"
        << "csv " << cfg.out << "\n";
    return kOk;
}

int cmd_recover_opt(const NoiseArgs& noise_args, const CodeArgs& code_args, const OptArgs& opt_args,
                    const std::string& out_path, std::ostream& out) {
    const KrausMap noise = noise_args.build();
    const CodeFrame code = code_args.load();
    require_pairing(noise, code);
    OptConfig cfg = opt_args.config();
    cfg.validate();

    const double d2 = static_cast<double>(code.d() * code.d());
    const double before = cost_J(noise, code) / d2;
    const OptResult result = optimize_recovery(noise, code, cfg);
    const RecoveryStack rec(result.frame, code.n());
    save_kraus(rec.to_kraus("optimized recovery"), out_path);

    json report = {{"fidelity_petz", before},
                   {"fidelity_optimized", result.final_J / d2},
                   {"kraus_rank", rec.r()},
                   {"iterations", result.iterations},
                   {"stop_reason", std::string(to_string(result.stop_reason))},
                   {"recovery", out_path}};
    out << report.dump(1) << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimize and certify quantum error-correcting subspace codes", "qecopt"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    NoiseArgs noise_args;
    OptArgs opt_args;
    CodeArgs code_args;

    auto* optimize = app.add_subcommand("optimize", "optimize a code for a noise model");
    noise_args.attach(optimize);
    opt_args.attach(optimize);
    Index d = 0;
    int starts = 1;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    std::string l1_sign = "penalty";
    std::string out_path;
    std::string report_path;
    double sparsity_threshold = 1e-3;
    optimize->add_option("--d", d, "code dimension")->required();
    optimize->add_option("--starts", starts, "number of random starts")->check(CLI::PositiveNumber);
    optimize->add_option("--seed", seed, "seed of the first start");
    optimize->add_option("--lambda", lambda, "l1 regularization weight")->check(CLI::NonNegativeNumber);
    optimize->add_option("--l1-sign", l1_sign, "penalty (sparser codes) or bonus")
        ->check(CLI::IsMember({"penalty", "bonus"}));
    optimize->add_option("--out", out_path, "output Code JSON")->required();
    optimize->add_option("--report", report_path, "run report JSON (default: <out>.report.json)");
    optimize->add_option("--sparsity-threshold", sparsity_threshold, "amplitudes above this are reported")
        ->check(CLI::NonNegativeNumber);

    auto* certify = app.add_subcommand("certify", "check exact correctability and Petz fidelity");
    noise_args.attach(certify);
    code_args.attach(certify);
    std::string recovery_path;
    double tol = 1e-9;
    certify->add_option("--recovery", recovery_path, "also evaluate this recovery Kraus JSON");
    certify->add_option("--tol", tol, "Knill-Laflamme tolerance");

    auto* sweep = app.add_subcommand("sweep", "evaluate codes over a parameter grid, write CSV");
    std::string config_path;
    std::string sweep_out;
    bool no_timing = false;
    sweep->add_option("config", config_path, "sweep configuration JSON")->required();
    sweep->add_option("--out", sweep_out, "CSV path (overrides the config; '-' for stdout)");
    sweep->add_flag("--no-timing", no_timing, "write 0 in wall_time_s for reproducible output");

    auto* recover = app.add_subcommand("recover-opt", "optimize the recovery map for a fixed code");
    noise_args.attach(recover);
    code_args.attach(recover);
    opt_args.attach(recover);
    std::string recovery_out;
    recover->add_option("--out", recovery_out, "output recovery Kraus JSON")->required();

    std::vector<const char*> argv{"qecopt"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (optimize->parsed()) {
            return cmd_optimize(noise_args, opt_args, d, starts, seed, lambda, l1_sign, out_path, report_path,
                                sparsity_threshold, out);
        }
        if (certify->parsed()) return cmd_certify(noise_args, code_args, recovery_path, tol, out);
        if (sweep->parsed()) return cmd_sweep(config_path, sweep_out, no_timing, out);
        if (recover->parsed()) return cmd_recover_opt(noise_args, code_args, opt_args, recovery_out, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return kNumerical;
    }
    return kConfig;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace qecopt::cli
