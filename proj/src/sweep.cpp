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


#include "qecopt/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "qecopt/codes.hpp"
#include "qecopt/errors.hpp"
#include "qecopt/qec.hpp"
#include "qecopt/serialization.hpp"

namespace qecopt {

using nlohmann::json;

namespace {

double number_field(const json& j, const char* key, const std::string& where, double fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw SchemaError(where + "." + key, "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw SchemaError(where + "." + key, "non-finite value");
    return v;
}

long long integer_field(const json& j, const char* key, const std::string& where,
                        long long fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) throw SchemaError(where + "." + key, "expected an integer");
    return it->get<long long>();
}

std::string string_field(const json& j, const char* key, const std::string& where,
                         const std::string& fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) throw SchemaError(where + "." + key, "expected a string");
    return it->get<std::string>();
}

bool bool_field(const json& j, const char* key, const std::string& where, bool fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) throw SchemaError(where + "." + key, "expected true or false");
    return it->get<bool>();
}

void check_unit_interval(double v, const std::string& field) {
    if (!(v >= 0.0 && v <= 1.0)) throw SchemaError(field, "must lie in [0, 1]");
}

NoiseSpec noise_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("noise", "expected an object");
    NoiseSpec spec;
    const auto family = j.find("family");
    if (family == j.end() || !family->is_string()) throw SchemaError("noise.family", "missing family name");
    try {
        spec.family = parse_noise_family(family->get<std::string>());
    } catch (const ConfigError& e) {
        throw SchemaError("noise.family", e.what());
    }
    spec.qubits = static_cast<int>(integer_field(j, "qubits", "noise", spec.qubits));
    spec.p = number_field(j, "p", "noise", spec.p);
    spec.q = number_field(j, "q", "noise", spec.q);
    spec.path = string_field(j, "path", "noise", "");
    if (spec.qubits < 1) throw SchemaError("noise.qubits", "must be >= 1");
    check_unit_interval(spec.p, "noise.p");
    check_unit_interval(spec.q, "noise.q");
    if (spec.family == NoiseFamily::kFromFile && spec.path.empty()) {
        throw SchemaError("noise.path", "from_file noise needs a path");
    }
    return spec;
}

// Grid values generated from start/stop/step are snapped to 12 decimals so
// that 0.1 * 3 prints as 0.3.
double snap(double v) { return std::round(v * 1e12) / 1e12; }

std::vector<double> grid_from_json(const json& j) {
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_array()) throw SchemaError("sweep.grid", "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!g[i].is_number()) {
                throw SchemaError("sweep.grid[" + std::to_string(i) + "]", "expected a number");
            }
            out.push_back(g[i].get<double>());
        }
        return out;
    }
    if (j.contains("start") || j.contains("stop") || j.contains("step")) {
        const double start = number_field(j, "start", "sweep", 0.0);
        const double stop = number_field(j, "stop", "sweep", start);
        const double step = number_field(j, "step", "sweep", 0.0);
        if (!(step > 0.0)) throw SchemaError("sweep.step", "must be > 0");
        if (stop < start) throw SchemaError("sweep.stop", "must be >= start");
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> out;
        for (long long i = 0; i < count; ++i) out.push_back(snap(start + static_cast<double>(i) * step));
        return out;
    }
    throw SchemaError("sweep.grid", "missing field");
}

CodeEntry code_entry_from_json(const json& j, std::size_t index) {
    const std::string where = "codes[" + std::to_string(index) + "]";
    CodeEntry entry;
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "optimize") {
            entry.kind = CodeEntry::Kind::kOptimize;
            entry.label = "optimized";
        } else if (name == "uncorrected") {
            entry.kind = CodeEntry::Kind::kUncorrected;
            entry.label = "uncorrected";
        } else {
            entry.kind = CodeEntry::Kind::kFixture;
            entry.source = name;
            entry.label = name;
        }
        return entry;
    }
    if (!j.is_object()) throw SchemaError(where, "expected a string or an object");
    if (j.contains("optimize")) {
        entry.kind = CodeEntry::Kind::kOptimize;
        entry.label = "optimized";
        const json& o = j["optimize"];
        if (o.is_object()) {
            if (o.contains("anchor")) entry.anchor = number_field(o, "anchor", where + ".optimize", 0.0);
            entry.per_point = bool_field(o, "per_point", where + ".optimize", false);
        } else if (!o.is_boolean() || !o.get<bool>()) {
            throw SchemaError(where + ".optimize", "expected true or an object");
        }
    } else if (j.contains("fixture")) {
        entry.kind = CodeEntry::Kind::kFixture;
        entry.source = string_field(j, "fixture", where, "");
        entry.label = entry.source;
    } else if (j.contains("file")) {
        entry.kind = CodeEntry::Kind::kFile;
        entry.source = string_field(j, "file", where, "");
        entry.label = entry.source;
    } else if (j.contains("uncorrected")) {
        entry.kind = CodeEntry::Kind::kUncorrected;
        entry.label = "uncorrected";
    } else {
        throw SchemaError(where, "expected one of optimize, fixture, file, uncorrected");
    }
    entry.label = string_field(j, "label", where, entry.label);
    return entry;
}

RecoveryMode recovery_from_string(const std::string& s, const std::string& field) {
    if (s == "petz") return RecoveryMode::kPetz;
    if (s == "optimized") return RecoveryMode::kOptimized;
    throw SchemaError(field, "expected \"petz\" or \"optimized\"");
}

std::string format_number(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Noise spec and lambda in effect at one value of the swept variable.
struct Point {
    NoiseSpec noise;
    double lambda;
};

Point point_at(const SweepConfig& cfg, double value) {
    Point pt{cfg.noise, cfg.optimizer.lambda};
    switch (cfg.var) {
        case SweepVar::kP:
            pt.noise.p = value;
            break;
        case SweepVar::kQ:
            pt.noise.q = value;
            break;
        case SweepVar::kLambda:
            pt.lambda = value;
            break;
    }
    return pt;
}

struct Optimized {
    CodeFrame frame;
    std::uint64_t seed;
};

Optimized optimize_at(const SweepConfig& cfg, const Point& pt) {
    OptConfig oc = cfg.optimizer;
    oc.lambda = pt.lambda;
    const auto result = multistart(build_noise(pt.noise), cfg.d, oc);
    return {CodeFrame(result.best_run().frame), result.best_run().seed};
}

}  // namespace

std::string_view to_string(SweepVar var) {
    switch (var) {
        case SweepVar::kP:
            return "p";
        case SweepVar::kQ:
            return "q";
        case SweepVar::kLambda:
            return "lambda";
    }
    return "unknown";
}

std::string_view to_string(RecoveryMode mode) {
    return mode == RecoveryMode::kPetz ? "petz" : "optimized";
}

void SweepConfig::validate() const {
    if (grid.empty()) throw SchemaError("sweep.grid", "must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::string field = "sweep.grid[" + std::to_string(i) + "]";
        if (!std::isfinite(grid[i])) throw SchemaError(field, "non-finite value");
        if (var == SweepVar::kLambda) {
            if (grid[i] < 0.0) throw SchemaError(field, "lambda must be >= 0");
        } else {
            check_unit_interval(grid[i], field);
        }
    }
    if (codes.empty()) throw SchemaError("codes", "must not be empty");
    if (recovery.empty()) throw SchemaError("recovery", "must not be empty");
    if (d < 1) throw SchemaError("d", "must be >= 1");
    for (std::size_t i = 0; i < codes.size(); ++i) {
        const auto& c = codes[i];
        const std::string where = "codes[" + std::to_string(i) + "]";
        if (c.anchor && var != SweepVar::kLambda) {
            if (!(*c.anchor >= 0.0 && *c.anchor <= 1.0)) {
                throw SchemaError(where + ".optimize.anchor", "must lie in [0, 1]");
            }
        }
        if (c.kind == CodeEntry::Kind::kUncorrected && noise.family == NoiseFamily::kFromFile) {
            throw SchemaError(where, "no uncorrected reference for file-loaded noise");
        }
        if ((c.kind == CodeEntry::Kind::kFixture || c.kind == CodeEntry::Kind::kFile) &&
            c.source.empty()) {
            throw SchemaError(where, "empty code source");
        }
    }
    try {
        optimizer.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const ConfigError& e) {
        throw SchemaError("optimizer", e.what());
    }
}

OptConfig opt_config_from_json(const json& j, OptConfig base) {
    if (!j.is_object()) throw SchemaError("optimizer", "expected an object");
    const std::string w = "optimizer";
    base.max_iters = static_cast<int>(integer_field(j, "max_iters", w, base.max_iters));
    base.grad_tol = number_field(j, "grad_tol", w, base.grad_tol);
    base.c1 = number_field(j, "c1", w, base.c1);
    base.tau = number_field(j, "tau", w, base.tau);
    base.t0 = number_field(j, "t0", w, base.t0);
    base.use_bb = bool_field(j, "use_bb", w, base.use_bb);
    base.lambda = number_field(j, "lambda", w, base.lambda);
    base.n_starts = static_cast<int>(integer_field(j, "starts", w, base.n_starts));
    base.max_backtracks = static_cast<int>(integer_field(j, "max_backtracks", w, base.max_backtracks));
    base.rank_cut = number_field(j, "rank_cut", w, base.rank_cut);
    const long long seed = integer_field(j, "seed", w, static_cast<long long>(base.seed));
    if (seed < 0) throw SchemaError("optimizer.seed", "must be >= 0");
    base.seed = static_cast<std::uint64_t>(seed);
    const std::string retraction = string_field(j, "retraction", w, "");
    if (retraction == "qr") {
        base.retraction = stiefel::Retraction::kQr;
    } else if (retraction == "exp") {
        base.retraction = stiefel::Retraction::kExp;
    } else if (!retraction.empty()) {
        throw SchemaError("optimizer.retraction", "expected \"qr\" or \"exp\"");
    }
    const std::string sign = string_field(j, "l1_sign", w, "");
    if (sign == "penalty") {
        base.l1_sign = L1Sign::kPenalty;
    } else if (sign == "bonus") {
        base.l1_sign = L1Sign::kBonus;
    } else if (!sign.empty()) {
        throw SchemaError("optimizer.l1_sign", "expected \"penalty\" or \"bonus\"");
    }
    try {
        base.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const ConfigError& e) {
        throw SchemaError("optimizer", e.what());
    }
    return base;
}

SweepConfig sweep_config_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("<root>", "expected an object");
    SweepConfig cfg;
    cfg.experiment = string_field(j, "experiment", "", cfg.experiment);
    if (!j.contains("noise")) throw SchemaError("noise", "missing field");
    cfg.noise = noise_from_json(j["noise"]);

    if (!j.contains("sweep") || !j["sweep"].is_object()) throw SchemaError("sweep", "missing object");
    const json& sw = j["sweep"];
    const std::string var = string_field(sw, "var", "sweep", "");
    if (var == "p") {
        cfg.var = SweepVar::kP;
    } else if (var == "q") {
        cfg.var = SweepVar::kQ;
    } else if (var == "lambda") {
        cfg.var = SweepVar::kLambda;
    } else {
        throw SchemaError("sweep.var", "expected \"p\", \"q\" or \"lambda\"");
    }
    cfg.grid = grid_from_json(sw);

    if (!j.contains("codes") || !j["codes"].is_array()) throw SchemaError("codes", "expected a list");
    for (std::size_t i = 0; i < j["codes"].size(); ++i) {
        cfg.codes.push_back(code_entry_from_json(j["codes"][i], i));
    }

    if (j.contains("recovery")) {
        const json& r = j["recovery"];
        cfg.recovery.clear();
        if (r.is_string()) {
            cfg.recovery.push_back(recovery_from_string(r.get<std::string>(), "recovery"));
        } else if (r.is_array()) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                const std::string field = "recovery[" + std::to_string(i) + "]";
                if (!r[i].is_string()) throw SchemaError(field, "expected a string");
                cfg.recovery.push_back(recovery_from_string(r[i].get<std::string>(), field));
            }
        } else {
            throw SchemaError("recovery", "expected a string or a list");
        }
    }
    if (j.contains("optimizer")) cfg.optimizer = opt_config_from_json(j["optimizer"]);
    cfg.d = static_cast<Index>(integer_field(j, "d", "", cfg.d));
    cfg.out = string_field(j, "out", "", "");
    cfg.record_wall_time = bool_field(j, "record_wall_time", "", true);
    cfg.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    return sweep_config_from_json(read_json_file(path));
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    const double d2 = static_cast<double>(cfg.d * cfg.d);

    // Fixed codes are resolved once, anchored optimizations run once.
    std::vector<std::optional<Optimized>> fixed(cfg.codes.size());
    for (std::size_t c = 0; c < cfg.codes.size(); ++c) {
        const auto& entry = cfg.codes[c];
        switch (entry.kind) {
            case CodeEntry::Kind::kFixture:
                fixed[c] = Optimized{known_code(entry.source).frame, cfg.optimizer.seed};
                break;
            case CodeEntry::Kind::kFile:
                fixed[c] = Optimized{load_code(entry.source), cfg.optimizer.seed};
                break;
            case CodeEntry::Kind::kOptimize:
                if (!entry.per_point && cfg.var != SweepVar::kLambda) {
                    const double anchor = entry.anchor.value_or(
                        cfg.var == SweepVar::kP ? cfg.noise.p : cfg.noise.q);
                    fixed[c] = optimize_at(cfg, point_at(cfg, anchor));
                }
                break;
            case CodeEntry::Kind::kUncorrected:
                break;
        }
        if (fixed[c] && fixed[c]->frame.d() != cfg.d) {
            throw SchemaError("codes[" + std::to_string(c) + "]",
                              "code dimension " + std::to_string(fixed[c]->frame.d()) +
                                  " does not match d = " + std::to_string(cfg.d));
        }
    }

    std::vector<SweepRow> rows;
    for (const double value : cfg.grid) {
        const Point pt = point_at(cfg, value);
        const KrausMap noise = build_noise(pt.noise);
        for (std::size_t c = 0; c < cfg.codes.size(); ++c) {
            const auto& entry = cfg.codes[c];
            SweepRow base;
            base.experiment = cfg.experiment;
            base.p = pt.noise.p;
            base.q = pt.noise.q;
            base.lambda = pt.lambda;
            base.seed = cfg.optimizer.seed;
            base.code_label = entry.label;

            if (entry.kind == CodeEntry::Kind::kUncorrected) {
                const auto start = clock::now();
                const auto ref = single_qubit_reference(pt.noise.family, pt.noise.p);
                const double f = cro_fidelity(ref, CodeFrame(Matrix::Identity(2, 2)));
                SweepRow row = base;
                row.recovery = "none";
                row.fidelity = f;
                row.J = 4.0 * f;
                row.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
                rows.push_back(row);
                continue;
            }

            const auto start = clock::now();
            const Optimized code = fixed[c] ? *fixed[c] : optimize_at(cfg, pt);
            const double setup = std::chrono::duration<double>(clock::now() - start).count();
            if (code.frame.n() != noise.dim()) {
                throw SchemaError("codes[" + std::to_string(c) + "]",
                                  "code has n = " + std::to_string(code.frame.n()) +
                                      " but the noise acts on dimension " +
                                      std::to_string(noise.dim()));
            }
            for (const auto mode : cfg.recovery) {
                const auto t = clock::now();
                SweepRow row = base;
                row.seed = code.seed;
                row.recovery = std::string(to_string(mode));
                if (mode == RecoveryMode::kPetz) {
                    row.J = cost_J(noise, code.frame);
                } else {
                    OptConfig oc = cfg.optimizer;
                    oc.lambda = 0.0;
                    row.J = optimize_recovery(noise, code.frame, oc).final_J;
                }
                row.fidelity = row.J / d2;
                row.wall_time_s = setup + std::chrono::duration<double>(clock::now() - t).count();
                rows.push_back(row);
            }
        }
    }
    if (!cfg.record_wall_time) {
        for (auto& row : rows) row.wall_time_s = 0.0;
    }
    return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "experiment,p,q,lambda,seed,code_label,recovery,J,fidelity,wall_time_s\n";
    for (const auto& r : rows) {
        os << csv_field(r.experiment) << ',' << format_number(r.p, "%.10g") << ','
           << format_number(r.q, "%.10g") << ',' << format_number(r.lambda, "%.10g") << ','
           << r.seed << ',' << csv_field(r.code_label) << ',' << r.recovery << ','
           << format_number(r.J, "%.12f") << ',' << format_number(r.fidelity, "%.12f") << ','
           << format_number(r.wall_time_s, "%.6f") << '\n';
    }
}

}  // namespace qecopt
