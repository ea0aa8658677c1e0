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


#ifndef QECOPT_SWEEP_HPP
#define QECOPT_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qecopt/channels.hpp"
#include "qecopt/optimizer.hpp"

namespace qecopt {

enum class SweepVar { kP, kQ, kLambda };

enum class RecoveryMode { kPetz, kOptimized };

std::string_view to_string(SweepVar var);
std::string_view to_string(RecoveryMode mode);

struct CodeEntry {
    enum class Kind { kOptimize, kFixture, kFile, kUncorrected };
    Kind kind = Kind::kOptimize;
    std::string label;
    std::string source;            // fixture name or file path
    std::optional<double> anchor;  // kOptimize: value of the swept variable to optimize at
    bool per_point = false;        // kOptimize: reoptimize at every grid value
};

struct SweepConfig {
    std::string experiment = "sweep";
    NoiseSpec noise;
    SweepVar var = SweepVar::kP;
    std::vector<double> grid;
    std::vector<CodeEntry> codes;
    std::vector<RecoveryMode> recovery{RecoveryMode::kPetz};
    OptConfig optimizer;
    Index d = 2;
    std::string out;
    bool record_wall_time = true;

    void validate() const;
};

OptConfig opt_config_from_json(const nlohmann::json& j, OptConfig base = {});

SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::string& path);

struct SweepRow {
    std::string experiment;
    double p = 0.0;
    double q = 0.0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    std::string code_label;
    std::string recovery;
    double J = 0.0;
    double fidelity = 0.0;
    double wall_time_s = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace qecopt

#endif  // QECOPT_SWEEP_HPP
