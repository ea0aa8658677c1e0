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

#include "qecopt/serialization.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qecopt/channels.hpp"
#include "qecopt/errors.hpp"
#include "qecopt/qec.hpp"
#include "qecopt/stiefel.hpp"

namespace qecopt {

using nlohmann::json;

namespace {

// Rounded amplitudes (e.g. four printed digits) are repaired up to this
// isometry deviation; anything worse is rejected.
constexpr double kCodeRepairTol = 1e-3;

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where.empty() ? key : where + "." + key, "missing field");
    return *it;
}

Index require_dim(const json& j, const char* key) {
    const json& v = require(j, key, "");
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw SchemaError(key, "expected a positive integer");
    }
    return static_cast<Index>(v.get<long long>());
}

Vector column_from_json(const json& j, Index n, const std::string& field) {
    if (!j.is_array() || static_cast<Index>(j.size()) != n) {
        throw SchemaError(field, "expected a list of " + std::to_string(n) + " entries");
    }
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_from_json(j[i], field + "[" + std::to_string(i) + "]");
    return v;
}

}  // namespace

json complex_to_json(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ConfigError("cannot serialize a non-finite value");
    }
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw SchemaError(field, "expected [re, im]");
    }
    const double re = j[0].get<double>();
    const double im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw SchemaError(field, "non-finite value");
    return {re, im};
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& field) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
        throw SchemaError(field, "expected " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        m.row(i) = column_from_json(j[i], cols, field + "[" + std::to_string(i) + "]").transpose();
    }
    return m;
}

json kraus_to_json(const KrausMap& channel) {
    json ops = json::array();
    for (const auto& op : channel.ops()) ops.push_back(matrix_to_json(op));
    return json{{"n", channel.dim()}, {"label", channel.label()}, {"kraus", std::move(ops)}};
}

KrausMap kraus_from_json(const json& j) {
    const Index n = require_dim(j, "n");
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw SchemaError("label", "expected a string");
        label = j["label"].get<std::string>();
    }
    const json& ops = require(j, "kraus", "");
    if (!ops.is_array() || ops.empty()) throw SchemaError("kraus", "expected a non-empty list");
    std::vector<Matrix> mats;
    mats.reserve(ops.size());
    for (std::size_t k = 0; k < ops.size(); ++k) {
        mats.push_back(matrix_from_json(ops[k], n, n, "kraus[" + std::to_string(k) + "]"));
    }
    KrausMap out(std::move(mats), label);
    const double dev = validate(out).tp_deviation;
    if (dev > kLoadedTpWarn) {
        std::clog << "qecopt: warning: loaded Kraus map '" << label
                  << "' deviates from trace preservation by " << dev << "\n";
    }
    return out;
}

json code_to_json(const CodeFrame& code) {
    json cols = json::array();
    for (Index c = 0; c < code.d(); ++c) {
        json col = json::array();
        for (Index i = 0; i < code.n(); ++i) col.push_back(complex_to_json(code.u()(i, c)));
        cols.push_back(std::move(col));
    }
    return json{{"n", code.n()}, {"d", code.d()}, {"columns", std::move(cols)}};
}

CodeFrame code_from_json(const json& j) {
    const Index n = require_dim(j, "n");
    const Index d = require_dim(j, "d");
    if (d > n) throw SchemaError("d", "code dimension exceeds n");
    const json& cols = require(j, "columns", "");
    if (!cols.is_array() || static_cast<Index>(cols.size()) != d) {
        throw SchemaError("columns", "expected " + std::to_string(d) + " columns");
    }
    Matrix u(n, d);
    for (Index c = 0; c < d; ++c) {
        u.col(c) = column_from_json(cols[c], n, "columns[" + std::to_string(c) + "]");
    }
    const double dev = linalg::isometry_deviation(u);
    if (dev > kIsometryTol) {
        if (dev > kCodeRepairTol) {
            throw SchemaError("columns", "codewords are not orthonormal (deviation " +
                                             std::to_string(dev) + ")");
        }
        std::clog << "qecopt: warning: code columns deviate from orthonormality by " << dev
                  << ", repairing\n";
        u = stiefel::renormalize(u);
    }
    return CodeFrame(std::move(u));
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path, std::string("invalid JSON: ") + e.what());
    }
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << j.dump(1) << "\n";
}

KrausMap load_kraus(const std::string& path) { return kraus_from_json(read_json_file(path)); }

void save_kraus(const KrausMap& channel, const std::string& path) {
    write_json_file(kraus_to_json(channel), path);
}

CodeFrame load_code(const std::string& path) { return code_from_json(read_json_file(path)); }

void save_code(const CodeFrame& code, const std::string& path) {
    write_json_file(code_to_json(code), path);
}

}  // namespace qecopt
