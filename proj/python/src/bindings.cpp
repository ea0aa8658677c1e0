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


// Python bindings. Matrices cross the boundary as complex numpy arrays;
// channels as lists of such arrays.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qecopt/channels.hpp"
#include "qecopt/codes.hpp"
#include "qecopt/errors.hpp"
#include "qecopt/optimizer.hpp"
#include "qecopt/qec.hpp"

namespace py = pybind11;
using namespace qecopt;

namespace {

KrausMap to_map(const std::vector<Matrix>& ops) { return KrausMap(ops); }

OptConfig make_config(int starts, std::uint64_t seed, double lam, int max_iters, double grad_tol) {
    OptConfig cfg;
    cfg.n_starts = starts;
    cfg.seed = seed;
    cfg.lambda = lam;
    cfg.max_iters = max_iters;
    cfg.grad_tol = grad_tol;
    cfg.validate();
    return cfg;
}

py::dict run_to_dict(const OptResult& run, Index d) {
    py::list trace;
    for (const auto& t : run.trace) trace.append(t.objective);
    py::dict out;
    out["J"] = run.final_J;
    out["fidelity"] = run.final_J / static_cast<double>(d * d);
    out["objective"] = run.final_objective;
    out["iterations"] = run.iterations;
    out["converged"] = run.converged;
    out["stop_reason"] = std::string(to_string(run.stop_reason));
    out["seed"] = run.seed;
    out["trace"] = trace;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Subspace code optimization on the complex Stiefel manifold";

    // SchemaError derives from ConfigError and maps to the same type.
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def(
        "noise_model",
        [](const std::string& family, int qubits, double p, double q) {
            return build_noise({parse_noise_family(family), qubits, p, q, {}}).ops();
        },
        py::arg("family"), py::arg("qubits"), py::arg("p"), py::arg("q") = 0.0,
        "Kraus operators of a built-in noise family.");

    m.def("known_code_names", &known_code_names);
    m.def(
        "known_code", [](const std::string& name) { return known_code(name).frame.u(); }, py::arg("name"),
        "Isometry (n x d) of a tabulated code.");

    m.def(
        "cost_J", [](const std::vector<Matrix>& noise, const Matrix& u) { return cost_J(to_map(noise), CodeFrame(u)); },
        py::arg("noise"), py::arg("code"));
    m.def(
        "cro_fidelity",
        [](const std::vector<Matrix>& noise, const Matrix& u) { return cro_fidelity(to_map(noise), CodeFrame(u)); },
        py::arg("noise"), py::arg("code"));
    m.def(
        "petz_recovery",
        [](const std::vector<Matrix>& noise, const Matrix& u) {
            return petz_recovery(to_map(noise), CodeFrame(u)).ops();
        },
        py::arg("noise"), py::arg("code"));
    m.def(
        "knill_laflamme",
        [](const std::vector<Matrix>& noise, const Matrix& u, double tol) {
            const auto report = knill_laflamme_check(to_map(noise), CodeFrame(u), tol);
            py::dict out;
            out["correctable"] = report.correctable;
            out["deviation"] = report.deviation;
            out["alpha"] = report.alpha;
            return out;
        },
        py::arg("noise"), py::arg("code"), py::arg("tol") = 1e-9);

    m.def(
        "optimize_code",
        [](const std::vector<Matrix>& noise, Index d, int starts, std::uint64_t seed, double lam, int max_iters,
           double grad_tol) {
            const OptConfig cfg = make_config(starts, seed, lam, max_iters, grad_tol);
            MultistartResult ms;
            {
                py::gil_scoped_release release;
                ms = multistart(to_map(noise), d, cfg);
            }
            py::dict out = run_to_dict(ms.best_run(), d);
            out["code"] = ms.best_run().frame;
            return out;
        },
        py::arg("noise"), py::arg("d"), py::arg("starts") = 1, py::arg("seed") = 0, py::arg("lam") = 0.0,
        py::arg("max_iters") = 500, py::arg("grad_tol") = 1e-7,
        "Best of `starts` gradient ascents; returns a dict with the code and its fidelity.");

    m.def(
        "optimize_recovery",
        [](const std::vector<Matrix>& noise, const Matrix& u, int max_iters, double grad_tol) {
            const OptConfig cfg = make_config(1, 0, 0.0, max_iters, grad_tol);
            const CodeFrame code(u);
            OptResult run;
            {
                py::gil_scoped_release release;
                run = optimize_recovery(to_map(noise), code, cfg);
            }
            py::dict out = run_to_dict(run, code.d());
            out["recovery"] = RecoveryStack(run.frame, code.n()).to_kraus().ops();
            return out;
        },
        py::arg("noise"), py::arg("code"), py::arg("max_iters") = 500, py::arg("grad_tol") = 1e-7,
        "Optimizes the recovery for a fixed code, starting from Petz.");
}
