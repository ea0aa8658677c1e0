# Copyright 2026 The qecopt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Optimized quantum error-correcting subspace codes."""

from qecopt._core import (
    ConfigError,
    NumericalError,
    cost_J,
    cro_fidelity,
    knill_laflamme,
    known_code,
    known_code_names,
    noise_model,
    optimize_code,
    optimize_recovery,
    petz_recovery,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "cost_J",
    "cro_fidelity",
    "knill_laflamme",
    "known_code",
    "known_code_names",
    "noise_model",
    "optimize_code",
    "optimize_recovery",
    "petz_recovery",
]
