# Copyright 2026 The fidlimit Authors
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
"""Fidelity limits for quantum source coding through small channels."""

import json

from fidlimit import _core
from fidlimit._core import (
    LEMMA_CONSTANT,
    ContractError,
    SizeError,
    __version__,
    apply_channel,
    converse_sweep,
    ensemble_density,
    entropy,
    eta,
    fidelity,
    fidelity_oracle,
    random_channel,
    run_cli,
    sigma_d,
    topd_identity_fidelity,
    triangle_bound,
    triangle_bound_general,
)


def fuzz_bound(trials, seed=42):
    """Lemma fuzz campaign; returns the report as a dict."""
    return json.loads(_core.fuzz_bound(trials, seed))


def fuzz_inequality(trials, seed=42):
    """Fidelity-inequality fuzz campaign; returns the report as a dict."""
    return json.loads(_core.fuzz_inequality(trials, seed))


__all__ = [
    "LEMMA_CONSTANT", "ContractError", "SizeError", "__version__", "apply_channel",
    "converse_sweep", "ensemble_density", "entropy", "eta", "fidelity", "fidelity_oracle",
    "fuzz_bound", "fuzz_inequality", "random_channel", "run_cli", "sigma_d",
    "topd_identity_fidelity", "triangle_bound", "triangle_bound_general",
]
