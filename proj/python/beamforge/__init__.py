# SPDX-License-Identifier: Apache-2.0
#
# Copyright 2026 The beamforge Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Beam-switching codebook design for high-speed railway mmWave links."""

import json
import os

import numpy as np

from . import _core
from ._core import ConfigError, DomainError, RecheckError, SolverError, simplex_threshold, unit_modulus_projection

__all__ = [
    "ConfigError",
    "DomainError",
    "RecheckError",
    "SolverError",
    "band",
    "benchmark",
    "canonical_config",
    "config_digest",
    "design",
    "evaluate",
    "grid",
    "load_config",
    "partition",
    "simplex_threshold",
    "unit_modulus_projection",
    "weights",
]


def load_config(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _text(config):
    if isinstance(config, (str, os.PathLike)):
        return json.dumps(load_config(config))
    return json.dumps(config)


def canonical_config(config):
    return json.loads(_core.canonical_config(_text(config)))


def config_digest(config):
    return _core.config_digest(_text(config))


def design(config, scheme="pp_pdg_ms"):
    """Designs a codebook and returns it as a dict (same layout as codebook.json)."""
    return json.loads(_core.design(_text(config), scheme))


def benchmark(config, scheme, beams):
    return json.loads(_core.benchmark(_text(config), scheme, beams))


def partition(config, scheme, beams):
    return np.asarray(_core.partition(_text(config), scheme, beams))


def evaluate(config, codebook):
    out = _core.evaluate(_text(config), json.dumps(codebook))
    for key in ("psi", "rsnr_db", "beam"):
        out[key] = np.asarray(out[key])
    return out


def band(config, psi, n_t, l_th=0.05):
    return _core.band(_text(config), psi, n_t, l_th)


def grid(config):
    return {k: np.asarray(v) for k, v in _core.grid(_text(config)).items()}


def weights(beam):
    """Complex weight vector of one codebook beam entry."""
    w = np.asarray(beam["weights"], dtype=float)
    return w[0::2] + 1j * w[1::2]
