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

import math

import numpy as np
import pytest

import beamforge

SMALL = {
    "scenario": {
        "f_c_ghz": 30, "N_T": 4, "y_0": 8, "alpha_deg": 10, "v_kmh": 500,
        "P_T_dbm": 40, "P_N_dbm": -40, "psi_min_rad": -0.4, "psi_max_rad": 0.2,
        "gamma_th_db": 4, "eps_t": 0.1,
    },
    "solver": {"seed": 3},
}


def test_config_round_trip():
    canon = beamforge.canonical_config(SMALL)
    assert canon["scenario"]["f_c"] == pytest.approx(30e9)
    assert canon["scenario"]["alpha"] == pytest.approx(math.radians(10))
    assert beamforge.config_digest(SMALL) == beamforge.config_digest(canon)
    assert len(beamforge.config_digest(SMALL)) == 64


def test_config_errors_raise_value_error():
    bad = {"scenario": dict(SMALL["scenario"], bogus=1)}
    with pytest.raises(ValueError):
        beamforge.canonical_config(bad)
    with pytest.raises(beamforge.ConfigError):
        beamforge.design(SMALL, scheme="nope")


def test_simplex_threshold():
    z = beamforge.simplex_threshold(np.array([0.3, 1.2, -0.5]), 1.0)
    assert z.sum() == pytest.approx(1.0)
    assert np.all(z >= 0)
    assert z[2] == 0.0


def test_unit_modulus_projection():
    f = np.array([1 + 1j, 0.1, -2j, 3])
    g = beamforge.unit_modulus_projection(f)
    assert np.allclose(np.abs(g), 0.5)
    assert np.allclose(np.angle(g), np.angle(f))


def test_design_and_evaluate():
    cb = beamforge.design(SMALL)
    assert cb["N"] >= 1
    assert cb["switch_angles"][0] == pytest.approx(-0.4)
    w = beamforge.weights(cb["beams"][0])
    assert np.allclose(np.abs(w), 0.5)
    report = beamforge.evaluate(SMALL, cb)
    assert report["min_db"] >= 4.0 - 1e-9
    assert report["switches"] == cb["N"] - 1
    assert report["psi"].shape == report["rsnr_db"].shape


def test_partitions_and_grid():
    angles = beamforge.partition(SMALL, "ubw", 3)
    assert np.allclose(np.diff(np.sin(angles)), (math.sin(0.2) - math.sin(-0.4)) / 3)
    g = beamforge.grid(SMALL)
    assert np.all(np.diff(g["psi"]) > 0)
    assert beamforge.band(SMALL, 0.0, 128) > beamforge.band(SMALL, 0.0, 8)
    cb = beamforge.benchmark(SMALL, "esc", 2)
    assert cb["N"] == 2
