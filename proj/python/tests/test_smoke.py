# Copyright 2026 The lgweak Authors
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

import json
import math
import os
import subprocess

import pytest

import lgweak


def test_weak_value_row1():
    pre = lgweak.state_from_angle(0.233 * math.pi)
    post = lgweak.state_from_angle(0.867 * math.pi)
    wv = lgweak.weak_value(lgweak.observable_from_angle(0), pre, post)
    assert wv.re == pytest.approx(2.327318413503697, abs=1e-12)
    assert abs(wv.im) < 1e-12
    assert wv.anomalous


def test_b4_table_values():
    for (g, a, d), expected in [
        ((0.1, 0.233, 0.867), 2.82),
        ((0.4, 0.767, 0.633), -2.82),
        ((0.5, 0.833, 0.667), -2.50),
        ((0.95, 0.8, 0.15), 2.71),
    ]:
        s = lgweak.correlators_b4(a * math.pi, g * math.pi, d * math.pi)
        v = lgweak.b4_value(s)
        assert v.value == pytest.approx(expected, abs=0.005)
        assert lgweak.b4_postselected_form(s) == pytest.approx(v.value, abs=1e-10)
        assert v.value == pytest.approx(lgweak.b4_closed_form(a * math.pi, g * math.pi, d * math.pi), abs=1e-10)


def test_theory_report():
    report = lgweak.theory(0.233, 0.1, 0.867)
    assert report["b4"]["classification"] == "pos"
    assert report["weak_values"]["wv_c_plus"]["anomalous"]


def test_bounds():
    assert lgweak.bn_bounds(5) == (-5.0, 3.0)
    assert lgweak.macrorealist_bounds_bruteforce(7) == (-7.0, 5.0)
    assert lgweak.bounds(6, brute=True)["agreement"] is True


def test_exceptions():
    with pytest.raises(lgweak.PostSelectionSingular):
        lgweak.correlators_b4(0.3, 0.1, 0.3)
    with pytest.raises(lgweak.EnumerationTooLarge):
        lgweak.macrorealist_bounds_bruteforce(25)
    with pytest.raises(lgweak.ChainTooShort):
        lgweak.bn_bounds(2)
    assert issubclass(lgweak.ZeroCoupling, lgweak.Error)
    assert issubclass(lgweak.Error, RuntimeError)
    with pytest.raises(lgweak.ZeroCoupling):
        lgweak.simulate(photons=10000, g_over_sigma=0.0)


def test_sweep_marked_point():
    rows = lgweak.sweep(0.5, steps=101)
    assert len(rows) == 101 * 101
    cell = rows[83 * 101 + 67]
    assert cell[0] == pytest.approx(0.83)
    assert cell[1] == pytest.approx(0.67)
    assert cell[3] == "neg"
    assert max(r[2] for r in rows) <= 2 * math.sqrt(2) + 1e-9


def test_simulate_deterministic():
    report, frames = lgweak.simulate(photons=100000, seed=3)
    again, frames_again = lgweak.simulate(photons=100000, seed=3)
    assert report == again
    assert frames == frames_again
    assert len(frames) == 3
    assert len(frames[0]) == 32 and len(frames[0][0]) == 32
    assert sum(map(sum, frames[1])) == report["runs"][1]["detected"]
    b4 = report["b4"]
    assert abs(b4["value"] - report["theory"]["b4"]) <= max(3 * b4["se"], 0.03)


def test_run_config_round_trip():
    cfg = lgweak.RunConfig()
    cfg.alpha_pi = 0.8
    cfg.seed = 99
    assert lgweak.RunConfig.from_ini(cfg.to_ini()) == cfg
    with pytest.raises(ValueError):
        lgweak.RunConfig.from_ini("unknown = 1\n")


@pytest.mark.skipif("LGWEAK_CLI" not in os.environ, reason="command-line tool path not provided")
def test_cli_matches_module():
    out = subprocess.run(
        [os.environ["LGWEAK_CLI"], "theory", "--alpha", "0.8", "--gamma", "0.95", "--delta", "0.15"],
        check=True,
        capture_output=True,
        text=True,
    ).stdout
    assert json.loads(out) == lgweak.theory(0.8, 0.95, 0.15)
