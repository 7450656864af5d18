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

"""Leggett-Garg tests with sequential weak measurements.

Low-level functions take angles in radians. The report helpers take angles
in units of pi, like the command-line tool.
"""

import json

from ._lgweak import (
    ChainTooShort,
    CorrelatorSet,
    DichotomicObservable,
    EnumerationTooLarge,
    Error,
    GridTooSmall,
    InsufficientCounts,
    LengthMismatch,
    LGVerdict,
    PostSelectionSingular,
    QubitState,
    RunConfig,
    Violation,
    WeakValue,
    ZeroCoupling,
    anomaly_threshold,
    b3_postselected_form,
    b3_value,
    b4_closed_form,
    b4_postselected_form,
    b4_value,
    bn_bounds,
    bn_value,
    correlators_b4,
    expectation,
    macrorealist_bounds_bruteforce,
    observable_from_angle,
    orthogonal_state_from_angle,
    sequential_weak_value,
    state_from_angle,
    sweep,
    transition_prob,
    weak_value,
)
from . import _lgweak


def theory(alpha_pi, gamma_pi, delta_pi):
    """Exact correlators, B4 and weak values at one configuration."""
    return json.loads(_lgweak._theory_report(alpha_pi, gamma_pi, delta_pi))


def bounds(n, brute=False):
    """Macrorealist bounds of the n-measurement inequality."""
    return json.loads(_lgweak._bounds_report(n, brute))


def simulate(cfg=None, **fields):
    """Runs the three post-selected pointer experiments.

    Returns the JSON report as a dict and the three count frames (A, D,
    Dperp) as lists of rows ordered by increasing y.
    """
    if cfg is None:
        cfg = RunConfig()
    for key, value in fields.items():
        if not hasattr(cfg, key):
            raise TypeError(f"unknown RunConfig field {key!r}")
        setattr(cfg, key, value)
    report, frames = _lgweak._simulate(cfg)
    return json.loads(report), frames
