"""Documented defaults for the eight models: canonical specs, phase points,
and seeded sample boxes used by the check suites and the tests.

The default phase points were chosen so the horizon-5 flows stay inside the
model domains; they are part of the conservation contract, not arbitrary.
"""

from __future__ import annotations

import os

import numpy as np

from . import models
from .models import CASE_TAGS, ModelSpec
from .pmp import PhasePoint

DEFAULT_SEED = 42
SAMPLE_MARGIN = 0.1  # keep-out radius around singular loci for sample points

CASE_INFO = {
    "C11": {
        "dim": 2,
        "params": ("c1",),
        "domain": "all of R^2",
        "metric": "G = exp(2*c1*x1)",
        "integrals": ("H", "p2"),
    },
    "C12": {
        "dim": 2,
        "params": ("j0", "g0"),
        "domain": "x2 != 0",
        "metric": "G = g0",
        "integrals": ("H", "I2", "I3"),
    },
    "C211": {
        "dim": 3,
        "params": ("c2", "c3"),
        "domain": "all of R^3",
        "metric": "G = 1",
        "integrals": ("H", "p1"),
    },
    "C212": {
        "dim": 3,
        "params": ("c1", "c3"),
        "domain": "x3 != 0",
        "metric": "G = 1/(c1*x3)^2",
        "integrals": ("H", "p1", "p2"),
    },
    "C22": {
        "dim": 3,
        "params": ("c1", "g0"),
        "domain": "x2 != 0",
        "metric": "G = g0",
        "integrals": ("H", "I1", "I2", "I3"),
    },
    "C231": {
        "dim": 3,
        "params": ("c1", "c2", "g0", "epsilon"),
        "domain": "all of R^3",
        "metric": "G = g0",
        "integrals": ("H", "I1", "I2", "I3"),
    },
    "C232": {
        "dim": 3,
        "params": ("c1", "c3", "c4", "g0", "epsilon", "f20_coeffs"),
        "domain": "cos(c3*x1) != 0 and c3*x3^2 + c4 > 0",
        "metric": "G = g0",
        "integrals": ("H", "p2"),
    },
    "C233": {
        "dim": 3,
        "params": ("c1", "c3", "c4", "g0", "epsilon", "f20_coeffs"),
        "domain": "c3*x3^2 - c4 > 0",
        "metric": "G = g0",
        "integrals": ("H", "p2"),
    },
}

_DEFAULT_SPECS = {
    "C11": ModelSpec("C11", c1=1.0),
    "C12": ModelSpec("C12", j0=0.5, g0=1.0),
    "C211": ModelSpec("C211", c2=0.3, c3=0.2),
    "C212": ModelSpec("C212", c1=1.0, c3=-0.4),
    "C22": ModelSpec("C22", c1=0.2, g0=1.0),
    "C231": ModelSpec("C231", c1=0.3, c2=0.5, g0=1.0, epsilon=1),
    "C232": ModelSpec("C232", c1=0.2, c3=0.25, c4=1.0, g0=1.0, epsilon=1),
    "C233": ModelSpec("C233", c1=0.2, c3=0.5, c4=-1.0, g0=1.0, epsilon=-1),
}

_DEFAULT_PHASE = {
    "C11": ((0.0, 1.0), (0.5, 1.0)),
    "C12": ((0.0, 1.0), (0.1, -0.7)),
    "C211": ((0.0, 0.5, 0.3), (0.1, 0.2, -0.1)),
    "C212": ((0.0, 0.0, 1.0), (0.2, 0.1, -0.2)),
    "C22": ((0.0, 1.0, -0.1), (0.01, 0.05, 0.05)),
    "C231": ((0.0, 0.0, 0.0), (0.1, 0.05, -0.05)),
    "C232": ((-1.0, 0.0, 0.5), (0.05, -0.05, 0.1)),
    "C233": ((0.0, 0.0, 0.3), (0.05, 0.05, -0.05)),
}

# Per-case sample boxes (state space), chosen at least SAMPLE_MARGIN away
# from every singular locus.
_SAMPLE_BOX = {
    "C11": [(-1.0, 1.0), (-1.0, 1.0)],
    "C12": [(-1.0, 1.0), (0.3, 1.5)],
    "C211": [(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
    "C212": [(-1.0, 1.0), (-1.0, 1.0), (0.3, 1.5)],
    "C22": [(-1.0, 1.0), (0.3, 1.5), (-1.0, 1.0)],
    "C231": [(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
    "C232": [(-1.2, 1.2), (-1.0, 1.0), (-1.0, 1.0)],
    "C233": [(-1.0, 1.0), (-1.0, 1.0), (0.2, 1.2)],
}


def default_spec(case: str) -> ModelSpec:
    if case not in CASE_TAGS:
        raise KeyError(f"unknown case {case!r}")
    return _DEFAULT_SPECS[case]


def default_specs() -> list[ModelSpec]:
    return [default_spec(c) for c in CASE_TAGS]


def default_phase_point(case: str) -> PhasePoint:
    x, p = _DEFAULT_PHASE[case]
    return PhasePoint(np.array(x), np.array(p))


def sample_box(case: str):
    return [tuple(b) for b in _SAMPLE_BOX[case]]


def rng_seed() -> int:
    return int(os.environ.get("PAG_SEED", DEFAULT_SEED))


def sample_states(spec: ModelSpec, n: int, rng=None) -> np.ndarray:
    """n seeded in-domain states, rejecting points within SAMPLE_MARGIN of a
    singular locus."""
    if rng is None:
        rng = np.random.default_rng(rng_seed())
    box = _SAMPLE_BOX[spec.case]
    out = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 1000 * n:
            raise RuntimeError(f"sampling stalled for {spec.case}")
        x = np.array([rng.uniform(lo, hi) for lo, hi in box])
        if not models.in_domain(spec, x):
            continue
        if any(s <= SAMPLE_MARGIN for s in models.singular_slacks(spec, x)):
            continue
        out.append(x)
    return np.array(out)


def sample_phase_points(spec: ModelSpec, n: int, rng=None) -> list[PhasePoint]:
    """Seeded phase points: sampled states with costates uniform in [-1, 1]."""
    if rng is None:
        rng = np.random.default_rng(rng_seed())
    states = sample_states(spec, n, rng)
    return [PhasePoint(x, rng.uniform(-1.0, 1.0, size=spec.dim)) for x in states]
