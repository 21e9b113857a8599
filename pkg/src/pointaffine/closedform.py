"""Closed-form optimal trajectory families and their residual checks.

Each family is stored as (case, subcase, constants) and evaluated pointwise
in t.  reduced_ode_residual plays the trajectories back against the reduced
state ODEs with finite-difference time derivatives, so the check never reuses
the formulas that produced the curve.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .models import DomainError, ModelSpec

_POLE_TOL = 1e-6
_ROOT_TOL = 1e-9


class PoleError(DomainError):
    """Evaluation within _POLE_TOL of a pole of a tan/rational family."""

    def __init__(self, t):
        super().__init__(f"closed form has a pole at t = {t}")
        self.t = t


class NoClosedFormError(DomainError):
    """No listed closed-form family passes through the given phase point."""


@dataclass(frozen=True)
class ClosedFormFamily:
    case: str
    subcase: str
    constants: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.constants[key]


# -- linear-ODE solution bases -------------------------------------------------

def quadratic_roots(b: float, c: float) -> tuple[complex, complex]:
    """Roots of s^2 + b s + c = 0."""
    disc = cmath.sqrt(b * b - 4.0 * c)
    return (-b + disc) / 2.0, (-b - disc) / 2.0


def _poly_exp_fun(j, lam):
    def val(t):
        return t ** j * math.exp(lam * t)

    def dval(t):
        e = math.exp(lam * t)
        return (j * t ** (j - 1) if j else 0.0) * e + lam * t ** j * e

    return val, dval


def _poly_trig_fun(j, alpha, beta, use_sin):
    trig = math.sin if use_sin else math.cos
    dtrig = math.cos if use_sin else math.sin
    sgn = 1.0 if use_sin else -1.0

    def val(t):
        return t ** j * math.exp(alpha * t) * trig(beta * t)

    def dval(t):
        e = math.exp(alpha * t)
        core = (j * t ** (j - 1) if j else 0.0) + alpha * t ** j
        return e * (core * trig(beta * t) + sgn * beta * t ** j * dtrig(beta * t))

    return val, dval


def real_ode_basis(roots, tol: float = _ROOT_TOL):
    """Real canonical solution basis for the roots of a real-coefficient
    characteristic polynomial, with multiplicity detected at spacing tol."""
    reals = sorted(r.real for r in roots if abs(r.imag) <= tol)
    uppers = sorted((r for r in roots if r.imag > tol), key=lambda z: (z.real, z.imag))
    funs = []

    i = 0
    while i < len(reals):
        m = 1
        while i + m < len(reals) and abs(reals[i + m] - reals[i]) <= tol * (1 + abs(reals[i])):
            m += 1
        lam = sum(reals[i:i + m]) / m
        funs.extend(_poly_exp_fun(j, lam) for j in range(m))
        i += m

    i = 0
    while i < len(uppers):
        m = 1
        while i + m < len(uppers) and abs(uppers[i + m] - uppers[i]) <= tol * (1 + abs(uppers[i])):
            m += 1
        mu = sum(uppers[i:i + m], 0j) / m
        for j in range(m):
            funs.append(_poly_trig_fun(j, mu.real, mu.imag, use_sin=False))
            funs.append(_poly_trig_fun(j, mu.real, mu.imag, use_sin=True))
        i += m

    if len(funs) != len(roots):
        raise ValueError("root clustering lost conjugate symmetry")
    return funs


# -- trajectory families -------------------------------------------------------

def case11_trajectory(c1: float, c2: float, c3: float, t: float) -> np.ndarray:
    """Two-state exponential-metric geodesic; c2 is the conserved momentum p2,
    c3 the integration constant of x^2 (restored; the flow fixes x^2 only up
    to an additive constant)."""
    if c1 == 0:
        return np.array([t, c2 * t + c3])
    return np.array([t, -(c2 / (2.0 * c1)) * math.exp(-2.0 * c1 * t) + c3])


_C12_SUBCASES = ("c1zero_c2zero", "c1zero_c2nonzero", "k_zero", "k_pos", "k_neg")


def case12_trajectory(j0: float, g0: float, subcase: str, constants: dict,
                      t: float) -> np.ndarray:
    """Two-state x2-scaled geodesics, split by k = g0*(j0^2*g0 - 2*c2)."""
    c = constants
    if subcase == "c1zero_c2zero":
        return np.array([c["c3"] * t + c["c4"], c["c3"]])
    if subcase == "c1zero_c2nonzero":
        rate = c["c2"]
        if rate == 0:
            raise DomainError("c1zero_c2nonzero needs a nonzero rate c2")
        return np.array([(c["c3"] / rate) * math.exp(rate * t) + c["c4"],
                         c["c3"] * math.exp(rate * t)])
    if subcase not in ("k_zero", "k_pos", "k_neg"):
        raise ValueError(f"unknown case12 subcase {subcase!r}")
    c1 = c["c1"]
    if c1 == 0:
        raise DomainError("k subcases need c1 != 0")
    s = t + c["c3"]
    if subcase == "k_zero":
        if abs(s) <= _POLE_TOL:
            raise PoleError(t)
        x2 = -2.0 * g0 / (c1 * s * s)
        x1 = g0 * (2.0 + j0 * s) / (c1 * s) + c["c4"]
        return np.array([x1, x2])
    k = c["k"]
    if subcase == "k_pos":
        if not k > 0:
            raise DomainError("k_pos needs k > 0")
        theta = math.sqrt(k) * s / (2.0 * g0)
        x2 = (k / (2.0 * c1 * g0)) / math.cosh(theta) ** 2
        x1 = (math.sqrt(k) * math.tanh(theta) + j0 * g0) / c1 + c["c4"]
        return np.array([x1, x2])
    if subcase == "k_neg":
        if not k < 0:
            raise DomainError("k_neg needs k < 0")
        theta = math.sqrt(-k) * s / (2.0 * g0)
        _check_tan_pole(theta, t)
        x2 = (k / (2.0 * c1 * g0)) / math.cos(theta) ** 2
        x1 = -(math.sqrt(-k) * math.tan(theta) - j0 * g0) / c1 + c["c4"]
        return np.array([x1, x2])
    raise ValueError(f"unknown case12 subcase {subcase!r}")


def case211_roots(c2: float, c3: float):
    """Roots of (D^2 + c3 D - c2)(D^2 - c3 D - c2)."""
    return [*quadratic_roots(c3, -c2), *quadratic_roots(-c3, -c2)]


def case211_trajectory(c2: float, c3: float, coeffs, t0: float,
                       t: float) -> np.ndarray:
    """Three-state flat-metric geodesic: x^2 solves a 4th-order linear ODE,
    x^3 = dx^2/dt, x^1 = t + t0.  coeffs are the 4 coordinates of x^2 in the
    real canonical solution basis."""
    coeffs = tuple(coeffs)
    if len(coeffs) != 4:
        raise ValueError("case211 needs exactly 4 coefficients")
    basis = real_ode_basis(case211_roots(c2, c3))
    x2 = sum(a * f(t) for a, (f, _) in zip(coeffs, basis))
    x3 = sum(a * df(t) for a, (_, df) in zip(coeffs, basis))
    return np.array([t + t0, x2, x3])


_C212_SUBCASES = ("const_slope", "exp", "tan_family", "tanh_family",
                  "rational_family")


def _check_tan_pole(theta: float, t: float):
    r = (theta - math.pi / 2.0) / math.pi
    if abs(r - round(r)) * math.pi <= _POLE_TOL:
        raise PoleError(t)


def case212_trajectory(c1: float, c3: float, subcase: str, constants: dict,
                       t: float) -> np.ndarray:
    """Three-state 1/(c1*x3)^2-metric geodesics (five listed shapes)."""
    k = constants
    t0 = k.get("t0", 0.0)
    if subcase == "const_slope":
        return np.array([t + t0, k["a"] * t + k["b"], k["a"]])
    if subcase == "exp":
        rate = k["c"]
        if rate == 0:
            raise DomainError("exp family needs a nonzero rate c")
        e = math.exp(rate * t)
        return np.array([t + t0, (k["a"] / rate) * e + k["b"], k["a"] * e])
    if subcase == "tan_family":
        theta = k["b"] * t + k["c"]
        _check_tan_pole(theta, t)
        sec2 = 1.0 / math.cos(theta) ** 2
        return np.array([t + t0, k["a"] * math.tan(theta) + k["d"],
                         k["a"] * k["b"] * sec2])
    if subcase == "tanh_family":
        theta = k["b"] * t + k["c"]
        sech2 = 1.0 / math.cosh(theta) ** 2
        return np.array([t + t0, k["a"] * math.tanh(theta) + k["d"],
                         k["a"] * k["b"] * sech2])
    if subcase == "rational_family":
        den = k["a"] * t + k["b"]
        if abs(den) <= _POLE_TOL:
            raise PoleError(t)
        return np.array([t + t0, 1.0 / den + k["c"], -k["a"] / den ** 2])
    raise ValueError(f"unknown case212 subcase {subcase!r}")


def evaluate_family(family: ClosedFormFamily, t: float) -> np.ndarray:
    c = family.constants
    if family.case == "C11":
        return case11_trajectory(c["c1"], c["c2"], c["c3"], t)
    if family.case == "C12":
        return case12_trajectory(c["j0"], c["g0"], family.subcase, c, t)
    if family.case == "C211":
        return case211_trajectory(c["c2"], c["c3"], c["coeffs"], c.get("t0", 0.0), t)
    if family.case == "C212":
        return case212_trajectory(c.get("c1", 1.0), c.get("c3", 0.0),
                                  family.subcase, c, t)
    raise NoClosedFormError(f"no closed form for case {family.case}")


# -- residual checks -----------------------------------------------------------

def _fd1(traj, t, dt):
    return (traj(t + dt) - traj(t - dt)) / (2.0 * dt)


def reduced_ode_residual(spec: ModelSpec, family: ClosedFormFamily,
                         sample_times, *, trajectory=None,
                         dt: float = 1e-5, dt4: float = 5e-3) -> float:
    """Max abs residual of the case's reduced state ODEs on the closed form.

    trajectory overrides the family's own curve (negative controls feed a
    curve built from perturbed constants against this family's equations).
    """
    traj = trajectory or (lambda t: evaluate_family(family, t))
    worst = 0.0
    for t in sample_times:
        x = traj(t)
        d = _fd1(traj, t, dt)
        if spec.case == "C11":
            r = [d[0] - 1.0,
                 d[1] - family["c2"] * math.exp(-2.0 * spec.c1 * x[0])]
        elif spec.case == "C12":
            r = [d[0] - x[1]]
            if family.subcase == "c1zero_c2zero":
                r.append(d[1])
            elif family.subcase == "c1zero_c2nonzero":
                r.append(d[1] - family["c2"] * x[1])
            else:
                rate = spec.j0 + family["c1"] * (family["c4"] - x[0]) / spec.g0
                r.append(d[1] - x[1] * rate)
        elif spec.case == "C211":
            r = [d[0] - 1.0, d[1] - x[2]]
            # 4th-order operator D^4 - (2 c2 + c3^2) D^2 + c2^2 on x^2 by
            # 5-point stencils; dt4 sits near the truncation/roundoff optimum.
            samples = np.array([traj(t + j * dt4)[1] for j in (-2, -1, 0, 1, 2)])
            d2 = (samples[1] - 2 * samples[2] + samples[3]) / dt4 ** 2
            d4 = (samples[0] - 4 * samples[1] + 6 * samples[2]
                  - 4 * samples[3] + samples[4]) / dt4 ** 4
            r.append(d4 - (2 * spec.c2 + spec.c3 ** 2) * d2 + spec.c2 ** 2 * samples[2])
        elif spec.case == "C212":
            r = [d[0] - 1.0, d[1] - x[2]]
        else:
            raise NoClosedFormError(f"no closed form for case {spec.case}")
        worst = max(worst, max(abs(v) for v in r))
    return worst


# -- closed flows through a given phase point (C11, C12 oracles) ---------------

def closed_flow_c11(spec: ModelSpec, x0, p0):
    """Callable t -> state of the C11 Hamiltonian flow from (x0, p0)."""
    x0 = np.asarray(x0, dtype=float)
    p2 = float(np.asarray(p0, dtype=float)[1])
    c1 = spec.c1
    u0 = p2 * math.exp(-2.0 * c1 * x0[0])

    def flow(t):
        x1 = x0[0] + t
        if c1 == 0:
            x2 = x0[1] + u0 * t
        else:
            x2 = x0[1] + (u0 / (2.0 * c1)) * (1.0 - math.exp(-2.0 * c1 * t))
        return np.array([x1, x2])

    return flow


def closed_flow_c12(spec: ModelSpec, x0, p0):
    """Callable t -> state of the C12 flow from (x0, p0), via the listed
    line / parabola families; raises NoClosedFormError off those branches."""
    x0 = np.asarray(x0, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    j0, g0 = spec.j0, spec.g0
    c1 = float(p0[0])
    m0 = float(p0[1] * x0[1])

    if c1 == 0:
        rate = j0 + m0 / g0
        if rate == 0:
            fam = ClosedFormFamily("C12", "c1zero_c2zero",
                                   {"j0": j0, "g0": g0, "c3": x0[1],
                                    "c4": x0[0]})
        else:
            fam = ClosedFormFamily("C12", "c1zero_c2nonzero",
                                   {"j0": j0, "g0": g0, "c2": rate,
                                    "c3": x0[1], "c4": x0[0] - x0[1] / rate})
        return lambda t: evaluate_family(fam, t)

    c2int = -c1 * x0[1] - j0 * m0 - m0 * m0 / (2.0 * g0)
    k = g0 * (j0 * j0 * g0 - 2.0 * c2int)
    c4 = x0[0] + m0 / c1
    if abs(k) < 1e-12:
        if m0 + j0 * g0 == 0:
            raise NoClosedFormError("degenerate k = 0 data")
        c3 = -2.0 * g0 / (m0 + j0 * g0)
        fam = ClosedFormFamily("C12", "k_zero",
                               {"j0": j0, "g0": g0, "c1": c1, "c3": c3, "c4": c4})
    elif k > 0:
        arg = -(m0 + j0 * g0) / math.sqrt(k)
        if abs(arg) >= 1:
            raise NoClosedFormError("phase point lies off the sech^2 branch")
        c3 = 2.0 * g0 * math.atanh(arg) / math.sqrt(k)
        fam = ClosedFormFamily("C12", "k_pos",
                               {"j0": j0, "g0": g0, "c1": c1, "c3": c3,
                                "c4": c4, "k": k})
    else:
        c3 = 2.0 * g0 * math.atan((m0 + j0 * g0) / math.sqrt(-k)) / math.sqrt(-k)
        fam = ClosedFormFamily("C12", "k_neg",
                               {"j0": j0, "g0": g0, "c1": c1, "c3": c3,
                                "c4": c4, "k": k})
    if abs(evaluate_family(fam, 0.0)[1] - x0[1]) > 1e-8 * max(1.0, abs(x0[1])):
        raise NoClosedFormError("phase point not matched by a listed family")
    return lambda t: evaluate_family(fam, t)
