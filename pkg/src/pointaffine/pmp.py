"""Pontryagin maximum principle for the catalog: Hamiltonian flow on T*M.

For cost (1/2) G u^2 the maximizing control is u* = <p, v2>/G and the
maximized Hamiltonian is H = <p, v1> + <p, v2>^2 / (2G); every per-case
Hamiltonian and flow in the catalog is an instance of these two formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import models
from .models import DomainError, ModelSpec


@dataclass(frozen=True)
class PhasePoint:
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.x.shape != self.p.shape:
            raise ValueError("state and costate must have equal length")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.p))):
            raise ValueError("phase point must be finite")


@dataclass(frozen=True)
class FirstIntegralSet:
    names: tuple[str, ...]
    values: tuple[float, ...]

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values))


@dataclass(frozen=True)
class CharRoots:
    r1: complex
    r2: complex


def optimal_control(spec: ModelSpec, pt: PhasePoint) -> float:
    """Maximizer u* = <p, v2(x)> / G(x)."""
    v2 = models.control_field(spec, pt.x)
    return float(pt.p @ v2 / models.metric_G(spec, pt.x))


def hamiltonian(spec: ModelSpec, pt: PhasePoint) -> float:
    """Maximized Hamiltonian H = <p, v1> + <p, v2>^2 / (2G)."""
    v1 = models.drift(spec, pt.x)
    v2 = models.control_field(spec, pt.x)
    m = pt.p @ v2
    return float(pt.p @ v1 + m * m / (2.0 * models.metric_G(spec, pt.x)))


def pre_hamiltonian(spec: ModelSpec, pt: PhasePoint, u: float) -> float:
    """Unmaximized Hamiltonian <p, v1 + u v2> - (1/2) G u^2."""
    v1 = models.drift(spec, pt.x)
    v2 = models.control_field(spec, pt.x)
    return float(pt.p @ (v1 + u * v2) - 0.5 * models.metric_G(spec, pt.x) * u * u)


def hamilton_rhs(spec: ModelSpec, pt: PhasePoint) -> tuple[np.ndarray, np.ndarray]:
    """Analytic (xdot, pdot) of the maximized Hamiltonian flow."""
    x, p = pt.x, pt.p
    v1 = models.drift(spec, x)
    v2 = models.control_field(spec, x)
    G = models.metric_G(spec, x)
    m = p @ v2
    u = m / G
    xdot = v1 + u * v2
    dH_dx = (models.drift_jacobian(spec, x).T @ p
             + u * (models.control_jacobian(spec, x).T @ p)
             - (m * m / (2.0 * G * G)) * models.metric_gradient(spec, x))
    return xdot, -dH_dx


def hamilton_rhs_fd(spec: ModelSpec, pt: PhasePoint,
                    h: float = 1e-5) -> tuple[np.ndarray, np.ndarray]:
    """Finite-difference oracle for hamilton_rhs (central, step h)."""
    n = spec.dim
    xdot = np.zeros(n)
    pdot = np.zeros(n)
    for i in range(n):
        dp = np.zeros(n)
        dp[i] = h
        xdot[i] = (hamiltonian(spec, PhasePoint(pt.x, pt.p + dp))
                   - hamiltonian(spec, PhasePoint(pt.x, pt.p - dp))) / (2 * h)
        dx = np.zeros(n)
        dx[i] = h
        pdot[i] = -(hamiltonian(spec, PhasePoint(pt.x + dx, pt.p))
                    - hamiltonian(spec, PhasePoint(pt.x - dx, pt.p))) / (2 * h)
    return xdot, pdot


def characteristic_roots_case231(spec: ModelSpec) -> CharRoots:
    """Roots of r^2 - eps*c2*r - eps = 0 (exponential rates in x^2)."""
    if spec.case != "C231":
        raise DomainError("characteristic roots are defined for C231 only")
    eps, c = spec.epsilon, spec.c2
    disc = cmath.sqrt(c * c + 4.0 * eps)
    r1 = (eps * c + disc) / 2.0
    r2 = (eps * c - disc) / 2.0
    return CharRoots(r1, r2)


def first_integrals(spec: ModelSpec, pt: PhasePoint) -> FirstIntegralSet:
    """H plus the case's conserved quantities, complex pairs split re/im."""
    x, p = pt.x, pt.p
    names = ["H"]
    values = [hamiltonian(spec, pt)]
    c = spec.case
    if c == "C11":
        names += ["p2"]
        values += [p[1]]
    elif c == "C12":
        names += ["I2", "I3"]
        values += [p[0], p[0] * x[0] + p[1] * x[1]]
    elif c == "C211":
        names += ["p1"]
        values += [p[0]]
    elif c == "C212":
        names += ["p1", "p2"]
        values += [p[0], p[1]]
    elif c == "C22":
        names += ["I1", "I2", "I3"]
        values += [
            p[0],
            p[0] * x[0] + p[1] * x[1] + p[2] * x[2],
            p[0] * x[0] ** 2 + 2 * p[1] * x[0] * x[1]
            + 2 * p[2] * x[0] * x[2] + 2 * p[2] * x[1] ** 2,
        ]
    elif c == "C231":
        roots = characteristic_roots_case231(spec)
        i1 = (p[0] + roots.r1 * p[2]) * cmath.exp(roots.r1 * x[1])
        i2 = (p[0] + roots.r2 * p[2]) * cmath.exp(roots.r2 * x[1])
        if abs(roots.r1.imag) > 0:
            names += ["I1_re", "I1_im", "I2_re", "I2_im", "I3"]
            values += [i1.real, i1.imag, i2.real, i2.imag, p[1]]
        else:
            names += ["I1", "I2", "I3"]
            values += [i1.real, i2.real, p[1]]
    else:  # C232, C233
        names += ["p2"]
        values += [p[1]]
    return FirstIntegralSet(tuple(names), tuple(float(v) for v in values))


def reduce_momenta_case22(x, k1: float, k2: float, k3: float) -> np.ndarray:
    """Invert the three affine first integrals of the x2-dx3 case for p."""
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x
    if x2 == 0:
        raise DomainError("momentum reduction needs x2 != 0")
    p1 = k1
    p2 = (k1 * (-x1 / x2 - x1 ** 2 * x3 / (2 * x2 ** 3))
          + k2 * (1.0 / x2 + x1 * x3 / x2 ** 3)
          + k3 * (-x3 / (2 * x2 ** 3)))
    p3 = (k1 * (x1 ** 2 / (2 * x2 ** 2))
          + k2 * (-x1 / x2 ** 2)
          + k3 * (1.0 / (2 * x2 ** 2)))
    return np.array([p1, p2, p3])


def integral_directional_derivative(spec: ModelSpec, pt: PhasePoint,
                                    name: str, h: float = 1e-6) -> float:
    """d/dt of a named first integral along the Hamiltonian flow (FD)."""
    xdot, pdot = hamilton_rhs(spec, pt)
    plus = first_integrals(spec, PhasePoint(pt.x + h * xdot, pt.p + h * pdot))
    minus = first_integrals(spec, PhasePoint(pt.x - h * xdot, pt.p - h * pdot))
    return (plus.as_dict()[name] - minus.as_dict()[name]) / (2 * h)
