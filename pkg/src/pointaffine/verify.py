"""Residual symmetry groups and the catalog's defining identities.

Each case that admits a residual group of point-affine isometries gets an
explicit coordinate map; isometry_residual measures, by finite differences,
how far a map is from preserving (v1, span v2, Q).  The tan/tanh/linear
three-state family additionally satisfies a second-order PDE in its potential
H and a Schwarzian-type constraint in x^1; both are checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import models
from .closedform import quadratic_roots, real_ode_basis
from .models import DomainError, ModelSpec

SYMMETRY_CASES = ("C11", "C12", "C211", "C212", "C22", "C231")


@dataclass(frozen=True)
class SymmetryTransform:
    """One element of a case's residual symmetry group.

    params by case:
      C11: a, b            C12: a (!= 0), b
      C211: a, q1, q2      (q: coefficients of phi0 in the real basis of
                            s^2 - c3*s - c2 = 0)
      C212: a, b (!= 0), c
      C22: a, b, c, d      (linear fractional in x^1, ad - bc != 0)
      C231: a, b1, b2      (b: coefficients of Phi0 in the real basis of
                            r^2 - eps*c2*r - eps = 0)
    """

    case: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.case not in SYMMETRY_CASES:
            raise ValueError(f"no residual symmetry group stored for {self.case}")

    def __getitem__(self, key):
        return self.params[key]


def identity_symmetry(case: str) -> SymmetryTransform:
    p = {
        "C11": {"a": 0.0, "b": 0.0},
        "C12": {"a": 1.0, "b": 0.0},
        "C211": {"a": 0.0, "q1": 0.0, "q2": 0.0},
        "C212": {"a": 0.0, "b": 1.0, "c": 0.0},
        "C22": {"a": 1.0, "b": 0.0, "c": 0.0, "d": 1.0},
        "C231": {"a": 0.0, "b1": 0.0, "b2": 0.0},
    }[case]
    return SymmetryTransform(case, p)


def _guard(sym: SymmetryTransform):
    if sym.case == "C12" and sym["a"] == 0:
        raise ValueError("C12 symmetry needs a != 0")
    if sym.case == "C212" and sym["b"] == 0:
        raise ValueError("C212 symmetry needs b != 0")
    if sym.case == "C22" and sym["a"] * sym["d"] - sym["b"] * sym["c"] == 0:
        raise ValueError("C22 symmetry needs ad - bc != 0")


def _phi_eval(roots, coeffs, s):
    basis = real_ode_basis(roots)
    val = sum(c * f(s) for c, (f, _) in zip(coeffs, basis))
    dval = sum(c * df(s) for c, (_, df) in zip(coeffs, basis))
    return val, dval


def apply_symmetry(spec: ModelSpec, sym: SymmetryTransform, xt) -> np.ndarray:
    """Image of x-tilde under the group element; both points must lie in
    the model's domain."""
    if sym.case != spec.case:
        raise ValueError("symmetry case does not match the model")
    _guard(sym)
    models._require_domain(spec, xt)
    xt = np.asarray(xt, dtype=float)
    c = spec.case
    if c == "C11":
        x = np.array([xt[0] + sym["a"],
                      math.exp(-spec.c1 * sym["a"]) * xt[1] + sym["b"]])
    elif c == "C12":
        x = np.array([sym["a"] * xt[0] + sym["b"], sym["a"] * xt[1]])
    elif c == "C211":
        roots = quadratic_roots(-spec.c3, -spec.c2)
        phi, dphi = _phi_eval(roots, (sym["q1"], sym["q2"]), xt[0])
        x = np.array([xt[0] + sym["a"], xt[1] + phi, xt[2] + dphi])
    elif c == "C212":
        x = np.array([xt[0] + sym["a"], sym["b"] * xt[1] + sym["c"],
                      sym["b"] * xt[2]])
    elif c == "C22":
        a, b, cc, d = sym["a"], sym["b"], sym["c"], sym["d"]
        den = cc * xt[0] + d
        if abs(den) < 1e-12:
            raise DomainError("linear fractional map has a pole at x1-tilde")
        det = a * d - b * cc
        dphi = det / den ** 2
        d2phi = -2.0 * cc * det / den ** 3
        x = np.array([(a * xt[0] + b) / den,
                      dphi * xt[1],
                      dphi * xt[2] + d2phi * xt[1] ** 2])
    else:  # C231
        eps = float(spec.epsilon)
        roots = quadratic_roots(-eps * spec.c2, -eps)
        x2 = xt[1] - sym["a"]
        phi, dphi = _phi_eval(roots, (sym["b1"], sym["b2"]), x2)
        x = np.array([xt[0] + phi, x2, xt[2] + dphi])
    models._require_domain(spec, x)
    return x


def compose_symmetry(spec: ModelSpec, first: SymmetryTransform,
                     second: SymmetryTransform) -> SymmetryTransform:
    """Element acting as first after second (apply(first, apply(second, x)))."""
    if first.case != second.case:
        raise ValueError("cannot compose symmetries of different cases")
    c = first.case
    if c == "C11":
        a = first["a"] + second["a"]
        b = first["b"] + math.exp(-spec.c1 * first["a"]) * second["b"]
        return SymmetryTransform(c, {"a": a, "b": b})
    if c == "C12":
        return SymmetryTransform(c, {"a": first["a"] * second["a"],
                                     "b": first["a"] * second["b"] + first["b"]})
    if c == "C22":
        m = (np.array([[first["a"], first["b"]], [first["c"], first["d"]]])
             @ np.array([[second["a"], second["b"]], [second["c"], second["d"]]]))
        return SymmetryTransform(c, {"a": m[0, 0], "b": m[0, 1],
                                     "c": m[1, 0], "d": m[1, 1]})
    raise ValueError(f"no closed composition law stored for {c}")


def _fd_jacobian(fn, x, h):
    x = np.asarray(x, dtype=float)
    n = len(x)
    cols = []
    for j in range(n):
        dx = np.zeros(n)
        dx[j] = h
        cols.append((fn(x + dx) - fn(x - dx)) / (2.0 * h))
    return np.column_stack(cols)


def isometry_residual(spec: ModelSpec, sym: SymmetryTransform, xt,
                      h: float = 1e-5, *, transform=None) -> dict:
    """How far a coordinate map is from a point-affine isometry at xt.

    transform overrides apply_symmetry with an arbitrary map (negative
    controls pass maps outside the group).
    """
    xt = np.asarray(xt, dtype=float)
    phi = transform or (lambda z: apply_symmetry(spec, sym, z))
    y = phi(xt)
    Dphi = _fd_jacobian(phi, xt, h)

    v1t = models.drift(spec, xt)
    v2t = models.control_field(spec, xt)
    v1 = models.drift(spec, y)
    v2 = models.control_field(spec, y)

    push1 = Dphi @ v1t
    push2 = Dphi @ v2t
    drift_err = float(np.linalg.norm(push1 - v1))
    unit2 = v2 / np.linalg.norm(v2)
    span_err = float(np.linalg.norm(push2 - (push2 @ unit2) * unit2)
                     / np.linalg.norm(push2))
    # u' with Dphi*(v1t + 1*v2t) = v1 + u'*v2; cost of unit control must match.
    u_prime = float((Dphi @ (v1t + v2t) - v1) @ v2 / (v2 @ v2))
    metric_err = float(abs(models.cost_Q(spec, xt, 1.0)
                           - models.cost_Q(spec, y, u_prime)))
    return {"drift_err": drift_err, "span_err": span_err,
            "metric_err": metric_err}


def random_symmetry(spec: ModelSpec, rng: np.random.Generator) -> SymmetryTransform:
    """A modestly-sized random group element (keeps images near the domain)."""
    c = spec.case
    u = lambda lo, hi: float(rng.uniform(lo, hi))
    if c == "C11":
        return SymmetryTransform(c, {"a": u(-0.5, 0.5), "b": u(-0.5, 0.5)})
    if c == "C12":
        return SymmetryTransform(c, {"a": u(0.6, 1.6), "b": u(-0.5, 0.5)})
    if c == "C211":
        return SymmetryTransform(c, {"a": u(-0.5, 0.5),
                                     "q1": u(-0.3, 0.3), "q2": u(-0.3, 0.3)})
    if c == "C212":
        return SymmetryTransform(c, {"a": u(-0.5, 0.5), "b": u(0.6, 1.6),
                                     "c": u(-0.5, 0.5)})
    if c == "C22":
        while True:
            a, b, cc, d = (1 + u(-0.3, 0.3), u(-0.3, 0.3),
                           u(-0.3, 0.3), 1 + u(-0.3, 0.3))
            if abs(a * d - b * cc) > 0.3:
                return SymmetryTransform(c, {"a": a, "b": b, "c": cc, "d": d})
    if c == "C231":
        return SymmetryTransform(c, {"a": u(-0.5, 0.5),
                                     "b1": u(-0.3, 0.3), "b2": u(-0.3, 0.3)})
    raise ValueError(f"no residual symmetry group stored for {c}")


# -- identities of the three-state tan/tanh/linear family ----------------------

def _h23(spec: ModelSpec, x):
    return models.case23_H(spec, tuple(x))


def pde_residual_A9(spec: ModelSpec, x, expected_c2: float,
                    h: float = 1e-3) -> float:
    """|LHS + 2*expected_c2| for the potential PDE
    (H_12 + x3*H_11 + H*H_13 - 2*H_1*H_3) / (H_1*sqrt(eps*H_1)) = -2*c2.

    Second partials by central differences of the analytic gradient.
    """
    if spec.case not in ("C231", "C232", "C233"):
        raise DomainError("PDE residual applies to the three-state H-family")
    models._require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    d = models._case23_data(spec, x)
    H, gH = d["H"], d["gradH"]
    h1, h3 = gH[0], gH[2]
    if spec.epsilon * h1 <= 0:
        raise DomainError("eps * H_x1 must be positive")

    def grad1(pt):
        return models._case23_data(spec, pt)["gradH"][0]

    second = np.zeros(3)
    for j in range(3):
        dx = np.zeros(3)
        dx[j] = h
        second[j] = (grad1(x + dx) - grad1(x - dx)) / (2.0 * h)
    h11, h12, h13 = second[0], second[1], second[2]
    lhs = (h12 + x[2] * h11 + H * h13 - 2.0 * h1 * h3) / (h1 * math.sqrt(spec.epsilon * h1))
    return abs(lhs + 2.0 * expected_c2)


def schwarzian_x1(spec: ModelSpec, x, h: float = 1e-3) -> float:
    """(3/4)(H_11/H_1)^2 - (1/2) H_111/H_1 by 5-point stencils in x^1."""
    if spec.case not in ("C231", "C232", "C233"):
        raise DomainError("Schwarzian check applies to the three-state H-family")
    models._require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    vals = np.array([_h23(spec, x + np.array([j * h, 0.0, 0.0]))
                     for j in (-2, -1, 0, 1, 2)])
    h1 = (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12.0 * h)
    h11 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12.0 * h ** 2)
    h111 = (-vals[0] + 2 * vals[1] - 2 * vals[3] + vals[4]) / (2.0 * h ** 3)
    if abs(h1) < 1e-10:
        raise DomainError("H_x1 vanishes; Schwarzian undefined")
    return 0.75 * (h11 / h1) ** 2 - 0.5 * h111 / h1
