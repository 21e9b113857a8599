"""Canonical coframes, numerical structure functions, homogeneity tests.

Per case there is a canonical frame (v1, v2c[, v3c]), where v2c is the
control direction scaled to unit metric length when the case fixes it that
way, and a dual coframe evaluated in closed form.  Structure functions
T^i_jk = -eta^i([v_j, v_k]) are estimated with finite-difference brackets;
the structure is homogeneous exactly when they are constant in x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import models
from .models import DomainError, ModelSpec, _case23_data


@dataclass(frozen=True)
class StructureTensor:
    """Entries T[i, j, k], antisymmetric in (j, k)."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def pairs(self):
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(j + 1, n):
                    yield (i, j, k), self.entries[i, j, k]


def canonical_frame(spec: ModelSpec, x) -> np.ndarray:
    """Frame matrix, column i = i-th canonical frame field at x."""
    x = np.asarray(x, dtype=float)
    v1 = models.drift(spec, x)
    c = spec.case
    if c == "C11":
        v2 = np.array([0.0, math.exp(-spec.c1 * x[0])])
        return np.column_stack([v1, v2])
    if c == "C12":
        return np.column_stack([v1, models.control_field(spec, x)])
    if c == "C211":
        v2 = np.array([0.0, 0.0, 1.0])
        v3 = np.array([0.0, 1.0, spec.c3])
        return np.column_stack([v1, v2, v3])
    if c == "C212":
        s = spec.c1 * x[2]
        v2 = np.array([0.0, 0.0, s])
        v3 = np.array([0.0, s, 0.0])
        return np.column_stack([v1, v2, v3])
    if c == "C22":
        v2 = np.array([0.0, 0.0, x[1]])
        v3 = np.array([0.0, x[1], 2.0 * x[2]])
        return np.column_stack([v1, v2, v3])
    # Case 2.3 family: v2c = eps*f*W with f = 1/sqrt(eps*H_x1),
    # v3c = -[v1, v2c] assembled from the analytic first derivatives.
    d = _case23_data(spec, x)
    eps = float(spec.epsilon)
    f, gf, W, DW = d["f"], d["gradf"], d["W"], d["DW"]
    v2 = eps * f * W
    Dv1 = models.drift_jacobian(spec, x)
    Dv2 = eps * (np.outer(W, gf) + f * DW)
    v3 = Dv1 @ v2 - Dv2 @ v1
    return np.column_stack([v1, v2, v3])


def coframe(spec: ModelSpec, x) -> np.ndarray:
    """Coframe matrix, row i = components of eta^i in dx^1..dx^n."""
    models._require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c == "C11":
        return np.array([[1.0, 0.0],
                         [0.0, math.exp(spec.c1 * x[0])]])
    if c == "C12":
        return np.array([[1.0 / x[1], 0.0],
                         [-spec.j0 / x[1], 1.0 / x[1]]])
    if c == "C211":
        return np.array([[1.0, 0.0, 0.0],
                         [-spec.c2 * x[1], -spec.c3, 1.0],
                         [-x[2], 1.0, 0.0]])
    if c == "C212":
        s = spec.c1 * x[2]
        return np.array([[1.0, 0.0, 0.0],
                         [-spec.c3 / spec.c1, 0.0, 1.0 / s],
                         [-1.0 / spec.c1, 1.0 / s, 0.0]])
    if c == "C22":
        x1, x2, x3 = x
        j = 1.5 * (x3 / x2) ** 2 + spec.c1
        jx3 = 3.0 * x3 / x2 ** 2
        eta1 = np.array([1.0 / x2, 0.0, 0.0])
        eta3 = np.array([-x3 / x2 ** 2, 1.0 / x2, 0.0])
        corr = jx3 - x3 / x2 ** 2
        eta2 = np.array([-j / x2 + corr * x3 / x2, -corr, 1.0 / x2])
        return np.vstack([eta1, eta2, eta3])
    # Case 2.3: eta1 = dx1 - x3 dx2, eta3 = f (H dx2 - dx3); eta2 is the
    # mod-eta3 representative corrected so that eta2(v3c) = 0.
    d = _case23_data(spec, x)
    eps = float(spec.epsilon)
    f, gf, H, J = d["f"], d["gradf"], d["H"], d["J"]
    x3 = x[2]
    eta1 = np.array([1.0, -x3, 0.0])
    eta3 = np.array([0.0, f * H, -f])
    eta2_0 = (eps / f) * np.array([-J, 1.0 + J * x3, 0.0])
    wf = x3 * gf[0] + gf[1] + H * gf[2]
    wj = spec.c1 * wf
    kappa = -(gf[0] + J * wf - f * wj) / f
    eta2 = eta2_0 - kappa * eta3
    return np.vstack([eta1, eta2, eta3])


def duality_defect(spec: ModelSpec, x) -> float:
    """Max-abs entry of coframe(x) @ frame(x) - I."""
    n = spec.dim
    prod = coframe(spec, x) @ canonical_frame(spec, x)
    return float(np.max(np.abs(prod - np.eye(n))))


def _fd_frame_jacobians(frame_fn, x, h):
    """Central-difference Jacobians of each frame column; [n][n, n] array."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    base = frame_fn(x)
    jac = np.zeros((base.shape[1], n, n))
    for j in range(n):
        dx = np.zeros(n)
        dx[j] = h
        plus = frame_fn(x + dx)
        minus = frame_fn(x - dx)
        jac[:, :, j] = ((plus - minus) / (2.0 * h)).T
    return jac


def structure_functions(spec: ModelSpec, x, h: float = 1e-5, *,
                        frame=None, coframe_fn=None) -> StructureTensor:
    """T^i_jk = -eta^i([v_j, v_k]) with finite-difference brackets.

    frame / coframe_fn let tests substitute perturbed structures; by default
    the case's canonical frame and coframe are used.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    frame = frame or (lambda p: canonical_frame(spec, p))
    coframe_fn = coframe_fn or (lambda p: coframe(spec, p))
    x = np.asarray(x, dtype=float)
    F = frame(x)
    eta = coframe_fn(x)
    n = F.shape[1]
    jac = _fd_frame_jacobians(frame, x, h)
    T = np.zeros((n, n, n))
    for j in range(n):
        for k in range(j + 1, n):
            bracket = jac[k] @ F[:, j] - jac[j] @ F[:, k]
            Tjk = -eta @ bracket
            T[:, j, k] = Tjk
            T[:, k, j] = -Tjk
    return StructureTensor(T)


def homogeneity_check(spec: ModelSpec, points, h: float = 1e-5,
                      tol: float = 1e-5, *, frame=None, coframe_fn=None) -> dict:
    """Constancy of all structure functions across the sample points."""
    points = [np.asarray(p, dtype=float) for p in points]
    if frame is None:
        points = [p for p in points if models.in_domain(spec, p)]
    if len(points) < 2:
        raise DomainError("homogeneity check needs at least 2 valid points")
    tensors = [structure_functions(spec, p, h, frame=frame,
                                   coframe_fn=coframe_fn).entries
               for p in points]
    stack = np.stack(tensors)
    spread = float(np.max(stack.max(axis=0) - stack.min(axis=0)))
    return {"pass": spread <= tol, "max_spread": spread}


def perturbed_c11_frames(a: float = 1.0, b: float = 0.1):
    """Two-state frames for the inhomogeneous metric G = exp(2*a*x1*(1 + b*x2^2)).

    Negative control for homogeneity_check: G_x1/(2G) then depends on x2, so
    T^2_12 is no longer constant.
    """

    def g(x):
        return math.exp(2.0 * a * x[0] * (1.0 + b * x[1] ** 2))

    def frame(x):
        return np.array([[1.0, 0.0], [0.0, 1.0 / math.sqrt(g(x))]])

    def cof(x):
        return np.array([[1.0, 0.0], [0.0, math.sqrt(g(x))]])

    return frame, cof
