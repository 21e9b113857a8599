"""Catalog of homogeneous point-affine models with quadratic cost.

Eight local models on R^2 / R^3, each a triple (v1, v2, G): drift field,
control field, and a positive metric factor defining the cost
Q(v1 + u*v2) = (1/2) G(x) u^2.  All evaluations are plain numpy; everything
here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CASE_TAGS = ("C11", "C12", "C211", "C212", "C22", "C231", "C232", "C233")

_DIMS = {
    "C11": 2, "C12": 2,
    "C211": 3, "C212": 3, "C22": 3, "C231": 3, "C232": 3, "C233": 3,
}

# Guard on |cos(c3*x1)| for the tan-branch model: past this the tangent
# exceeds ~1e12 and every formula downstream is pure noise.
_COS_FLOOR = 1e-12


class DomainError(ValueError):
    """Raised when a catalog formula is evaluated outside its domain."""


@dataclass(frozen=True)
class ModelSpec:
    """One catalog model: a case tag plus the constants that case uses.

    f20_coeffs are polynomial coefficients of the free function of x^2 in the
    tan/tanh cases, low degree first; the empty tuple is the zero function.
    """

    case: str
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    j0: float = 0.0
    g0: float = 1.0
    epsilon: int = 1
    f20_coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.case not in CASE_TAGS:
            raise ValueError(f"unknown case tag {self.case!r}")
        object.__setattr__(self, "f20_coeffs", tuple(float(c) for c in self.f20_coeffs))

    @property
    def dim(self) -> int:
        return _DIMS[self.case]


def dim_of(case: str) -> int:
    return _DIMS[case]


def _poly(coeffs, s):
    out = 0.0
    for c in reversed(coeffs):
        out = out * s + c
    return out


def _poly_deriv(coeffs):
    return tuple(i * c for i, c in enumerate(coeffs))[1:]


def validate(spec: ModelSpec) -> list[str]:
    """Return every violated parameter constraint; empty list means ok."""
    errors = []
    if spec.case in ("C12", "C22", "C231", "C232", "C233") and not spec.g0 > 0:
        errors.append("g0 must be positive")
    if spec.case == "C212" and spec.c1 == 0:
        errors.append("c1 must be nonzero")
    if spec.case in ("C232", "C233") and spec.c3 == 0:
        errors.append("c3 must be nonzero")
    if spec.case in ("C231", "C232", "C233") and spec.epsilon not in (-1, 1):
        errors.append("epsilon must be -1 or +1")
    # epsilon = sgn(H_x1) is forced by the model: tan branch needs
    # epsilon*c3 > 0, tanh branch epsilon*c3 < 0.
    if spec.case == "C232" and spec.epsilon in (-1, 1) and spec.c3 != 0 \
            and spec.epsilon * spec.c3 <= 0:
        errors.append("epsilon must equal sign(c3)")
    if spec.case == "C233" and spec.epsilon in (-1, 1) and spec.c3 != 0 \
            and spec.epsilon * spec.c3 >= 0:
        errors.append("epsilon must equal -sign(c3)")
    return errors


def _check_valid(spec: ModelSpec):
    errs = validate(spec)
    if errs:
        raise DomainError(f"invalid spec for {spec.case}: " + "; ".join(errs))


def singular_slacks(spec: ModelSpec, x) -> list[float]:
    """Strictly-positive quantities whose vanishing marks a singular locus."""
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c in ("C12", "C22"):
        return [abs(x[1])]
    if c == "C212":
        return [abs(x[2])]
    if c == "C232":
        return [abs(math.cos(spec.c3 * x[0])) - _COS_FLOOR,
                spec.c3 * x[2] ** 2 + spec.c4]
    if c == "C233":
        return [spec.c3 * x[2] ** 2 - spec.c4]
    return []


def in_domain(spec: ModelSpec, x) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim,) or not np.all(np.isfinite(x)):
        return False
    if validate(spec):
        return False
    return all(s > 0 for s in singular_slacks(spec, x))


def _require_domain(spec: ModelSpec, x):
    if not in_domain(spec, x):
        raise DomainError(f"point {np.asarray(x)} outside domain of {spec.case}")


# -- Case 2.3 shared pieces ---------------------------------------------------
#
# All three tan/tanh/linear models share the structure
#   W = (x3, 1, H),  v1 = e1 + J*W,  v2 = eps*W,  G = g0,
# with J = c1 / sqrt(eps * H_x1).

def case23_H(spec: ModelSpec, x) -> float:
    x1, x2, x3 = x
    eps = spec.epsilon
    if spec.case == "C231":
        return eps * (x1 + spec.c2 * x3)
    if spec.case == "C232":
        a = spec.c3 * x3 ** 2 + spec.c4
        return a * math.tan(spec.c3 * x1) + _poly(spec.f20_coeffs, x2) * math.sqrt(a)
    if spec.case == "C233":
        b = spec.c3 * x3 ** 2 - spec.c4
        return -b * math.tanh(spec.c3 * x1) + _poly(spec.f20_coeffs, x2) * math.sqrt(b)
    raise ValueError(f"{spec.case} is not a three-state tan/tanh/linear case")


def _case23_data(spec: ModelSpec, x):
    """H, J, the shared direction W and their first derivatives."""
    x1, x2, x3 = x
    eps = float(spec.epsilon)
    c1, c3, c4 = spec.c1, spec.c3, spec.c4
    f20 = _poly(spec.f20_coeffs, x2)
    f20p = _poly(_poly_deriv(spec.f20_coeffs), x2)

    if spec.case == "C231":
        H = eps * (x1 + spec.c2 * x3)
        gH = np.array([eps, 0.0, eps * spec.c2])
        f = 1.0
        gf = np.zeros(3)
    elif spec.case == "C232":
        a = c3 * x3 ** 2 + c4
        s = math.sqrt(a)
        t = math.tan(c3 * x1)
        H = a * t + f20 * s
        gH = np.array([
            c3 * a * (1.0 + t * t),
            f20p * s,
            2.0 * c3 * x3 * t + f20 * c3 * x3 / s,
        ])
        rad = eps * c3 * a  # > 0 in domain
        cos = math.cos(c3 * x1)
        f = cos / math.sqrt(rad)
        gf = np.array([
            -c3 * math.sin(c3 * x1) / math.sqrt(rad),
            0.0,
            -eps * c3 ** 2 * x3 * cos / rad ** 1.5,
        ])
    else:  # C233
        b = c3 * x3 ** 2 - c4
        s = math.sqrt(b)
        th = math.tanh(c3 * x1)
        H = -b * th + f20 * s
        sech2 = 1.0 - th * th
        gH = np.array([
            -b * c3 * sech2,
            f20p * s,
            -2.0 * c3 * x3 * th + f20 * c3 * x3 / s,
        ])
        rad = -eps * c3 * b  # > 0 in domain
        cosh = math.cosh(c3 * x1)
        f = cosh / math.sqrt(rad)
        gf = np.array([
            c3 * math.sinh(c3 * x1) / math.sqrt(rad),
            0.0,
            eps * c3 ** 2 * x3 * cosh / rad ** 1.5,
        ])

    W = np.array([x3, 1.0, H])
    DW = np.zeros((3, 3))
    DW[0, 2] = 1.0
    DW[2, :] = gH
    return {"H": H, "gradH": gH, "f": f, "gradf": gf,
            "J": c1 * f, "gradJ": c1 * gf, "W": W, "DW": DW}


# -- frame fields --------------------------------------------------------------

def drift(spec: ModelSpec, x) -> np.ndarray:
    """Null-control velocity v1(x)."""
    _require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c == "C11":
        return np.array([1.0, 0.0])
    if c == "C12":
        return np.array([x[1], spec.j0 * x[1]])
    if c == "C211":
        return np.array([1.0, x[2], spec.c2 * x[1] + spec.c3 * x[2]])
    if c == "C212":
        return np.array([1.0, x[2], spec.c3 * x[2]])
    if c == "C22":
        j = 1.5 * (x[2] / x[1]) ** 2 + spec.c1
        return np.array([x[1], x[2], x[1] * j])
    d = _case23_data(spec, x)
    out = d["J"] * d["W"]
    out[0] += 1.0
    return out


def control_field(spec: ModelSpec, x) -> np.ndarray:
    """Direction v2(x) multiplying the control."""
    _require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c == "C11":
        return np.array([0.0, 1.0])
    if c == "C12":
        return np.array([0.0, x[1]])
    if c in ("C211", "C212"):
        return np.array([0.0, 0.0, 1.0])
    if c == "C22":
        return np.array([0.0, 0.0, x[1]])
    d = _case23_data(spec, x)
    return spec.epsilon * d["W"]


def drift_jacobian(spec: ModelSpec, x) -> np.ndarray:
    """d v1 / d x, rows indexed by component."""
    _require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c == "C11":
        return np.zeros((2, 2))
    if c == "C12":
        return np.array([[0.0, 1.0], [0.0, spec.j0]])
    if c == "C211":
        return np.array([[0.0, 0.0, 0.0],
                         [0.0, 0.0, 1.0],
                         [0.0, spec.c2, spec.c3]])
    if c == "C212":
        return np.array([[0.0, 0.0, 0.0],
                         [0.0, 0.0, 1.0],
                         [0.0, 0.0, spec.c3]])
    if c == "C22":
        r = x[2] / x[1]
        return np.array([[0.0, 1.0, 0.0],
                         [0.0, 0.0, 1.0],
                         [0.0, spec.c1 - 1.5 * r * r, 3.0 * r]])
    d = _case23_data(spec, x)
    return np.outer(d["W"], d["gradJ"]) + d["J"] * d["DW"]


def control_jacobian(spec: ModelSpec, x) -> np.ndarray:
    """d v2 / d x."""
    _require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c == "C11":
        return np.zeros((2, 2))
    if c == "C12":
        return np.array([[0.0, 0.0], [0.0, 1.0]])
    if c in ("C211", "C212"):
        return np.zeros((3, 3))
    if c == "C22":
        out = np.zeros((3, 3))
        out[2, 1] = 1.0
        return out
    d = _case23_data(spec, x)
    return spec.epsilon * d["DW"]


def metric_G(spec: ModelSpec, x) -> float:
    """Positive metric factor G(x)."""
    _require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c == "C11":
        return math.exp(2.0 * spec.c1 * x[0])
    if c == "C211":
        return 1.0
    if c == "C212":
        return 1.0 / (spec.c1 * x[2]) ** 2
    return spec.g0


def metric_gradient(spec: ModelSpec, x) -> np.ndarray:
    _require_domain(spec, x)
    x = np.asarray(x, dtype=float)
    c = spec.case
    if c == "C11":
        g = math.exp(2.0 * spec.c1 * x[0])
        return np.array([2.0 * spec.c1 * g, 0.0])
    if c == "C212":
        return np.array([0.0, 0.0, -2.0 / (spec.c1 ** 2 * x[2] ** 3)])
    return np.zeros(spec.dim)


def cost_Q(spec: ModelSpec, x, u: float) -> float:
    """Quadratic cost Q(v1 + u*v2) = (1/2) G(x) u^2."""
    return 0.5 * metric_G(spec, x) * u * u


def frame_v3(spec: ModelSpec, x) -> np.ndarray:
    """Third frame field v3 = -[v1, v2] of the three-state cases."""
    if spec.dim != 3:
        raise DomainError(f"{spec.case} has no third frame field")
    v1 = drift(spec, x)
    v2 = control_field(spec, x)
    return drift_jacobian(spec, x) @ v2 - control_jacobian(spec, x) @ v1
