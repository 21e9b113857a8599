"""Homogeneous point-affine control systems with quadratic cost.

Eight local models, their Pontryagin Hamiltonian flows (closed form and
numerical), canonical coframes with constant structure functions, and the
residual symmetry groups acting as point-affine isometries.
"""

from .models import CASE_TAGS, DomainError, ModelSpec
from .pmp import PhasePoint
from .integrate import IntegratorConfig, Trajectory

__all__ = [
    "CASE_TAGS",
    "DomainError",
    "ModelSpec",
    "PhasePoint",
    "IntegratorConfig",
    "Trajectory",
]

__version__ = "0.1.0"
