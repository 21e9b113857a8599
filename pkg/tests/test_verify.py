"""Residual symmetry groups and the potential-family identity checks."""

import math

import numpy as np
import pytest

from pointaffine import catalog, integrate as integ, models, pmp, verify
from pointaffine.models import DomainError, ModelSpec
from pointaffine.pmp import PhasePoint
from pointaffine.verify import SymmetryTransform


def test_identity_transforms_fix_points(rng):
    for case in verify.SYMMETRY_CASES:
        spec = catalog.default_spec(case)
        sym = verify.identity_symmetry(case)
        x = catalog.sample_states(spec, 1, rng)[0]
        assert np.allclose(verify.apply_symmetry(spec, sym, x), x, atol=1e-14)
        r = verify.isometry_residual(spec, sym, x)
        assert max(r.values()) < 1e-9


def test_c12_scaling_example():
    spec = ModelSpec("C12", j0=0.5)
    sym = SymmetryTransform("C12", {"a": 2.0, "b": 0.0})
    assert np.allclose(verify.apply_symmetry(spec, sym, [0.7, 1.0]),
                       [1.4, 2.0])


def test_c11_translation_example():
    spec = ModelSpec("C11", c1=1.0)
    sym = SymmetryTransform("C11", {"a": 0.5, "b": 0.2})
    x = verify.apply_symmetry(spec, sym, [0.0, 1.0])
    assert np.allclose(x, [0.5, math.exp(-0.5) + 0.2])


def test_symmetry_guards():
    spec = ModelSpec("C22", c1=0.2)
    with pytest.raises(ValueError):
        verify.apply_symmetry(spec, SymmetryTransform(
            "C22", {"a": 1.0, "b": 0.0, "c": 0.0, "d": 0.0}), [0.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        SymmetryTransform("C232", {})
    with pytest.raises(DomainError):
        # LFT pole at x1 = 1
        verify.apply_symmetry(spec, SymmetryTransform(
            "C22", {"a": 1.0, "b": 0.0, "c": 1.0, "d": -1.0}), [1.0, 1.0, 0.0])


@pytest.mark.parametrize("case", ["C11", "C12", "C22"])
def test_group_closure(case, rng):
    spec = catalog.default_spec(case)
    for _ in range(4):
        s1 = verify.random_symmetry(spec, rng)
        s2 = verify.random_symmetry(spec, rng)
        composed = verify.compose_symmetry(spec, s1, s2)
        x = catalog.sample_states(spec, 1, rng)[0]
        try:
            seq = verify.apply_symmetry(
                spec, s1, verify.apply_symmetry(spec, s2, x))
        except DomainError:
            continue
        assert np.allclose(verify.apply_symmetry(spec, composed, x), seq,
                           atol=1e-9)


@pytest.mark.parametrize("case", verify.SYMMETRY_CASES)
def test_isometry_residuals_small(case, rng):
    spec = catalog.default_spec(case)
    pts = catalog.sample_states(spec, 5, rng)
    for _ in range(3):
        sym = verify.random_symmetry(spec, rng)
        for x in pts:
            try:
                r = verify.isometry_residual(spec, sym, x)
            except DomainError:
                continue
            assert max(r.values()) < 1e-6, (case, r)


def test_isometry_residual_converges_quadratically():
    spec = catalog.default_spec("C22")
    sym = SymmetryTransform("C22", {"a": 1.1, "b": 0.2, "c": 0.15, "d": 0.9})
    x = np.array([0.3, 0.8, 0.4])
    r1 = verify.isometry_residual(spec, sym, x, h=2e-3)["drift_err"]
    r2 = verify.isometry_residual(spec, sym, x, h=1e-3)["drift_err"]
    assert 2.5 < r1 / r2 < 6.0


def test_non_member_map_fails():
    spec = ModelSpec("C11", c1=1.0)
    r = verify.isometry_residual(spec, None, [0.3, -0.4],
                                 transform=lambda z: np.array([z[0], 2 * z[1]]))
    assert r["metric_err"] > 0.1


def test_symmetry_maps_flows_to_admissible_curves(rng):
    """Pushed-forward velocity minus drift must stay parallel to v2."""
    spec = catalog.default_spec("C22")
    traj = integ.integrate(spec, catalog.default_phase_point("C22"), (0.0, 2.0))
    sym = SymmetryTransform("C22", {"a": 1.05, "b": 0.1, "c": 0.08, "d": 0.95})
    phi = lambda z: verify.apply_symmetry(spec, sym, z)
    for i in range(0, len(traj), max(1, len(traj) // 15)):
        x, p = traj.states[i], traj.costates[i]
        u = pmp.optimal_control(spec, PhasePoint(x, p))
        Dphi = verify._fd_jacobian(phi, x, 1e-5)
        y = phi(x)
        ydot = Dphi @ (models.drift(spec, x)
                       + u * models.control_field(spec, x))
        w = ydot - models.drift(spec, y)
        v2 = models.control_field(spec, y)
        unit = v2 / np.linalg.norm(v2)
        assert np.linalg.norm(w - (w @ unit) * unit) < 1e-5


def test_pde_residual_examples(rng):
    # affine potential, zero constant
    spec = ModelSpec("C231", c1=0.1, c2=0.0, epsilon=1)
    assert verify.pde_residual_A9(spec, [0.2, 0.1, -0.3], 0.0) < 1e-12
    # affine potential with slope constant 3
    spec = ModelSpec("C231", c1=0.1, c2=3.0, epsilon=1)
    assert verify.pde_residual_A9(spec, [0.2, 0.1, -0.3], 3.0) < 1e-9
    assert verify.pde_residual_A9(spec, [0.2, 0.1, -0.3], 0.0) > 1.0
    # tan branch with nonzero free function: constant is zero
    spec = ModelSpec("C232", c3=0.25, c4=1.0, epsilon=1, f20_coeffs=(1.0, 1.0))
    for x in catalog.sample_states(spec, 5, rng):
        assert verify.pde_residual_A9(spec, x, 0.0) < 1e-5
    with pytest.raises(DomainError):
        verify.pde_residual_A9(ModelSpec("C11"), [0.0, 0.0], 0.0)


def test_schwarzian_targets(rng):
    for case, target in (("C231", 0.0), ("C232", -0.25 ** 2), ("C233", 0.5 ** 2)):
        spec = catalog.default_spec(case)
        for x in catalog.sample_states(spec, 4, rng):
            assert verify.schwarzian_x1(spec, x) == pytest.approx(target,
                                                                  abs=1e-4)
