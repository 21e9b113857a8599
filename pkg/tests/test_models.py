"""Model catalog: parameter validation, domains, and derivative oracles.

The analytic Jacobians and gradients are checked against central finite
differences of the fields themselves, case by case.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointaffine import catalog, models
from pointaffine.models import DomainError, ModelSpec


def test_unknown_case_rejected():
    with pytest.raises(ValueError):
        ModelSpec("C99")


def test_validate_constraints():
    assert models.validate(ModelSpec("C212", c1=0.0)) == ["c1 must be nonzero"]
    assert "g0 must be positive" in models.validate(ModelSpec("C12", g0=0.0))
    assert models.validate(ModelSpec("C232", c3=1.0, c4=1.0, epsilon=-1))
    assert models.validate(ModelSpec("C233", c3=1.0, c4=-1.0, epsilon=1))
    assert not models.validate(ModelSpec("C233", c3=1.0, c4=-1.0, epsilon=-1))
    for case in models.CASE_TAGS:
        assert models.validate(catalog.default_spec(case)) == []


def test_in_domain_singular_loci():
    assert not models.in_domain(ModelSpec("C12", g0=1.0), [0.0, 0.0])
    assert not models.in_domain(ModelSpec("C212", c1=1.0), [0.0, 1.0, 0.0])
    spec = ModelSpec("C232", c3=1.0, c4=1.0, epsilon=1)
    assert models.in_domain(spec, [0.0, 0.0, 0.0])
    assert not models.in_domain(spec, [math.pi / 2.0, 0.0, 0.0])
    spec33 = ModelSpec("C233", c3=1.0, c4=-1.0, epsilon=-1)
    assert models.in_domain(spec33, [0.0, 0.0, 0.0])  # -c4 > 0 everywhere
    assert not models.in_domain(
        ModelSpec("C233", c3=1.0, c4=1.0, epsilon=-1), [0.0, 0.0, 0.5])


def test_out_of_domain_raises():
    with pytest.raises(DomainError):
        models.drift(ModelSpec("C12"), [0.0, 0.0])


def _fd_jac(fn, x, h=1e-6):
    n = len(x)
    cols = []
    for j in range(n):
        dx = np.zeros(n)
        dx[j] = h
        cols.append((fn(x + dx) - fn(x - dx)) / (2 * h))
    return np.column_stack(cols)


@pytest.mark.parametrize("case", models.CASE_TAGS)
def test_jacobians_match_finite_differences(case, rng):
    spec = catalog.default_spec(case)
    for x in catalog.sample_states(spec, 5, rng):
        dj = _fd_jac(lambda z: models.drift(spec, z), x)
        assert np.allclose(models.drift_jacobian(spec, x), dj, atol=1e-7)
        cj = _fd_jac(lambda z: models.control_field(spec, z), x)
        assert np.allclose(models.control_jacobian(spec, x), cj, atol=1e-7)
        gg = _fd_jac(lambda z: np.array([models.metric_G(spec, z)]), x)[0]
        assert np.allclose(models.metric_gradient(spec, x), gg,
                           atol=1e-6 * max(1.0, models.metric_G(spec, x)))


@pytest.mark.parametrize("case", ["C211", "C212", "C22", "C231", "C232", "C233"])
def test_frame_v3_is_negative_bracket(case, rng):
    spec = catalog.default_spec(case)
    for x in catalog.sample_states(spec, 4, rng):
        dv1 = _fd_jac(lambda z: models.drift(spec, z), x)
        dv2 = _fd_jac(lambda z: models.control_field(spec, z), x)
        v3 = dv1 @ models.control_field(spec, x) - dv2 @ models.drift(spec, x)
        assert np.allclose(models.frame_v3(spec, x), v3, atol=1e-6)


def test_frame_v3_undefined_in_dim2():
    with pytest.raises(DomainError):
        models.frame_v3(ModelSpec("C11"), [0.0, 0.0])


def test_case232_f20_polynomial():
    spec = ModelSpec("C232", c3=1.0, c4=2.0, epsilon=1, f20_coeffs=(1.0, 1.0))
    x = (0.2, 0.5, 0.3)
    a = 1.0 * 0.3 ** 2 + 2.0
    expected = a * math.tan(0.2) + (1.0 + 0.5) * math.sqrt(a)
    assert models.case23_H(spec, x) == pytest.approx(expected, rel=1e-14)


@given(u=st.floats(-10, 10), v=st.floats(-10, 10))
@settings(max_examples=25, deadline=None)
def test_cost_nonnegative_and_convex(u, v):
    spec = ModelSpec("C12", j0=0.5, g0=2.0)
    x = [0.0, 1.0]
    q = lambda w: models.cost_Q(spec, x, w)
    assert q(u) >= 0.0
    assert q(0.5 * (u + v)) <= 0.5 * (q(u) + q(v)) + 1e-12
