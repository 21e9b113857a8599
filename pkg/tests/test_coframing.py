"""Coframe duality, structure functions, homogeneity."""

import numpy as np
import pytest

from pointaffine import catalog, coframing, models
from pointaffine.models import ModelSpec


@pytest.mark.parametrize("case", models.CASE_TAGS)
def test_coframe_dual_to_frame(case, rng):
    spec = catalog.default_spec(case)
    for x in catalog.sample_states(spec, 6, rng):
        assert coframing.duality_defect(spec, x) < 1e-10


@pytest.mark.parametrize("case", models.CASE_TAGS)
def test_structure_functions_antisymmetric(case, rng):
    spec = catalog.default_spec(case)
    x = catalog.sample_states(spec, 1, rng)[0]
    T = coframing.structure_functions(spec, x).entries
    assert np.allclose(T, -np.swapaxes(T, 1, 2))


def test_printed_structure_constants(rng):
    # exponential-metric two-state case: T^2_12 = c1
    spec = ModelSpec("C11", c1=0.7)
    x = rng.uniform(-1, 1, 2)
    assert coframing.structure_functions(spec, x).entries[1, 0, 1] == \
        pytest.approx(0.7, abs=1e-5)
    # scaled two-state case: T^2_12 = -j0
    spec = ModelSpec("C12", j0=0.4)
    x = np.array([0.3, 1.2])
    assert coframing.structure_functions(spec, x).entries[1, 0, 1] == \
        pytest.approx(-0.4, abs=1e-5)
    # flat three-state case: T^3_13 = c3
    spec = ModelSpec("C211", c2=0.3, c3=0.6)
    x = rng.uniform(-1, 1, 3)
    assert coframing.structure_functions(spec, x).entries[2, 0, 2] == \
        pytest.approx(0.6, abs=1e-5)


@pytest.mark.parametrize("case", models.CASE_TAGS)
def test_homogeneity_all_cases(case, rng):
    spec = catalog.default_spec(case)
    pts = catalog.sample_states(spec, 6, rng)
    res = coframing.homogeneity_check(spec, pts)
    assert res["pass"], res


def test_homogeneity_negative_control(rng):
    frame, cof = coframing.perturbed_c11_frames()
    pts = rng.uniform(-1, 1, size=(8, 2))
    res = coframing.homogeneity_check(ModelSpec("C11", c1=1.0), pts,
                                      frame=frame, coframe_fn=cof)
    assert not res["pass"]
    assert res["max_spread"] > 1e-2


def test_structure_functions_bad_step():
    with pytest.raises(ValueError):
        coframing.structure_functions(ModelSpec("C11"), [0.0, 0.0], h=0.0)


def test_homogeneity_needs_points():
    with pytest.raises(models.DomainError):
        coframing.homogeneity_check(ModelSpec("C12"), [[0.0, 0.0]])


def test_pairs_enumeration():
    T = coframing.structure_functions(ModelSpec("C211"), [0.0, 0.1, 0.2])
    keys = [k for k, _ in T.pairs()]
    assert len(keys) == 9  # 3 components x 3 unordered index pairs
