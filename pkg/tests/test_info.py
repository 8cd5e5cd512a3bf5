import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gptentropy import models
from gptentropy.core import InputError, Model, ensemble
from gptentropy.info import (
    binary_entropy,
    joint_distribution,
    mutual_information,
    shannon_entropy,
)

SQ = Model.squared()


@pytest.mark.parametrize(
    "x,h",
    [
        pytest.param(0.5, 1.0, id="maximum"),
        pytest.param(0.0, 0.0, id="zero"),
        pytest.param(1.0, 0.0, id="one"),
        pytest.param(0.2, 0.7219280948873623, id="0.2"),
    ],
)
def test_binary_entropy(x, h):
    assert binary_entropy(x) == pytest.approx(h, abs=1e-12)


def test_binary_entropy_domain():
    assert binary_entropy(1.0 + 1e-13) == 0.0
    with pytest.raises(InputError):
        binary_entropy(1.1)
    with pytest.raises(InputError):
        binary_entropy(-1e-6)


@pytest.mark.parametrize(
    "p,h",
    [
        pytest.param((0.25, 0.25, 0.25, 0.25), 2.0, id="uniform"),
        pytest.param((1.0, 0.0, 0.0), 0.0, id="deterministic"),
        pytest.param((0.5, 0.25, 0.25), 1.5, id="dyadic"),
    ],
)
def test_shannon_entropy(p, h):
    assert shannon_entropy(p) == pytest.approx(h, abs=1e-12)


def test_shannon_rejects_non_distributions():
    with pytest.raises(InputError):
        shannon_entropy((0.5, 0.6))
    with pytest.raises(InputError):
        shannon_entropy(())


def test_joint_distribution_example():
    ens = ensemble([0.5, 0.5], [(1, 0), (0, 1)])
    j = joint_distribution(SQ, ens, models.squared_fg_measurement(1.0))
    np.testing.assert_allclose(j, [[0.5, 0, 0, 0], [0, 0.5, 0, 0]], atol=1e-15)


@pytest.mark.parametrize(
    "j,i",
    [
        pytest.param([[0.5, 0.0], [0.0, 0.5]], 1.0, id="perfect"),
        pytest.param([[0.25, 0.25], [0.25, 0.25]], 0.0, id="independent"),
        pytest.param([[1.0]], 0.0, id="single cell"),
    ],
)
def test_mutual_information(j, i):
    assert mutual_information(j) == pytest.approx(i, abs=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
def test_mutual_information_bounds(seed, nx, ny):
    rng = np.random.default_rng(seed)
    j = rng.dirichlet(np.ones(nx * ny)).reshape(nx, ny)
    i = mutual_information(j)
    assert 0.0 <= i <= min(shannon_entropy(j.sum(1)), shannon_entropy(j.sum(0))) + 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_shannon_bounds(seed, n):
    p = np.random.default_rng(seed).dirichlet(np.ones(n))
    assert -1e-12 <= shannon_entropy(p) <= math.log2(n) + 1e-12


@given(st.floats(0.0, 1.0))
def test_binary_entropy_symmetry(x):
    assert binary_entropy(x) == pytest.approx(binary_entropy(1.0 - x), abs=1e-12)
