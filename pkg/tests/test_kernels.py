"""The compiled kernels and the pure-Python fallback must agree."""
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gptentropy import _fallback as py
from gptentropy import kernels, models
from gptentropy.core import Model

cy = pytest.importorskip("gptentropy._kernels")

SQ, QB, CL = Model.squared(), Model.qubit(), Model.classical(3)
seeds = st.integers(0, 2**32 - 1)


def close(a, b, tol=1e-12):
    if a is None or b is None:
        return a is b
    if isinstance(a, float) and math.isnan(a):
        return math.isnan(b)
    return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), atol=tol, rtol=0)


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_scalar_kernels(a, b):
    assert close(cy.binary_entropy(a), py.binary_entropy(a))
    assert close(cy.squared_s3_exact(a, b), py.squared_s3_exact(a, b))
    assert close(cy.squared_s3_endpoints(a, b), py.squared_s3_endpoints(a, b))


@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_information_kernels(seed, nx, ny):
    rng = np.random.default_rng(seed)
    j = rng.dirichlet(np.ones(nx * ny)).reshape(nx, ny)
    assert close(cy.mutual_information(j), py.mutual_information(j.tolist()))
    assert close(cy.shannon(j.ravel()), py.shannon(j.ravel().tolist()))


def _code(rng, model, k):
    lo, hi = models.state_chart_box(model)
    return list(rng.uniform(0, 1, k - 1)) + list(rng.uniform(lo * (k - 1), hi * (k - 1)))


@given(seeds, st.integers(1, 5))
def test_decode_stick(seed, k):
    rng = np.random.default_rng(seed)
    for model in (SQ, QB, CL):
        s = models.random_state(model, rng)
        x = _code(rng, model, k)
        a = cy.decode_stick(x, s, k, models.chart_kind(model))
        b = py.decode_stick(x, s, k, models.chart_kind(model))
        assert (a is None) == (b is None)
        if a is not None:
            assert close(a[0], b[0]) and close(a[1], b[1])


@given(seeds, st.integers(1, 5))
def test_induction_objectives(seed, k):
    rng = np.random.default_rng(seed)
    c = models.random_state(SQ, rng)
    x = _code(rng, SQ, k)
    for inner in (py.INNER_ZERO, py.INNER_MIN, py.INNER_MAX, py.INNER_S3, py.INNER_SUM):
        assert close(cy.SquaredInduction(c[0], c[1], k, inner)(x), py.SquaredInduction(c[0], c[1], k, inner)(x))
    p = models.random_state(CL, rng)
    x = _code(rng, CL, k)
    assert close(cy.ClassicalInduction(p, k)(x), py.ClassicalInduction(p, k)(x))
    r = models.random_state(QB, rng)
    x = _code(rng, QB, k)
    assert close(cy.QubitInduction(r, k)(x), py.QubitInduction(r, k)(x), 1e-9)


@given(seeds, st.integers(1, 4), st.sampled_from([2, 3, 4]))
def test_measurement_objectives(seed, m, n):
    rng = np.random.default_rng(seed)
    W = list(rng.dirichlet(np.ones(m)))
    S = [models.random_state(SQ, rng) for _ in range(m)]
    for mode in (py.MODE_MI, py.MODE_HY):
        a = [rng.uniform()]
        assert close(cy.SquaredFgInfo(W, S, mode)(a), py.SquaredFgInfo(W, S, mode)(a))
    S = [models.random_state(QB, rng) for _ in range(m)]
    lo, hi = models.fg_box(QB, n)
    x = list(rng.uniform(lo, hi))
    a, b = cy.decode_povm(x, n), py.decode_povm(x, n)
    assert (a is None) == (b is None)
    if a is not None:
        assert close(a[0], b[0]) and close(a[1], b[1])
    for mode in (py.MODE_MI, py.MODE_HY):
        assert close(cy.QubitPovmInfo(W, S, n, mode)(x), py.QubitPovmInfo(W, S, n, mode)(x))


@given(seeds, st.integers(1, 4))
def test_projective_search(seed, m):
    rng = np.random.default_rng(seed)
    W = list(rng.dirichlet(np.ones(m)))
    S = [models.random_state(QB, rng) for _ in range(m)]
    r = list(np.asarray(W) @ np.asarray(S))
    va, ua = cy.projective_accinfo(W, S, r)
    vb, ub = py.projective_accinfo(W, S, r)
    assert close(va, vb, 1e-9)


def test_pattern_search_parity():
    def f(x):
        return -((x[0] - 0.3) ** 2) - (x[1] + 0.2) ** 2

    a = cy.pattern_search(f, [0.9, 0.9], [0.0, -1.0], [1.0, 1.0], 200, True)
    b = py.pattern_search(f, [0.9, 0.9], [0.0, -1.0], [1.0, 1.0], 200, True)
    assert close(a[0], b[0]) and a[1] == b[1] and a[2] == b[2]


def test_native_and_python_paths_agree():
    obj = cy.SquaredInduction(0.3, 0.6, 4, cy.INNER_MAX)
    x0 = [0.5, 0.5, 0.5, 0.3, 0.6, 0.3, 0.6, 0.3, 0.6]
    lo, hi = [0.0] * 9, [1.0] * 9
    native = cy.pattern_search(obj, x0, lo, hi, 100, True)
    wrapped = cy.pattern_search(lambda x: obj(x), x0, lo, hi, 100, True)
    assert native[1] == wrapped[1] and native[2] == wrapped[2]


def test_pure_python_fallback_end_to_end():
    import json
    import os
    import subprocess
    import sys

    code = (
        "import json; from gptentropy import *; import gptentropy.kernels as k;"
        "cfg = EvalConfig(restarts=4, iters=50);"
        "v = induce_once(EntropyFunctional('S2'), Model.squared(), (0.5, 0.5), cfg).value;"
        "q = evaluate(EntropyFunctional('Sq', 1), Model.qubit(), (0.3, 0, 0), cfg).value;"
        "print(json.dumps([k.BACKEND, v, q]))"
    )
    env = dict(os.environ, GPT_ENTROPY_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    backend, v, q = json.loads(proc.stdout)
    assert backend == "python"
    assert v == pytest.approx(2.0, abs=5e-3)
    assert q == pytest.approx(models.qubit_vn_entropy((0.3, 0, 0)), abs=1e-2)
