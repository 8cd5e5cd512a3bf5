import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gptentropy import kernels, models
from gptentropy.core import InputError, Model, mix
from gptentropy.entropy import EvalConfig
from gptentropy.info import binary_entropy
from gptentropy.optimize import (
    Box,
    DecompositionCode,
    decode_decomposition,
    encode_decomposition,
    local_search,
    optimize_decomposition,
)

SQ, QB, CL = Model.squared(), Model.qubit(), Model.classical(3)
UNIT = Box([0.0], [1.0])


def test_quadratic_optimum():
    out = local_search(lambda x: -((x[0] - 0.3) ** 2), UNIT, True, 4, 200, 0)
    assert out.best_point[0] == pytest.approx(0.3, abs=1e-6)
    assert out.best_value == pytest.approx(0.0, abs=1e-6)
    assert out.feasible


def test_affine_goes_to_endpoint():
    out = local_search(lambda x: 2 * x[0] + 1, UNIT, True, 4, 200, 0)
    assert out.best_point[0] == 1.0


def test_binary_entropy_maximum():
    out = local_search(lambda x: binary_entropy(x[0]), UNIT, True, 4, 200, 0)
    assert out.best_point[0] == pytest.approx(0.5, abs=1e-6)
    assert out.best_value == pytest.approx(1.0, abs=1e-9)


def test_empty_box_is_input_error():
    with pytest.raises(InputError):
        Box([1.0], [0.0])
    with pytest.raises(InputError):
        local_search(lambda x: 0.0, UNIT, True, 0, 10, 0)


def test_infeasible_everywhere():
    out = local_search(lambda x: float("nan"), UNIT, True, 3, 10, 0)
    assert not out.feasible


def test_warm_start_is_restart_zero():
    out = local_search(lambda x: -abs(x[0] - 0.7), UNIT, True, 1, 1, 5, starts=[[0.7]])
    assert out.best_point == (0.7,) and out.restart == 0


@given(st.integers(0, 1000))
def test_result_is_inside_box_and_reproducible(seed):
    box = Box([-1.0, 0.0], [1.0, 2.0])

    def f(x):
        return math.sin(3 * x[0]) * math.cos(2 * x[1])

    out = local_search(f, box, False, 3, 50, seed)
    assert box.contains(out.best_point)
    assert f(out.best_point) == pytest.approx(out.best_value, abs=1e-12)


def test_thread_count_does_not_change_result(monkeypatch):
    obj = kernels.SquaredInduction(0.3, 0.6, 4, kernels.INNER_MAX)
    box = Box([0.0] * 9, [1.0] * 9)
    runs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("GPT_ENTROPY_THREADS", threads)
        runs.append(local_search(obj, box, True, 8, 100, 3))
    assert runs[0] == runs[1]


@pytest.mark.parametrize("model,s", [(SQ, (0.3, 0.4)), (QB, (0.1, 0.2, 0.3)), (CL, (0.2, 0.3, 0.5))])
def test_k1_decodes_to_trivial_ensemble(model, s):
    ens = decode_decomposition(model, s, DecompositionCode((), 1))
    assert ens.weights == (1.0,)
    assert ens.states[0].coords == pytest.approx(s)


def test_edge_decomposition_decodes():
    code = DecompositionCode((0.5, 1.0, 0.3), 2)
    ens = decode_decomposition(SQ, (0.5, 0.3), code)
    assert ens.weights == pytest.approx((0.5, 0.5))
    assert ens.states[0].coords == pytest.approx((1.0, 0.3))
    assert ens.states[1].coords == pytest.approx((0.0, 0.3), abs=1e-12)


def test_out_of_box_component_is_infeasible():
    assert decode_decomposition(SQ, (0.9, 0.5), DecompositionCode((0.5, 0.1, 0.5), 2)) is None


def test_pure_only_rejects_mixed_members():
    code = DecompositionCode((0.5, 1.0, 0.3), 2)
    assert decode_decomposition(SQ, (0.5, 0.3), code, pure_only=True) is None
    code = DecompositionCode((0.5, 1.0, 1.0), 2)
    assert decode_decomposition(SQ, (0.5, 0.5), code, pure_only=True) is not None


def test_code_length_is_checked():
    with pytest.raises(InputError):
        decode_decomposition(SQ, (0.5, 0.5), DecompositionCode((0.5,), 2))


def test_small_weights_are_dropped():
    ens = decode_decomposition(SQ, (0.5, 0.5), DecompositionCode((1e-12, 1.0, 1.0), 2))
    assert len(ens) == 1


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_decoded_ensembles_mix_to_target(seed, k):
    rng = np.random.default_rng(seed)
    for model in (SQ, QB, CL):
        s = models.random_state(model, rng)
        lo, hi = models.state_chart_box(model)
        values = list(rng.uniform(0, 1, k - 1)) + list(rng.uniform(lo * (k - 1), hi * (k - 1)))
        ens = decode_decomposition(model, s, DecompositionCode(values, k))
        if ens is not None:
            np.testing.assert_allclose(mix(model, ens).coords, s, atol=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_encode_decode_round_trip(seed):
    rng = np.random.default_rng(seed)
    s = models.random_state(SQ, rng)
    for W, S in models.decomposition_seeds(SQ, s):
        code = encode_decomposition(SQ, s, W, S, 4)
        ens = decode_decomposition(SQ, s, DecompositionCode(code, 4))
        assert ens is not None
        np.testing.assert_allclose(mix(SQ, ens).coords, s, atol=1e-9)


def test_constant_objective_keeps_trivial_ensemble():
    out = optimize_decomposition(SQ, (0.4, 0.6), lambda W, S: 0.0, 4, False, EvalConfig())
    assert out.value == 0.0
    assert out.ensemble.weights == (1.0,)


def test_induction_body_reaches_closed_value():
    obj = kernels.SquaredInduction(0.5, 0.5, 4, kernels.INNER_MAX)
    out = optimize_decomposition(
        SQ, (0.5, 0.5), None, 4, False, EvalConfig(),
        seeds=models.decomposition_seeds(SQ, (0.5, 0.5)), code_objective=obj,
    )
    assert out.value == pytest.approx(2.0, abs=5e-3)


def test_pure_mixing_entropy_minimum():
    out = optimize_decomposition(
        SQ, (0.5, 0.5), lambda W, S: kernels.shannon(W), 4, True, EvalConfig(), maximize=False
    )
    assert out.value == pytest.approx(1.0, abs=5e-3)
    assert out.ensemble.pure_only


@given(st.integers(0, 2**32 - 1))
def test_baseline_dominance(seed):
    rng = np.random.default_rng(seed)
    s = tuple(rng.uniform(0, 1, 2))

    def objective(W, S):
        return math.fsum(p * models.squared_s1_closed(x) for p, x in zip(W, S))

    out = optimize_decomposition(SQ, s, objective, 3, False, EvalConfig(restarts=2, iters=20))
    assert out.value >= models.squared_s1_closed(s)
