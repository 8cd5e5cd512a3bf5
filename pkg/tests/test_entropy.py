import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptentropy import models
from gptentropy.core import InputError, Model, ensemble
from gptentropy.entropy import (
    EntropyFunctional,
    EvalConfig,
    accessible_information,
    certificate_value,
    clear_caches,
    eval_s1,
    eval_s2,
    eval_s3,
    evaluate,
    holevo_report,
    induce_once,
)
from gptentropy.info import binary_entropy as h

SQ, QB = Model.squared(), Model.qubit()
CFG = EvalConfig()
TOL = CFG.tol
VN_06 = 0.721928
F = EntropyFunctional.parse


# ---------------------------------------------------------------- functionals


@pytest.mark.parametrize(
    "text,base,depth",
    [("S1", "S1", 0), ("S2'", "S2", 1), ("S2''", "S2", 2), ("Sq'", "Sq", 1), ("H", "H", 0)],
)
def test_parse_prime_notation(text, base, depth):
    f = F(text)
    assert (f.base, f.depth, f.label) == (base, depth, text)


def test_parse_closed_form_and_errors():
    f = F("closed:squared_s2prime'")
    assert f.base == "closed" and f.name == "squared_s2prime" and f.depth == 1
    for bad in ("S4", "S2'x", "closed:nope"):
        with pytest.raises(InputError):
            F(bad)


def test_config_validation():
    with pytest.raises(InputError):
        EvalConfig(restarts=0)
    with pytest.raises(InputError):
        EvalConfig(components_k=0)
    with pytest.raises(InputError):
        EvalConfig(tol=0.0)
    assert EvalConfig().k_for(SQ) == 4
    assert EvalConfig.full().restarts == 64 and EvalConfig.full().iters == 1000


@pytest.mark.parametrize(
    "f,model",
    [("H", SQ), ("Sq", SQ), ("H'", QB), ("Sq", Model.classical(2)), ("closed:qubit_vn", SQ)],
)
def test_unresolvable_pairs(f, model):
    with pytest.raises(InputError):
        evaluate(F(f), model, (0.5,) * model.dim if model.kind != "classical" else (0.5, 0.5))


def test_invalid_state_is_input_error():
    with pytest.raises(InputError):
        eval_s1(SQ, (1.5, 0.5))


# ---------------------------------------------------------------- S1 / S2 / S3


def test_eval_s1_examples():
    assert eval_s1(SQ, (0.2, 0.5)).value == pytest.approx(VN_06, abs=TOL)
    assert eval_s1(Model.classical(3), (0.5, 0.25, 0.25)).value == pytest.approx(1.5, abs=1e-9)
    assert eval_s1(QB, (0.0, 0.0, 0.6)).value == pytest.approx(VN_06, abs=TOL)
    assert eval_s1(SQ, (0.2, 0.5)).bound_direction == "upper"


def test_eval_s2_examples():
    assert eval_s2(SQ, (0.2, 0.5)).value == pytest.approx(1.0, abs=TOL)
    assert eval_s2(SQ, (1.0, 1.0)).value == 0.0
    assert eval_s2(QB, (0.0, 0.6, 0.0), EvalConfig(restarts=4, iters=100)).value == pytest.approx(VN_06, abs=TOL)
    assert eval_s2(SQ, (0.2, 0.5)).bound_direction == "lower"


def test_eval_s3_examples():
    assert eval_s3(SQ, (0.5, 0.5)).value == pytest.approx(1.0, abs=TOL)
    p = (0.2, 0.3, 0.5)
    assert eval_s3(Model.classical(3), p).value == pytest.approx(
        -sum(x * math.log2(x) for x in p), abs=1e-9
    )
    assert eval_s3(QB, (0.36, 0.0, 0.48)).value == pytest.approx(VN_06, abs=TOL)


@pytest.mark.parametrize("c1", [0.0, 0.15, 0.5, 0.85, 1.0])
def test_closed_form_consistency(c1):
    for c2 in (0.0, 0.05, 0.35, 0.5, 0.95):
        s = (c1, c2)
        assert abs(eval_s1(SQ, s).value - models.squared_s1_closed(s)) <= TOL
        assert abs(eval_s2(SQ, s).value - models.squared_s2_closed(s)) <= TOL
        assert abs(eval_s3(SQ, s).value - models.squared_s3_exact(s)) <= TOL


# ---------------------------------------------------------------- induction


def test_induce_once_examples():
    assert induce_once(F("S1"), SQ, (0.2, 0.5)).value == pytest.approx(1.0, abs=TOL)
    assert induce_once(F("S2"), SQ, (0.5, 0.5)).value == pytest.approx(2.0, abs=TOL)
    pure = induce_once(F("S2"), SQ, (0.5, 0.3), replace(CFG, pure_only=True)).value
    assert pure == pytest.approx(1.0, abs=TOL)
    assert pure < models.squared_s2prime_closed((0.5, 0.3)) - 0.8


def test_evaluate_examples():
    assert evaluate(F("S2''"), SQ, (0.5, 0.5)).value == pytest.approx(2.0, abs=TOL)
    assert evaluate(F("H'"), Model.classical(2), (0.3, 0.7)).value == pytest.approx(h(0.3), abs=TOL)
    assert evaluate(F("Sq'"), QB, (0.0, 0.0, 0.6)).value == pytest.approx(VN_06, abs=TOL)


def test_depth_zero_closed_bases_are_exact():
    r = evaluate(F("Sq"), QB, (0, 0, 0))
    assert r.value == 1.0 and r.bound_direction == "exact"
    assert evaluate(F("H"), Model.classical(2), (0.5, 0.5)).value == 1.0


def test_inner_source_recorded():
    r = induce_once(F("S2"), SQ, (0.4, 0.6))
    assert r.certificate["inner_source"] == "closed"
    r = induce_once(F("S2"), SQ, (0.4, 0.6), EvalConfig(restarts=2, iters=20, use_closed_forms=False))
    assert r.certificate["inner_source"] == "numerical"


def test_force_numerical_agrees_with_closed_forms():
    cfg = EvalConfig(restarts=4, iters=40, use_closed_forms=False)
    for s in ((0.5, 0.3), (0.2, 0.7)):
        assert induce_once(F("S2"), SQ, s, cfg).value == pytest.approx(
            models.squared_s2prime_closed(s), abs=TOL
        )
        assert induce_once(F("S1"), SQ, s, cfg).value == pytest.approx(
            models.squared_s2_closed(s), abs=TOL
        )


def test_components_k_sensitivity_is_reportable():
    # k = 2 already reaches the edge decompositions; larger k cannot do worse
    s = (0.3, 0.6)
    values = [induce_once(F("S2"), SQ, s, EvalConfig(components_k=k)).value for k in range(2, 7)]
    for v in values:
        assert v == pytest.approx(models.squared_s2prime_closed(s), abs=TOL)


@settings(max_examples=25)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.sampled_from(["S1", "S2", "S3"]))
def test_induction_is_monotone(c1, c2, base):
    s = (c1, c2)
    depth0 = models.closed_form(models.closed_form_name(SQ, base, 0))(s)
    assert induce_once(F(base), SQ, s).value >= depth0 - 1e-6


@pytest.mark.parametrize("corner", [(0, 0), (0, 1), (1, 0), (1, 1)])
@pytest.mark.parametrize("base", ["S1", "S2", "S3"])
def test_pure_states_have_zero_induced_entropy(corner, base):
    assert induce_once(F(base), SQ, corner).value <= 1e-6


@settings(max_examples=25)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_mixed_states_have_positive_s2prime(c1, c2):
    assert induce_once(F("S2"), SQ, (c1, c2)).value >= h(0.05) - 1e-9


# ---------------------------------------------------------------- certificates and budgets


CERT_CASES = [
    (SQ, (0.2, 0.5), "S1"), (SQ, (0.2, 0.5), "S2"), (SQ, (0.3, 0.6), "S3"),
    (QB, (0.1, 0.2, 0.3), "S1"), (QB, (0.1, 0.2, 0.3), "S3"),
    (SQ, (0.2, 0.5), "S1'"), (SQ, (0.3, 0.7), "S3'"), (SQ, (0.3, 0.7), "S2''"),
    (Model.classical(3), (0.2, 0.3, 0.5), "H'"), (QB, (0.1, 0.2, 0.3), "Sq'"),
    (QB, (0.1, 0.0, 0.0), "Sq"),
]


@pytest.mark.parametrize("model,s,f", CERT_CASES)
def test_certificate_soundness(model, s, f):
    r = evaluate(F(f), model, s)
    assert certificate_value(r, model, s) == pytest.approx(r.value, abs=1e-9)


def test_certificate_soundness_accessible_information():
    ens = ensemble([0.3, 0.3, 0.4], [(0, 0, 1), (1, 0, 0), (0, 0.6, 0.8)])
    r = accessible_information(QB, ens)
    assert certificate_value(r, QB, (0, 0, 0)) == pytest.approx(r.value, abs=1e-9)


@pytest.mark.parametrize("s", [(0.3, 0.6), (0.5, 0.5), (0.1, 0.8)])
def test_budget_monotonicity(s):
    small, large = EvalConfig(restarts=2, iters=30), EvalConfig(restarts=16, iters=30)
    for f in ("S1'", "S2'", "S3'"):
        clear_caches()
        lo = evaluate(F(f), SQ, s, small).value
        clear_caches()
        assert evaluate(F(f), SQ, s, large).value >= lo
    clear_caches()
    hi = eval_s1(QB, (0.1, 0.2, 0.3), small).value
    clear_caches()
    assert eval_s1(QB, (0.1, 0.2, 0.3), large).value <= hi


def test_warm_start_never_loses_ground():
    cfg = EvalConfig(restarts=1, iters=5)
    first = induce_once(F("S1"), SQ, (0.3, 0.6), cfg).value
    assert induce_once(F("S1"), SQ, (0.3, 0.6), cfg).value >= first


def test_concurrent_evaluation_is_deterministic(monkeypatch):
    states = [(0.1 * i, 0.9 - 0.1 * i) for i in range(1, 9)]
    clear_caches()
    serial = [induce_once(F("S1"), SQ, s).value for s in states]
    clear_caches()
    monkeypatch.setenv("GPT_ENTROPY_THREADS", "4")
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda s: induce_once(F("S1"), SQ, s).value, states))
    assert serial == threaded


# ---------------------------------------------------------------- accessible information and Holevo


def test_accessible_information_examples():
    assert accessible_information(SQ, ensemble([0.5, 0.5], [(1, 0), (0, 1)])).value == pytest.approx(1.0, abs=TOL)
    assert accessible_information(SQ, ensemble([1.0], [(0.3, 0.3)])).value == pytest.approx(0.0, abs=1e-12)
    assert accessible_information(QB, ensemble([0.5, 0.5], [(0, 0, 1), (0, 0, -1)])).value == pytest.approx(1.0, abs=TOL)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_numerical_accinfo_matches_closed(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 5))
    ens = ensemble(rng.dirichlet(np.ones(m)), rng.uniform(0, 1, (m, 2)))
    num = accessible_information(SQ, ens).value
    closed = models.squared_accinfo_closed(ens)
    assert closed - TOL <= num <= closed + 1e-6


def test_holevo_report_examples():
    r = holevo_report(SQ, ensemble([0.5, 0.5], [(1, 1), (0, 0)]), F("S1"))
    assert r["I_acc"] == pytest.approx(1.0, abs=TOL)
    assert r["bound"] == pytest.approx(1.0, abs=1e-12)
    assert r["gap"] == pytest.approx(0.0, abs=TOL) and r["gap_ok"]

    r = holevo_report(SQ, ensemble([0.5, 0.5], [(1, 0), (0, 1)]), F("S2"))
    assert (r["I_acc"], r["bound"], r["gap"]) == pytest.approx((1.0, 2.0, 1.0), abs=TOL)
    assert r["S_prime_source"] == "closed"

    chi = 0.600876
    r = holevo_report(QB, ensemble([0.5, 0.5], [(0, 0, 1), (1, 0, 0)]), F("Sq"))
    assert r["bound"] == pytest.approx(chi, abs=1e-6)
    assert r["I_acc"] <= chi + 1e-9


def test_holevo_single_member():
    r = holevo_report(SQ, ensemble([1.0], [(0.4, 0.7)]), F("S2"))
    assert r["I_acc"] == pytest.approx(0.0, abs=1e-12)
    assert r["gap"] == pytest.approx(models.squared_s2prime_closed((0.4, 0.7)) - models.squared_s2_closed((0.4, 0.7)))
    assert r["gap"] >= 0


def test_holevo_numerical_source_is_flagged():
    ens = ensemble([0.5, 0.5], [(0.8, 0.2), (0.1, 0.6)])
    r = holevo_report(SQ, ens, F("S2"), EvalConfig(restarts=2, iters=20, use_closed_forms=False))
    assert r["S_prime_source"] == "numerical"
    assert "shortfall" in r["note"]


@pytest.mark.parametrize(
    "inner,oracle",
    [
        ("INNER_MIN", models.squared_s2_closed),
        ("INNER_MAX", models.squared_s2prime_closed),
        ("INNER_S3", models.squared_s2prime_closed),
    ],
)
def test_unseeded_search_reaches_closed_forms(inner, oracle):
    # random restarts alone, without the edge-decomposition seeds
    from gptentropy import kernels
    from gptentropy.optimize import optimize_decomposition

    rng = np.random.default_rng(11)
    for _ in range(5):
        s = tuple(rng.uniform(0.05, 0.95, 2))
        obj = kernels.SquaredInduction(s[0], s[1], 4, getattr(kernels, inner))
        out = optimize_decomposition(SQ, s, None, 4, False, CFG, code_objective=obj)
        assert oracle(s) - TOL <= out.value <= oracle(s) + 1e-9
