"""Seeded verification suites checking closed forms and bounds.

Each check aggregates a family of cases and reports its worst case: ``got``
is the largest violation (or the relevant extreme value) and ``passed``
compares it against ``tolerance``.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import models
from .core import Model, ensemble, mix
from .entropy import (
    EntropyFunctional,
    EvalConfig,
    accessible_information,
    eval_s1,
    eval_s2,
    eval_s3,
    evaluate,
    induce_once,
)
from .info import binary_entropy, shannon_entropy

SQ = Model.squared()
QB = Model.qubit()
CLOSED_TOL = 1e-9


@dataclass
class Check:
    name: str
    expected: str
    got: float
    tolerance: float
    passed: bool
    cases: int = 1


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    wall_time: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "pass": self.passed,
            "checks": [asdict(c) for c in self.checks],
            "config": self.config,
            "notes": self.notes,
            "wall_time": self.wall_time,
        }


def _at_most(name, expected, worst, tol, cases=1) -> Check:
    return Check(name, expected, float(worst), tol, bool(worst <= tol), cases)


def _at_least(name, expected, worst, bound, cases=1) -> Check:
    return Check(name, expected, float(worst), bound, bool(worst >= bound), cases)


def _grid(step=0.05):
    n = int(round(1.0 / step))
    return [round(i * step, 12) for i in range(n + 1)]


def _h(c):
    return binary_entropy(c)


def _random_interior(rng, n, margin=0.05):
    return [tuple(rng.uniform(margin, 1.0 - margin, 2)) for _ in range(n)]


def full_budget(cfg: EvalConfig) -> EvalConfig:
    return replace(cfg, restarts=max(cfg.restarts, 64), iters=max(cfg.iters, 1000))


# --------------------------------------------------------------------------
# squared model


def chain_grid_checks(cfg: EvalConfig, step: float = 0.05) -> list:
    """Numerical S1, S2, S3 against the closed forms, and the closed chain."""
    e1 = e2 = e3 = chain = 0.0
    grid = [(a, b) for a in _grid(step) for b in _grid(step)]
    for s in grid:
        s1, s2 = models.squared_s1_closed(s), models.squared_s2_closed(s)
        s3, s2p = models.squared_s3_exact(s), models.squared_s2prime_closed(s)
        e1 = max(e1, abs(eval_s1(SQ, s, cfg).value - s1))
        e2 = max(e2, abs(eval_s2(SQ, s, cfg).value - s2))
        e3 = max(e3, abs(eval_s3(SQ, s, cfg).value - s3))
        chain = max(chain, s1 - s2, s2 - s3, s3 - s2p)
    n = len(grid)
    return [
        _at_most("eval_s1 vs min[h(c1),h(c2)]", "max abs error", e1, cfg.tol, n),
        _at_most("eval_s2 vs max[h(c1),h(c2)]", "max abs error", e2, cfg.tol, n),
        _at_most("eval_s3 vs exact S3", "max abs error", e3, cfg.tol, n),
        _at_most("closed chain S1 <= S2 <= S3 <= S2'", "max violation", chain, CLOSED_TOL, n),
    ]


def chain_induction_checks(cfg: EvalConfig, count: int = 25) -> list:
    """Induction identities at random interior states."""
    rng = np.random.default_rng(cfg.seed)
    states = _random_interior(rng, count)
    err = {"S1'": 0.0, "S2'": 0.0, "S3'": 0.0, "S2''": 0.0}
    for s in states:
        hs = (_h(s[0]), _h(s[1]))
        err["S1'"] = max(err["S1'"], abs(induce_once(EntropyFunctional("S1"), SQ, s, cfg).value - max(hs)))
        for base in ("S2", "S3"):
            v = induce_once(EntropyFunctional(base), SQ, s, cfg).value
            err[base + "'"] = max(err[base + "'"], abs(v - sum(hs)))
        v = evaluate(EntropyFunctional("S2", 2), SQ, s, cfg).value
        err["S2''"] = max(err["S2''"], abs(v - sum(hs)))
    return [
        _at_most("S1' = max[h(c1),h(c2)]", "max abs error", err["S1'"], cfg.tol, count),
        _at_most("S2' = h(c1)+h(c2)", "max abs error", err["S2'"], cfg.tol, count),
        _at_most("S3' = h(c1)+h(c2)", "max abs error", err["S3'"], cfg.tol, count),
        _at_most("S2'' = h(c1)+h(c2)", "max abs error", err["S2''"], max(1e-2, cfg.tol), count),
    ]


def pure_restriction_checks(cfg: EvalConfig) -> list:
    s = (0.5, 0.3)
    pure = induce_once(EntropyFunctional("S2"), SQ, s, replace(cfg, pure_only=True)).value
    closed = models.squared_s2prime_closed(s)
    return [
        _at_most("pure-only S2' at (0.5,0.3) <= 1", "value - 1", pure - 1.0, cfg.tol),
        _at_most("closed S2' at (0.5,0.3) = 1.881291", "abs error", abs(closed - 1.881291), 1e-6),
        _at_least("separation closed - pure-only", ">= 0.8 bits", closed - pure, 0.8),
    ]


def _random_squared_ensemble(rng):
    m = int(rng.integers(2, 5))
    return ensemble(rng.dirichlet(np.ones(m)), [tuple(rng.uniform(0, 1, 2)) for _ in range(m)])


def squared_holevo_checks(cfg: EvalConfig, count: int = 1000) -> list:
    rng = np.random.default_rng(cfg.seed)
    bound_viol = num_over = num_short = 0.0
    for _ in range(count):
        ens = _random_squared_ensemble(rng)
        closed = models.squared_accinfo_closed(ens)
        avg = math.fsum(p * models.squared_s2_closed(x) for p, x in zip(ens.weights, ens.states))
        bound = models.squared_s2prime_closed(mix(SQ, ens)) - avg
        bound_viol = max(bound_viol, closed - bound)
        num = accessible_information(SQ, ens, cfg).value
        num_over = max(num_over, num - closed)
        num_short = max(num_short, closed - num)
    return [
        _at_most("closed I_acc <= S2'(mix) - avg S2", "max violation", bound_viol, CLOSED_TOL, count),
        _at_most("numerical I_acc <= closed I_acc", "max excess", num_over, 1e-6, count),
        _at_most("numerical I_acc reaches closed I_acc", "max shortfall", num_short, cfg.tol, count),
    ]


def mixedness_checks(cfg: EvalConfig, count: int = 50) -> list:
    corner_max, interior_min, mono = 0.0, math.inf, -math.inf
    bases = ("S1", "S2", "S3")
    for corner in ((0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)):
        for b in bases:
            corner_max = max(corner_max, induce_once(EntropyFunctional(b), SQ, corner, cfg).value)
    inner = [c for c in _grid() if 0.05 - 1e-12 <= c <= 0.95 + 1e-12]
    for s in ((a, b) for a in inner for b in inner):
        for b in bases:
            interior_min = min(interior_min, induce_once(EntropyFunctional(b), SQ, s, cfg).value)
    rng = np.random.default_rng(cfg.seed)
    for s in (tuple(x) for x in rng.uniform(0, 1, (count, 2))):
        for b in bases:
            lower = models.closed_form(models.closed_form_name(SQ, b, 0))(s)
            mono = max(mono, lower - induce_once(EntropyFunctional(b), SQ, s, cfg).value)
    h05 = _h(0.05)
    return [
        _at_most("depth-1 S' at the four corners", "max value", corner_max, 1e-6, 12),
        # S1' equals h(0.05) exactly at (0.05, 0.05); allow rounding only
        _at_least("depth-1 S' on the margin-0.05 grid", f">= h(0.05) = {h05:.6f}", interior_min,
                  h05 - CLOSED_TOL, 3 * len(inner) ** 2),
        _at_most("induction monotonicity S' >= S", "max S - S'", mono, 1e-6, 3 * count),
    ]


def concavity_checks(cfg: EvalConfig, count: int = 1000) -> list:
    rng = np.random.default_rng(cfg.seed)
    worst = -math.inf
    for _ in range(count):
        s, t = rng.uniform(0, 1, 2), rng.uniform(0, 1, 2)
        lam = rng.uniform()
        m = lam * s + (1 - lam) * t
        f = models.squared_s2prime_closed
        worst = max(worst, lam * f(s) + (1 - lam) * f(t) - f(m))
    s, t = (0.5, 0.01), (0.01, 0.5)
    mid = (0.255, 0.255)
    f2 = models.squared_s2_closed
    deficit = 0.5 * (f2(s) + f2(t)) - f2(mid)
    return [
        _at_most("h(c1)+h(c2) concave on random pairs", "max concavity violation", worst, CLOSED_TOL, count),
        _at_least("max[h,h] concavity deficit at (0.5,0.01)/(0.01,0.5)", ">= 0.15 bits", deficit, 0.15),
    ]


# --------------------------------------------------------------------------
# classical and qubit


def classical_invariance_checks(cfg: EvalConfig, count: int = 50) -> list:
    rng = np.random.default_rng(cfg.seed)
    below, above = 0.0, 0.0
    for _ in range(count):
        d = int(rng.integers(2, 5))
        p = tuple(rng.dirichlet(np.ones(d)))
        h = shannon_entropy(p)
        v = evaluate(EntropyFunctional("H", 1), Model.classical(d), p, cfg).value
        below, above = max(below, h - v), max(above, v - h)
    return [
        _at_most("H' >= H", "max H - H'", below, 1e-6, count),
        _at_most("H' <= H + tol", "max H' - H", above, cfg.tol, count),
    ]


def _random_bloch(rng, pure=False):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return tuple(v if pure else v * rng.uniform() ** (1.0 / 3.0))


def qubit_invariance_checks(cfg: EvalConfig, count: int = 25) -> list:
    rng = np.random.default_rng(cfg.seed)
    err = 0.0
    for _ in range(count):
        r = _random_bloch(rng)
        v = evaluate(EntropyFunctional("Sq", 1), QB, r, cfg).value
        err = max(err, abs(v - models.qubit_vn_entropy(r)))
    return [_at_most("Sq' = Sq", "max abs error", err, max(1e-2, cfg.tol), count)]


def qubit_holevo_checks(cfg: EvalConfig, count: int = 200, pairs: int = 10) -> list:
    rng = np.random.default_rng(cfg.seed)
    excess = 0.0
    for _ in range(count):
        m = int(rng.integers(1, 5))
        ens = ensemble(rng.dirichlet(np.ones(m)), [_random_bloch(rng, pure=True) for _ in range(m)])
        excess = max(excess, accessible_information(QB, ens, cfg).value - models.qubit_chi(ens))
    err = 0.0
    for _ in range(pairs):
        u = _random_bloch(rng, pure=True)
        ens = ensemble([0.5, 0.5], [u, tuple(-c for c in u)])
        err = max(err, abs(accessible_information(QB, ens, cfg).value - 1.0))
    return [
        _at_most("qubit I_acc <= chi", "max excess", excess, 1e-6, count),
        _at_most("orthogonal pure pair I_acc = 1", "max abs error", err, cfg.tol, pairs),
    ]


def k_sensitivity(cfg: EvalConfig, s=(0.3, 0.6), ks=range(2, 7)) -> dict:
    """Induced values against the decomposition size bound (reported, not asserted)."""
    out = {}
    for base in ("S1", "S2", "S3"):
        out[base + "'"] = {
            str(k): induce_once(EntropyFunctional(base), SQ, s, replace(cfg, components_k=k)).value
            for k in ks
        }
    return {"state": list(s), "values": out}


# --------------------------------------------------------------------------
# registry


def _squared_chain(cfg):
    return chain_grid_checks(cfg) + chain_induction_checks(full_budget(cfg))


def _qubit_invariance(cfg):
    return qubit_invariance_checks(full_budget(cfg))


SUITES = {
    "squared-chain": _squared_chain,
    "squared-holevo": squared_holevo_checks,
    "classical-invariance": classical_invariance_checks,
    "qubit-invariance": _qubit_invariance,
    "qubit-holevo": qubit_holevo_checks,
    "footnote-pure": pure_restriction_checks,
    "mixedness": mixedness_checks,
    "concavity": concavity_checks,
}


def run_suite(name: str, cfg: EvalConfig = EvalConfig()) -> SuiteReport:
    """Run one suite (or ``all``) and time it."""
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise KeyError(name)
    start = time.perf_counter()
    checks = []
    for n in names:
        found = SUITES[n](cfg)
        if name == "all":
            for c in found:
                c.name = f"{n}: {c.name}"
        checks.extend(found)
    notes = {}
    if "squared-chain" in names:
        notes["k_sensitivity"] = k_sensitivity(cfg)
    config = {"seed": cfg.seed, "restarts": cfg.restarts, "iters": cfg.iters, "tol": cfg.tol}
    return SuiteReport(name, checks, config, time.perf_counter() - start, notes)
