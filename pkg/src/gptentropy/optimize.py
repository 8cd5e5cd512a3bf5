"""Multi-start pattern search over boxes, and the decomposition search charts.

A decomposition of ``s`` into at most ``k`` states is encoded as ``k - 1``
stick-breaking fractions followed by ``k - 1`` free component charts; the last
component is solved from the barycenter constraint so that every feasible
code mixes exactly to ``s``.  Infeasible points evaluate to ``nan`` and are
never accepted by the search.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels, models
from .core import Ensemble, InputError, Model, as_state, is_pure, require_state

DROP = 1e-9
MIN_STEP = 1e-9
SHRINK_STEPS = 30


@dataclass(frozen=True)
class Box:
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        if len(lo) != len(hi):
            raise InputError("box bounds differ in length")
        if any(a > b for a, b in zip(lo, hi)):
            raise InputError("empty box: lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, x) -> bool:
        return all(a <= v <= b for a, v, b in zip(self.lower, x, self.upper))


@dataclass(frozen=True)
class OptimOutcome:
    best_point: tuple
    best_value: float
    evals: int
    feasible: bool
    restart: int = -1


def thread_count(workers: int | None = None) -> int:
    if workers:
        return max(1, int(workers))
    try:
        return max(1, int(os.environ.get("GPT_ENTROPY_THREADS", "1")))
    except ValueError:
        return 1


def _is_better(a: float, b: float, maximize: bool) -> bool:
    if math.isnan(a):
        return False
    if math.isnan(b):
        return True
    return a > b if maximize else a < b


def local_search(
    objective,
    box: Box,
    maximize: bool,
    restarts: int,
    iters: int,
    seed: int,
    starts=(),
    prepare=None,
    workers: int | None = None,
) -> OptimOutcome:
    """Multi-start coordinate pattern search.

    Restart ``r`` starts from ``starts[r]`` when supplied, otherwise from a
    uniform draw seeded with ``seed + r``; ``prepare`` may move a start point
    before the search (used to reach feasibility).  Each run halves its
    steps from ``0.25 * (upper - lower)`` down to 1e-9 or stops after ``iters``
    polling sweeps.  The best value wins, lowest restart index on ties, so the
    result does not depend on the number of threads.
    """
    if restarts < 1 or iters < 1:
        raise InputError("restarts and iters must be >= 1")
    lo, hi = np.array(box.lower), np.array(box.upper)
    starts = [list(map(float, s)) for s in starts]
    runs = max(restarts, len(starts))

    def run(r):
        if r < len(starts):
            x0 = starts[r]
        else:
            x0 = list(np.random.default_rng(seed + r).uniform(lo, hi))
        if prepare is not None:
            x0 = prepare(x0)
        x, f, evals = kernels.pattern_search(objective, x0, lo, hi, iters, maximize, MIN_STEP)
        return tuple(x), float(f), int(evals)

    if box.dim == 0:
        f = float(objective([]))
        return OptimOutcome((), f, 1, not math.isnan(f), 0)
    nthreads = thread_count(workers)
    if nthreads > 1 and runs > 1:
        with ThreadPoolExecutor(nthreads) as pool:
            results = list(pool.map(run, range(runs)))
    else:
        results = [run(r) for r in range(runs)]
    best = 0
    for r in range(1, runs):
        if _is_better(results[r][1], results[best][1], maximize):
            best = r
    x, f, _ = results[best]
    return OptimOutcome(x, f, sum(res[2] for res in results), not math.isnan(f), best)


# --------------------------------------------------------------------------
# decomposition code


@dataclass(frozen=True)
class DecompositionCode:
    values: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.k < 1:
            raise InputError("decompositions need k >= 1")


def decomposition_box(model: Model, k: int) -> Box:
    clo, chi = models.state_chart_box(model)
    return Box([0.0] * (k - 1) + clo * (k - 1), [1.0] * (k - 1) + chi * (k - 1))


def _chart_width(model: Model) -> int:
    return model.dim - 1 if model.kind == "classical" else model.dim


def encode_decomposition(model: Model, s, weights, states, k: int) -> list:
    """Code whose decode reproduces ``(weights, states)`` (last member solved).

    Members beyond the first ``len - 1`` slots are padded with zero weight.
    """
    weights = [float(p) for p in weights]
    if not 1 <= len(weights) <= k:
        raise InputError(f"cannot encode {len(weights)} members with k = {k}")
    filler = models.state_chart_encode(model, as_state(s).coords)
    fracs, comps = [], []
    rem = 1.0
    for i in range(k - 1):
        if i < len(weights) - 1:
            p = weights[i]
            fracs.append(min(max(p / rem, 0.0), 1.0) if rem > 0.0 else 0.0)
            rem -= p
            comps.extend(models.state_chart_encode(model, states[i]))
        else:
            fracs.append(0.0)
            comps.extend(filler)
    return fracs + comps


def _decode_arrays(model: Model, target, x, k: int):
    return kernels.decode_stick(list(x), list(target), k, models.chart_kind(model))


def decode_decomposition(model: Model, s, code: DecompositionCode, pure_only: bool = False):
    """Decode ``code`` into an :class:`Ensemble` mixing to ``s``, or ``None``.

    Infeasible when the solved component leaves the state space, or when
    ``pure_only`` and some member is not pure.  Members whose weight falls
    below 1e-9 are dropped.
    """
    s = require_state(model, s)
    k = code.k
    if len(code.values) != (k - 1) * (1 + _chart_width(model)):
        raise InputError("decomposition code length does not match k and the model")
    dec = _decode_arrays(model, s.coords, code.values, k)
    if dec is None:
        return None
    W, S = dec
    if pure_only and not all(is_pure(model, st) for st in S):
        return None
    return Ensemble(tuple(W), tuple(as_state(st) for st in S), pure_only)


@dataclass
class DecompositionOutcome:
    value: float
    ensemble: Ensemble | None
    point: tuple
    evals: int
    restarts: int
    chart: str
    restart: int = -1
    extras: dict = field(default_factory=dict)


def _shrinker(model: Model, s, k: int, objective):
    """Pull free components of an infeasible start toward ``s`` until feasible."""
    centre = models.state_chart_encode(model, as_state(s).coords)
    cw = len(centre)

    def prepare(x0):
        if not math.isnan(float(objective(list(x0)))):
            return x0
        fracs = list(x0[: k - 1])
        comps = np.array(x0[k - 1:]).reshape(k - 1, cw) if k > 1 else np.zeros((0, cw))
        lam = 1.0
        for _ in range(SHRINK_STEPS):
            lam *= 0.5
            moved = centre + lam * (comps - centre)
            x = fracs + list(moved.ravel())
            if not math.isnan(float(objective(x))):
                return x
        return x0

    return prepare


def optimize_decomposition(
    model: Model,
    s,
    objective,
    k: int,
    pure_only: bool,
    cfg,
    maximize: bool = True,
    seeds=(),
    code_objective=None,
    warm=(),
) -> DecompositionOutcome:
    """Optimize ``objective(weights, states)`` over decompositions of ``s``.

    Mixed decompositions use the stick-breaking code with at most ``k``
    members; ``pure_only`` switches to the model's pure-decomposition chart.
    ``code_objective`` (a compiled kernel over codes) replaces the decode +
    ``objective`` composition in the search when given.  ``seeds`` are
    ``(weights, states)`` pairs tried as warm starts ahead of the random
    restarts, after any ``warm`` chart points.  Over mixed decompositions the
    trivial ensemble ``{(1, s)}`` is always evaluated and wins ties, so the
    result is never worse than it.
    """
    if k < 1:
        raise InputError("decompositions need k >= 1")
    s = require_state(model, s)
    target = list(s.coords)
    if pure_only:
        lo, hi = models.pure_chart_box(model, s, k)
        box = Box(lo, hi)

        def decode(x):
            return models.pure_chart_decode(model, s, x, k)

        def search_objective(x):
            dec = decode(x)
            return float("nan") if dec is None else float(objective(*dec))

        starts = list(warm) + models.pure_chart_seeds(model, s, k)
        prepare = None
    else:
        box = decomposition_box(model, k)

        def decode(x):
            return _decode_arrays(model, target, x, k)

        if code_objective is not None:
            search_objective = code_objective
        else:
            def search_objective(x):
                dec = decode(x)
                return float("nan") if dec is None else float(objective(*dec))

        starts = list(warm) + [encode_decomposition(model, s, W, S, k) for W, S in seeds if len(W) <= k]
        prepare = _shrinker(model, s, k, search_objective)

    out = local_search(
        search_objective, box, maximize, cfg.restarts, cfg.iters, cfg.seed,
        starts=starts, prepare=prepare, workers=cfg.workers,
    )
    runs = max(cfg.restarts, len(starts))
    value, point, evals = out.best_value, out.best_point, out.evals
    baseline = None
    if not pure_only:
        baseline = encode_decomposition(model, s, [1.0], [target], k)
        fb = float(search_objective(baseline))
        evals += 1
        # the trivial ensemble wins ties: no decomposition unless it pays
        if not math.isnan(fb) and not _is_better(value, fb, maximize):
            value, point = fb, tuple(baseline)
    if math.isnan(value):
        return DecompositionOutcome(value, None, point, evals, runs, "pure" if pure_only else "mixed")
    dec = decode(point)
    ens = Ensemble(tuple(dec[0]), tuple(as_state(st) for st in dec[1]), pure_only)
    return DecompositionOutcome(
        value, ens, tuple(point), evals, runs, "pure" if pure_only else "mixed",
        restart=-1 if baseline is not None and tuple(point) == tuple(baseline) else out.restart,
    )
