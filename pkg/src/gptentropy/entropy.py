"""Entropy functionals of GPT models and their induction.

S1
    least outcome entropy over fine-grained measurements.
S2
    largest mutual information over pure decompositions and fine-grained
    measurements.
S3
    least mixing entropy over pure decompositions.

Inducing an entropy ``S`` gives

    S'(s) = sup over decompositions {p_x, s_x} of s of
            [ sup_M I(X:Y) + sum_x p_x S(s_x) ].

Suprema are computed by maximization and reported as lower bounds, infima as
upper bounds.  Registered closed forms are used for inner entropies.
"""
from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels, models
from .core import Ensemble, InputError, Model, as_state, mix, require_state, validate_ensemble
from .optimize import Box, local_search, optimize_decomposition

BASES = ("S1", "S2", "S3", "H", "Sq", "closed")
GAP_TOL = 1e-9


@dataclass(frozen=True)
class EntropyFunctional:
    base: str
    depth: int = 0
    name: str | None = None

    def __post_init__(self):
        if self.base not in BASES:
            raise InputError(f"unknown entropy base {self.base!r}")
        if int(self.depth) != self.depth or self.depth < 0:
            raise InputError("induction depth must be a non-negative integer")
        if self.base == "closed":
            models.closed_form(self.name or "")

    @classmethod
    def parse(cls, text: str) -> "EntropyFunctional":
        """Parse prime notation: ``S2''`` is S2 induced twice."""
        m = re.fullmatch(r"\s*(S1|S2|S3|H|Sq|closed:\w+)('*)\s*", text)
        if not m:
            raise InputError(f"cannot parse entropy {text!r}")
        base, primes = m.group(1), len(m.group(2))
        if base.startswith("closed:"):
            return cls("closed", primes, base.split(":", 1)[1])
        return cls(base, primes)

    @property
    def label(self) -> str:
        head = f"closed:{self.name}" if self.base == "closed" else self.base
        return head + "'" * self.depth

    def induced(self) -> "EntropyFunctional":
        return replace(self, depth=self.depth + 1)

    def inner(self) -> "EntropyFunctional":
        if self.depth == 0:
            raise InputError(f"{self.label} is not an induced entropy")
        return replace(self, depth=self.depth - 1)


@dataclass(frozen=True)
class EvalConfig:
    restarts: int = 16
    iters: int = 200
    seed: int = 0
    components_k: int | None = None
    pure_only: bool = False
    tol: float = 5e-3
    cache_quantum: float = 1e-6
    use_closed_forms: bool = True
    povm_outcomes: tuple = (2, 3, 4)
    workers: int | None = None

    def __post_init__(self):
        if self.restarts < 1 or self.iters < 1:
            raise InputError("restarts and iters must be >= 1")
        if self.components_k is not None and self.components_k < 1:
            raise InputError("components_k must be >= 1")
        if not self.tol > 0 or not self.cache_quantum > 0:
            raise InputError("tol and cache_quantum must be positive")

    @classmethod
    def quick(cls, **kw) -> "EvalConfig":
        return cls(restarts=16, iters=200, **kw)

    @classmethod
    def full(cls, **kw) -> "EvalConfig":
        return cls(restarts=64, iters=1000, **kw)

    def k_for(self, model: Model) -> int:
        """Decomposition size bound: ``dim + 2`` unless configured."""
        return self.components_k if self.components_k is not None else model.dim + 2

    def pure_k_for(self, model: Model) -> int:
        if self.components_k is not None:
            return self.components_k
        return 2 if model.kind == "qubit" else self.k_for(model)

    def for_inner(self) -> "EvalConfig":
        """Budget for nested numerical inner values: a quarter of the sweeps and restarts."""
        return replace(self, iters=max(1, self.iters // 4), restarts=max(1, self.restarts // 4),
                       pure_only=False)


@dataclass
class EvalResult:
    value: float
    bound_direction: str
    certificate: dict = field(default_factory=dict)
    budget_used: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# caches


class _Cache:
    """Thread-safe memo of inner values and best chart points."""

    def __init__(self):
        self._lock = threading.Lock()
        self.values = {}
        self.points = {}

    def get(self, table, key):
        with self._lock:
            return getattr(self, table).get(key)

    def put(self, table, key, value, better=None):
        with self._lock:
            store = getattr(self, table)
            old = store.get(key)
            if old is None or better is None or better(value, old):
                store[key] = value

    def clear(self):
        with self._lock:
            self.values.clear()
            self.points.clear()


CACHE = _Cache()


def clear_caches():
    CACHE.clear()


def _qkey(coords, quantum):
    return tuple(int(round(c / quantum)) for c in coords)


def _remember(key, point, value, maximize):
    def better(new, old):
        return new[1] > old[1] if maximize else new[1] < old[1]

    if not math.isnan(value):
        CACHE.put("points", key, (tuple(point), value), better)


def _recall(key):
    hit = CACHE.get("points", key)
    return [list(hit[0])] if hit else []


# --------------------------------------------------------------------------
# helpers


def _check_functional(f: EntropyFunctional, model: Model):
    if f.base == "H" and model.kind != "classical":
        raise InputError("Shannon entropy needs a classical model")
    if f.base == "Sq" and model.kind != "qubit":
        raise InputError("von Neumann entropy needs the qubit model")
    if f.base == "closed" and not f.name.startswith(
        {"classical": "shannon", "squared": "squared_", "qubit": "qubit_"}[model.kind]
    ):
        raise InputError(f"closed form {f.name!r} does not belong to the {model.key} model")


def _budget(evals, restarts, **extra):
    out = {"evals": int(evals), "restarts": int(restarts)}
    out.update(extra)
    return out


def _mi(W, P) -> float:
    v = kernels.mutual_information(np.asarray(W)[:, None] * P)
    return v if v > 0.0 else 0.0


def _fg_seeds(model, n, W, S):
    """Known candidates: both alpha endpoints (the objectives are concave or
    convex in alpha), and for qubits the projective measurement along the mix."""
    if model.kind == "squared":
        return [[1.0], [0.0]]
    if model.kind == "qubit" and n == 2:
        r = np.asarray(W) @ np.asarray(S)
        nr = float(np.linalg.norm(r))
        if nr > 1e-12:
            u = r / nr
            return [[float(u[2]), math.atan2(u[1], u[0]) % models.TWO_PI]]
    return []


def _search_fg(model, W, S, cfg, mode, maximize, tag, coords):
    """Optimize a fine-grained-family objective; returns (value, FgParam, evals, runs)."""
    best = None
    total_evals = runs = 0
    for n in models.fg_outcome_counts(model):
        if model.kind == "qubit" and n not in cfg.povm_outcomes:
            continue
        lo, hi = models.fg_box(model, n)
        if model.kind == "squared":
            obj = kernels.SquaredFgInfo(W, S, mode)
        else:
            obj = kernels.QubitPovmInfo(W, S, n, mode)
        key = (model.key, tag, n, _qkey(coords, cfg.cache_quantum))
        warm = _recall(key) + _fg_seeds(model, n, W, S)
        out = local_search(obj, Box(lo, hi), maximize, cfg.restarts, cfg.iters, cfg.seed,
                           starts=warm, workers=cfg.workers)
        _remember(key, out.best_point, out.best_value, maximize)
        total_evals += out.evals
        runs += max(cfg.restarts, len(warm))
        if best is None or (out.best_value > best[0] if maximize else out.best_value < best[0]):
            best = (out.best_value, models.fg_param(model, out.best_point, n))
    return best[0], best[1], total_evals, runs


# --------------------------------------------------------------------------
# S1, S2, S3


def eval_s1(model: Model, s, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Least outcome entropy over the fine-grained family (an upper bound)."""
    s = require_state(model, s)
    if model.kind == "classical":
        param = models.fg_param(model, ())
        value = kernels.shannon(np.clip(s.array, 0.0, None))
        return EvalResult(value, "upper", {"fg": param}, _budget(1, 0))
    value, param, evals, runs = _search_fg(
        model, [1.0], [list(s.coords)], cfg, kernels.MODE_HY, False, "S1", s.coords
    )
    return EvalResult(value, "upper", {"fg": param}, _budget(evals, runs))


def _pure_ensemble(W, S):
    return Ensemble(tuple(W), tuple(as_state(x) for x in S), pure_only=True)


def eval_s2(model: Model, s, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Largest mutual information over pure decompositions and fine-grained
    measurements (a lower bound)."""
    s = require_state(model, s)
    k = cfg.pure_k_for(model)
    if model.kind == "classical":
        W, S = models.pure_chart_decode(model, s, [], k)
        param = models.fg_param(model, ())
        value = _mi(W, models.fg_prob_matrix(model, param, S))
        return EvalResult(value, "lower", {"ensemble": _pure_ensemble(W, S), "fg": param},
                          _budget(1, 0))
    plo, phi = models.pure_chart_box(model, s, k)
    npure = len(plo)
    if model.kind == "squared":
        # affinity in alpha: the measurement optimum sits at alpha in {0, 1}
        def objective(x):
            dec = models.pure_chart_decode(model, s, x, k)
            return float("nan") if dec is None else inner_accinfo(model, *dec, s.coords)[0]

        key = (model.key, "S2", k, _qkey(s.coords, cfg.cache_quantum))
        warm = _recall(key) + models.pure_chart_seeds(model, s, k)
        out = local_search(objective, Box(plo, phi), True, cfg.restarts, cfg.iters, cfg.seed,
                           starts=warm, workers=cfg.workers)
        _remember(key, out.best_point, out.best_value, True)
        W, S = models.pure_chart_decode(model, s, out.best_point, k)
        cert = {"ensemble": _pure_ensemble(W, S), "fg": inner_accinfo(model, W, S, s.coords)[1]}
        runs = max(cfg.restarts, len(warm))
        return EvalResult(out.best_value, "lower", cert, _budget(out.evals, runs))
    best = None
    evals = runs = 0
    for n in (m for m in (2, 3, 4) if m in cfg.povm_outcomes):
        flo, fhi = models.fg_box(model, n)

        def objective(x, n=n):
            dec = models.pure_chart_decode(model, s, x[:npure], k)
            if dec is None:
                return float("nan")
            try:
                P = models.fg_prob_matrix(model, models.fg_param(model, x[npure:], n), dec[1])
            except models.InfeasibleParameter:
                return float("nan")
            return _mi(dec[0], P)

        key = (model.key, "S2", n, k, _qkey(s.coords, cfg.cache_quantum))
        warm = _recall(key)
        out = local_search(objective, Box(plo + flo, phi + fhi), True, cfg.restarts, cfg.iters,
                           cfg.seed, starts=warm, workers=cfg.workers)
        _remember(key, out.best_point, out.best_value, True)
        evals += out.evals
        runs += max(cfg.restarts, len(warm))
        if best is None or out.best_value > best[0]:
            best = (out.best_value, out.best_point, n)
    value, point, n = best
    W, S = models.pure_chart_decode(model, s, point[:npure], k)
    cert = {"ensemble": _pure_ensemble(W, S), "fg": models.fg_param(model, point[npure:], n)}
    return EvalResult(value, "lower", cert, _budget(evals, runs))


def eval_s3(model: Model, s, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Least mixing entropy over pure decompositions (an upper bound)."""
    s = require_state(model, s)
    k = cfg.pure_k_for(model)
    if model.kind == "classical":
        W, S = models.pure_chart_decode(model, s, [], k)
        return EvalResult(kernels.shannon(W), "upper", {"ensemble": _pure_ensemble(W, S)},
                          _budget(1, 0))
    lo, hi = models.pure_chart_box(model, s, k)

    def objective(x):
        dec = models.pure_chart_decode(model, s, x, k)
        return float("nan") if dec is None else kernels.shannon(dec[0])

    key = (model.key, "S3", k, _qkey(s.coords, cfg.cache_quantum))
    warm = _recall(key) + models.pure_chart_seeds(model, s, k)
    out = local_search(objective, Box(lo, hi), False, cfg.restarts, cfg.iters, cfg.seed,
                       starts=warm, workers=cfg.workers)
    _remember(key, out.best_point, out.best_value, False)
    W, S = models.pure_chart_decode(model, s, out.best_point, k)
    return EvalResult(out.best_value, "upper", {"ensemble": _pure_ensemble(W, S)},
                      _budget(out.evals, max(cfg.restarts, len(warm))))


# --------------------------------------------------------------------------
# induction


def _inner_name(inner: EntropyFunctional, model: Model, cfg: EvalConfig) -> str | None:
    if inner.depth == 0:
        if inner.base == "closed":
            return inner.name
        if inner.base == "H":
            return "shannon"
        if inner.base == "Sq":
            return "qubit_vn"
    if cfg.use_closed_forms and inner.base != "closed":
        return models.closed_form_name(model, inner.base, inner.depth)
    return None


def inner_value(inner: EntropyFunctional, model: Model, coords, cfg: EvalConfig) -> float:
    """Value of the inner entropy: closed form, else memoized numerical value."""
    name = _inner_name(inner, model, cfg)
    if name is not None:
        return models.closed_form(name)(coords)
    key = (model.key, inner.label, _qkey(coords, cfg.cache_quantum))
    hit = CACHE.get("values", key)
    if hit is not None:
        return hit
    value = evaluate(inner, model, coords, cfg.for_inner()).value
    CACHE.put("values", key, value)
    return value


def inner_accinfo(model: Model, W, S, target):
    """``sup_M I(X:Y)`` used inside the induction, with its maximizer.

    squared: affinity in alpha puts the optimum at alpha in {0, 1};
    classical: the canonical readout; qubit: two-outcome projective search.
    """
    if model.kind == "squared":
        i1, i2 = models.kernels_terms(W, S, target[0], target[1])
        value, alpha = (i1, 1.0) if i1 >= i2 else (i2, 0.0)
        return max(value, 0.0), models.fg_param(model, [alpha])
    if model.kind == "classical":
        param = models.fg_param(model, ())
        return _mi(W, models.fg_prob_matrix(model, param, S)), param
    value, u = kernels.projective_accinfo(list(W), [list(x) for x in S], list(target))
    z = min(max(u[2], -1.0), 1.0)
    return value, models.fg_param(model, [z, math.atan2(u[1], u[0]) % models.TWO_PI], 2)


def _kernel_objective(model: Model, name: str | None, coords, k: int):
    if name is None:
        return None
    if model.kind == "squared" and name in models.SQUARED_INNER_KIND:
        return kernels.SquaredInduction(coords[0], coords[1], k, models.SQUARED_INNER_KIND[name])
    if model.kind == "classical" and name == "shannon":
        return kernels.ClassicalInduction(list(coords), k)
    if model.kind == "qubit" and name == "qubit_vn":
        return kernels.QubitInduction(list(coords), k)
    return None


def induce_once(inner: EntropyFunctional, model: Model, s, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """One induction step on ``inner`` at ``s`` (a lower bound on the supremum)."""
    _check_functional(inner, model)
    s = require_state(model, s)
    coords = list(s.coords)
    name = _inner_name(inner, model, cfg)
    pure = cfg.pure_only
    k = cfg.pure_k_for(model) if pure else cfg.k_for(model)

    def objective(W, S):
        info, _ = inner_accinfo(model, W, S, coords)
        return info + math.fsum(p * inner_value(inner, model, x, cfg) for p, x in zip(W, S))

    code_objective = None if pure else _kernel_objective(model, name, coords, k)
    key = (model.key, "induce", inner.label, name, pure, k, _qkey(coords, cfg.cache_quantum))
    out = optimize_decomposition(
        model, s, objective, k, pure, cfg, maximize=True,
        seeds=() if pure else models.decomposition_seeds(model, s),
        code_objective=code_objective, warm=_recall(key),
    )
    _remember(key, out.point, out.value, True)
    W = list(out.ensemble.weights)
    S = [list(x.coords) for x in out.ensemble.states]
    info, param = inner_accinfo(model, W, S, coords)
    cert = {
        "ensemble": out.ensemble,
        "fg": param,
        "information": info,
        "inner": inner.label,
        "inner_source": "closed" if name is not None else "numerical",
        "inner_values": [inner_value(inner, model, x, cfg) for x in S],
        "chart": out.chart,
        "point": list(out.point),
    }
    budget = _budget(out.evals, out.restarts, k=k, best_restart=out.restart,
                     kernel=code_objective is not None)
    return EvalResult(out.value, "lower", cert, budget)


def evaluate(f: EntropyFunctional, model: Model, s, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Evaluate ``f`` at ``s``: depth 0 directly, depth ``n`` by induction of depth ``n - 1``."""
    _check_functional(f, model)
    s = require_state(model, s)
    if f.depth > 0:
        return induce_once(f.inner(), model, s, cfg)
    if f.base == "S1":
        return eval_s1(model, s, cfg)
    if f.base == "S2":
        return eval_s2(model, s, cfg)
    if f.base == "S3":
        return eval_s3(model, s, cfg)
    name = _inner_name(f, model, cfg)
    return EvalResult(models.closed_form(name)(s.coords), "exact", {"closed_form": name}, _budget(1, 0))


def certificate_value(result: EvalResult, model: Model, s, cfg: EvalConfig = EvalConfig()) -> float:
    """Recompute a result's objective from its certificate via the generic path.

    Uses :func:`~gptentropy.info.joint_distribution` with the certificate's
    measurement, so it is independent of the kernels that produced the value.
    """
    from .info import joint_distribution, mutual_information, shannon_entropy

    cert = result.certificate
    s = require_state(model, s)
    if "closed_form" in cert:
        return models.closed_form(cert["closed_form"])(s.coords)
    ens = cert.get("ensemble")
    M = models.fg_measurement(model, cert["fg"]) if cert.get("fg") is not None else None
    if "inner_values" in cert:
        info = mutual_information(joint_distribution(model, ens, M))
        return info + math.fsum(p * v for p, v in zip(ens.weights, cert["inner_values"]))
    if ens is not None and M is not None:
        return mutual_information(joint_distribution(model, ens, M))
    if ens is not None:
        return shannon_entropy(ens.weights)
    single = Ensemble((1.0,), (s,))
    return shannon_entropy(joint_distribution(model, single, M)[0])


# --------------------------------------------------------------------------
# accessible information and the Holevo bound


def accessible_information(model: Model, ens: Ensemble, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Largest mutual information between message and outcome (a lower bound)."""
    validate_ensemble(model, ens)
    W = list(ens.weights)
    S = [list(x.coords) for x in ens.states]
    if model.kind == "classical":
        param = models.fg_param(model, ())
        value = _mi(W, models.fg_prob_matrix(model, param, S))
        return EvalResult(value, "lower", {"ensemble": ens, "fg": param}, _budget(1, 0))
    coords = [c for x in S for c in x] + W
    value, param, evals, runs = _search_fg(model, W, S, cfg, kernels.MODE_MI, True, "acc", coords)
    return EvalResult(value, "lower", {"ensemble": ens, "fg": param}, _budget(evals, runs))


def holevo_report(model: Model, ens: Ensemble, base: EntropyFunctional,
                  cfg: EvalConfig = EvalConfig()) -> dict:
    """Accessible information against the bound ``S'(mix) - sum_x p_x S(s_x)``.

    With a closed-form ``S'`` the gap is non-negative up to rounding and
    ``gap_ok`` checks it at 1e-9; with a numerical ``S'`` (a lower bound) a
    negative gap means the optimizer fell short, not that the bound failed.
    """
    _check_functional(base, model)
    validate_ensemble(model, ens)
    s = mix(model, ens)
    acc = accessible_information(model, ens, cfg)
    induced = base.induced()
    name = _inner_name(induced, model, cfg)
    if name is not None:
        s_prime, source = models.closed_form(name)(s.coords), "closed"
    else:
        s_prime, source = induce_once(base, model, s, cfg).value, "numerical"
    average = math.fsum(p * inner_value(base, model, x.coords, cfg) for p, x in zip(ens.weights, ens.states))
    bound = s_prime - average
    gap = bound - acc.value
    report = {
        "I_acc": acc.value,
        "S_prime_mix": s_prime,
        "avg_S": average,
        "bound": bound,
        "gap": gap,
        "entropy": base.label,
        "S_prime_source": source,
        "gap_ok": gap >= -GAP_TOL,
        "certificate": acc.certificate,
    }
    if source == "numerical":
        report["note"] = "S' is a numerical lower bound; a negative gap indicates optimizer shortfall"
    return report
