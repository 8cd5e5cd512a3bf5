"""Concrete models, from the classical simplex to the squared model and the qubit.

Each model supplies

* its fine-grained measurement family as a box chart (``fg_box`` / ``fg_measurement``),
* a chart for free decomposition components (``state_chart_*``),
* a chart of its pure decompositions (``pure_chart_*``),
* the canonical decompositions used as warm starts, and
* the closed forms registered for it (``closed_form_name``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    ContractError,
    Effect,
    Ensemble,
    GPTError,
    InputError,
    Measurement,
    Model,
    as_state,
    check_measurement,
    mix,
    require_state,
    validate_ensemble,
)
from .info import binary_entropy

SQUARED = Model.squared()
QUBIT = Model.qubit()

TWO_PI = 2.0 * math.pi
CLOSURE_TOL = 1e-9
PURE_EDGE = 1e-9


class InfeasibleParameter(GPTError):
    """Measurement parameters that violate the POVM closure condition."""


# --------------------------------------------------------------------------
# squared model


def squared_fg_measurement(alpha: float) -> Measurement:
    """Fine-grained measurement ``(a c1, a (1-c1), (1-a) c2, (1-a)(1-c2))``."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise InputError(f"alpha must lie in [0, 1], got {alpha}")
    ab = 1.0 - alpha
    effects = (
        Effect(0.0, (alpha, 0.0)),
        Effect(alpha, (-alpha, 0.0)),
        Effect(0.0, (0.0, ab)),
        Effect(ab, (0.0, -ab)),
    )
    return Measurement(effects, label=f"squared-fg(alpha={alpha:g})")


def _sq(s) -> tuple[float, float]:
    c1, c2 = require_state(SQUARED, s).coords
    return min(max(c1, 0.0), 1.0), min(max(c2, 0.0), 1.0)


def squared_s1_closed(s) -> float:
    c1, c2 = _sq(s)
    return min(binary_entropy(c1), binary_entropy(c2))


def squared_s2_closed(s) -> float:
    c1, c2 = _sq(s)
    return max(binary_entropy(c1), binary_entropy(c2))


def squared_s2prime_closed(s) -> float:
    """``h(c1) + h(c2)``: the induced S2 (and S3), invariant under induction."""
    c1, c2 = _sq(s)
    return binary_entropy(c1) + binary_entropy(c2)


def squared_s3_exact(s) -> float:
    """Infimum of the mixing entropy over pure corner decompositions.

    The corner weights form the family ``p11 = t, p10 = c1 - t, p01 = c2 - t,
    p00 = 1 - c1 - c2 + t``; the minimum over ``t`` is located on a 1024-point
    grid (endpoints included) and refined by golden-section search to 1e-9.
    """
    c1, c2 = _sq(s)
    return kernels.squared_s3_exact(c1, c2)


def squared_accinfo_terms(ens: Ensemble) -> tuple[float, float]:
    """``h(c_i) - sum_x p_x h(c_ix)`` for ``i = 1, 2``."""
    validate_ensemble(SQUARED, ens)
    c1, c2 = mix(SQUARED, ens).coords
    return kernels_terms(ens.weights, [s.coords for s in ens.states], c1, c2)


def kernels_terms(W, S, c1, c2) -> tuple[float, float]:
    i1 = binary_entropy(min(max(c1, 0.0), 1.0))
    i2 = binary_entropy(min(max(c2, 0.0), 1.0))
    for p, (a, b) in zip(W, S):
        i1 -= p * kernels.binary_entropy(a)
        i2 -= p * kernels.binary_entropy(b)
    return i1, i2


def squared_accinfo_closed(ens: Ensemble) -> float:
    i1, i2 = squared_accinfo_terms(ens)
    value = i1 if i1 >= i2 else i2
    return value if value > 0.0 else 0.0


def squared_accinfo_argmax(ens: Ensemble) -> tuple[float, int]:
    """Closed accessible information and the optimal ``i`` (0 means alpha = 1)."""
    i1, i2 = squared_accinfo_terms(ens)
    value, index = (i1, 0) if i1 >= i2 else (i2, 1)
    return max(value, 0.0), index


# --------------------------------------------------------------------------
# classical simplex


def classical_canonical_measurement(d: int) -> Measurement:
    if int(d) != d or d < 2:
        raise InputError("classical readout needs d >= 2")
    d = int(d)
    effects = tuple(Effect(0.0, tuple(1.0 if j == i else 0.0 for j in range(d))) for i in range(d))
    return Measurement(effects, label=f"canonical-{d}")


# --------------------------------------------------------------------------
# qubit


@dataclass(frozen=True)
class BlochSpectrum:
    lambda_plus: float
    lambda_minus: float


def _bloch_norm(r) -> float:
    coords = as_state(r).coords
    if len(coords) != 3:
        raise InputError("Bloch vectors have three components")
    n = math.sqrt(math.fsum(c * c for c in coords))
    if n > 1.0 + 1e-12:
        raise InputError(f"|r| = {n} exceeds 1")
    return min(n, 1.0)


def bloch_spectrum(r) -> BlochSpectrum:
    n = _bloch_norm(r)
    return BlochSpectrum(0.5 * (1.0 + n), 0.5 * (1.0 - n))


def qubit_vn_entropy(r) -> float:
    return kernels.binary_entropy(bloch_spectrum(r).lambda_plus)


def qubit_rank1_povm(weights, directions, tol: float = CLOSURE_TOL) -> Measurement:
    """Rank-one POVM with effects ``(w_y / 2)(I + u_y . sigma)``.

    Needs 2 to 4 outcomes, ``w_y >= 0``, ``sum w_y = 2``, unit ``u_y`` and
    ``sum w_y u_y = 0``; closure violations raise :class:`InfeasibleParameter`.
    """
    w = np.asarray(weights, dtype=float)
    U = np.asarray(directions, dtype=float).reshape(-1, 3)
    n = len(w)
    if n not in (2, 3, 4) or len(U) != n:
        raise InputError("qubit POVMs here have 2, 3 or 4 outcomes")
    if w.min() < -tol or abs(w.sum() - 2.0) > tol:
        raise InfeasibleParameter("POVM weights must be >= 0 and sum to 2")
    if np.max(np.abs(np.linalg.norm(U, axis=1) - 1.0)) > tol:
        raise InfeasibleParameter("POVM directions must be unit vectors")
    if np.max(np.abs(w @ U)) > tol:
        raise InfeasibleParameter("POVM violates sum_y w_y u_y = 0")
    effects = tuple(Effect(0.5 * wy, tuple(0.5 * wy * u)) for wy, u in zip(w, U))
    return Measurement(effects, label=f"qubit-rank1-{n}")


def qubit_chi(ens: Ensemble) -> float:
    """Holevo quantity ``S(mix) - sum_x p_x S(rho_x)``."""
    validate_ensemble(QUBIT, ens)
    total = qubit_vn_entropy(mix(QUBIT, ens))
    return total - math.fsum(p * qubit_vn_entropy(s) for p, s in zip(ens.weights, ens.states))


# --------------------------------------------------------------------------
# fine-grained measurement charts


@dataclass(frozen=True)
class FgParam:
    """Point of a model's fine-grained chart; ``n`` is the outcome count."""

    model: str
    n: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def describe(self) -> dict:
        if self.model == "squared":
            return {"alpha": self.values[0]}
        if self.model == "qubit":
            w, U = kernels.decode_povm(list(self.values), self.n)
            return {"outcomes": self.n, "weights": list(w), "directions": [list(u) for u in U]}
        return {"readout": "canonical"}


def fg_outcome_counts(model: Model) -> tuple:
    if model.kind == "qubit":
        return (2, 3, 4)
    return (4,) if model.kind == "squared" else (model.d,)


def fg_box(model: Model, n: int | None = None) -> tuple[list, list]:
    if model.kind == "squared":
        return [0.0], [1.0]
    if model.kind == "classical":
        return [], []
    n = 2 if n is None else n
    if n not in (2, 3, 4):
        raise InputError("qubit POVM charts support 2 to 4 outcomes")
    if n == 2:
        return [-1.0, 0.0], [1.0, TWO_PI]
    return [0.0] * (n - 1) + [-1.0, 0.0] * (n - 1), [1.0] * (n - 1) + [1.0, TWO_PI] * (n - 1)


def fg_param(model: Model, x, n: int | None = None) -> FgParam:
    if model.kind == "classical":
        return FgParam(model.key, model.d, ())
    if model.kind == "squared":
        return FgParam("squared", 4, tuple(x))
    return FgParam("qubit", 2 if n is None else n, tuple(x))


def fg_measurement(model: Model, param: FgParam) -> Measurement:
    if model.kind == "squared":
        return squared_fg_measurement(param.values[0])
    if model.kind == "classical":
        return classical_canonical_measurement(model.d)
    dec = kernels.decode_povm(list(param.values), param.n)
    if dec is None:
        raise InfeasibleParameter("POVM chart point has zero total weight")
    return qubit_rank1_povm(*dec)


def fg_prob_matrix(model: Model, param: FgParam, states) -> np.ndarray:
    """Outcome probabilities ``P[x, y] = m_y(s_x)`` for rows of ``states``."""
    S = np.asarray(states, dtype=float).reshape(-1, model.dim)
    if model.kind == "classical":
        return np.clip(S, 0.0, 1.0)
    if model.kind == "squared":
        a = param.values[0]
        c1, c2 = S[:, 0], S[:, 1]
        return np.column_stack([a * c1, a * (1 - c1), (1 - a) * c2, (1 - a) * (1 - c2)])
    dec = kernels.decode_povm(list(param.values), param.n)
    if dec is None:
        raise InfeasibleParameter("POVM chart point has zero total weight")
    w, U = dec
    return np.clip(0.5 * np.asarray(w) * (1.0 + S @ np.asarray(U).T), 0.0, 1.0)


# --------------------------------------------------------------------------
# decomposition charts


def chart_kind(model: Model) -> int:
    return {
        "squared": kernels.CHART_BOX,
        "classical": kernels.CHART_SIMPLEX,
        "qubit": kernels.CHART_BALL,
    }[model.kind]


def state_chart_box(model: Model) -> tuple[list, list]:
    if model.kind == "squared":
        return [0.0, 0.0], [1.0, 1.0]
    if model.kind == "classical":
        return [0.0] * (model.d - 1), [1.0] * (model.d - 1)
    return [-1.0] * 3, [1.0] * 3


def state_chart_encode(model: Model, coords) -> list:
    coords = [float(c) for c in coords]
    return coords[:-1] if model.kind == "classical" else coords


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    return v / n if n > 1e-12 else np.array([0.0, 0.0, 1.0])


def _angles(u) -> list:
    z = float(min(max(u[2], -1.0), 1.0))
    phi = math.atan2(u[1], u[0]) % TWO_PI
    return [z, phi]


def decomposition_seeds(model: Model, s) -> list:
    """Canonical decompositions ``(weights, states)`` used as warm starts.

    squared: the two edge decompositions ``s = c1 (1, c2) + (1 - c1)(0, c2)``
    and ``s = c2 (c1, 1) + (1 - c2)(c1, 0)``; classical: the vertex
    decomposition; qubit: the eigen-decomposition.
    """
    coords = require_state(model, s).coords
    seeds = []
    if model.kind == "squared":
        c1, c2 = coords
        seeds.append(([c1, 1.0 - c1], [[1.0, c2], [0.0, c2]]))
        seeds.append(([c2, 1.0 - c2], [[c1, 1.0], [c1, 0.0]]))
    elif model.kind == "classical":
        verts = np.eye(model.d)
        seeds.append((list(coords), [list(v) for v in verts]))
    else:
        n = math.sqrt(math.fsum(c * c for c in coords))
        u = _unit(coords) if n > 1e-12 else np.array([0.0, 0.0, 1.0])
        seeds.append(([0.5 * (1 + n), 0.5 * (1 - n)], [list(u), list(-u)]))
    out = []
    for W, S in seeds:
        kept = [(p, st) for p, st in zip(W, S) if p > 0.0]
        out.append(([p for p, _ in kept], [st for _, st in kept]))
    return out


def pure_chart_box(model: Model, s, k: int) -> tuple[list, list]:
    if model.kind == "classical":
        return [], []
    if model.kind == "squared":
        return [0.0], [1.0]
    k = max(int(k), 1)
    if k == 1:
        return [], []
    lo = [-1.0, 0.0, 0.0] * (k - 2) + [-1.0, 0.0]
    hi = [1.0, TWO_PI, 1.0] * (k - 2) + [1.0, TWO_PI]
    return lo, hi


def squared_corner_weights(c1: float, c2: float, t: float) -> list:
    """Corner weights ``(p00, p01, p10, p11)`` of the pure decomposition at ``t``."""
    return [1.0 - c1 - c2 + t, c2 - t, c1 - t, t]


_CORNERS = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]


def _chords(r, u, k):
    q = np.array(r, dtype=float)
    if 1.0 - np.linalg.norm(q) <= PURE_EDGE:
        return [1.0], [list(_unit(q))]
    if k < 2:
        return None
    W, S = [], []
    rem = 1.0
    pos = 0
    for _ in range(k - 2):
        d = np.array(kernels.decode_povm([u[pos], u[pos + 1]], 2)[1][0])
        f = u[pos + 2]
        pos += 3
        b = float(q @ d)
        disc = math.sqrt(max(b * b + 1.0 - float(q @ q), 0.0))
        lp, lm = -b + disc, -b - disc
        if lp - f * lm <= 0.0:
            continue
        wa = -f * lm / (lp - f * lm)
        if wa > 0.0:
            W.append(rem * wa)
            S.append(list(_unit(q + lp * d)))
        rem *= 1.0 - wa
        q = q + f * lm * d
        if 1.0 - np.linalg.norm(q) <= PURE_EDGE:
            W.append(rem)
            S.append(list(_unit(q)))
            return W, S
    d = np.array(kernels.decode_povm([u[pos], u[pos + 1]], 2)[1][0])
    b = float(q @ d)
    disc = math.sqrt(max(b * b + 1.0 - float(q @ q), 0.0))
    lp, lm = -b + disc, -b - disc
    wa = -lm / (lp - lm)
    for w, lam in ((rem * wa, lp), (rem * (1.0 - wa), lm)):
        if w > 0.0:
            W.append(w)
            S.append(list(_unit(q + lam * d)))
    return W, S


def pure_chart_decode(model: Model, s, u, k: int):
    """Decode a pure-decomposition chart point into ``(weights, states)``.

    classical: the unique vertex decomposition (empty chart).
    squared: one parameter ``t`` along the corner family.
    qubit: successive chords; each of the first ``k - 2`` steps splits off a
    pure point along a direction and moves the remainder a fraction of the
    way to the opposite sphere point, the last step is a full chord.
    """
    coords = list(as_state(s).coords)
    if model.kind == "classical":
        W = [p for p in coords if p > 0.0]
        S = [list(v) for p, v in zip(coords, np.eye(model.d)) if p > 0.0]
        total = math.fsum(W)
        return [p / total for p in W], S
    if model.kind == "squared":
        c1, c2 = (min(max(c, 0.0), 1.0) for c in coords)
        tmin, tmax = max(0.0, c1 + c2 - 1.0), min(c1, c2)
        t = tmin + float(u[0]) * (tmax - tmin)
        raw = [max(w, 0.0) for w in squared_corner_weights(c1, c2, t)]
        total = math.fsum(raw)
        kept = [(w / total, c) for w, c in zip(raw, _CORNERS) if w > 0.0]
        return [w for w, _ in kept], [c for _, c in kept]
    return _chords(coords, list(u), int(k))


def pure_chart_seeds(model: Model, s, k: int) -> list:
    if model.kind == "classical":
        return [[]]
    if model.kind == "squared":
        return [[0.0], [1.0]]
    k = max(int(k), 1)
    if k == 1:
        return [[]]
    coords = as_state(s).coords
    return [[1.0, 0.0, 0.0] * (k - 2) + _angles(_unit(coords))]


# --------------------------------------------------------------------------
# closed-form registry

CLOSED_FORMS = {
    "squared_s1": squared_s1_closed,
    "squared_s2": squared_s2_closed,
    "squared_s3": squared_s3_exact,
    "squared_s2prime": squared_s2prime_closed,
    "qubit_vn": qubit_vn_entropy,
}

SQUARED_INNER_KIND = {
    "squared_s1": kernels.INNER_MIN,
    "squared_s2": kernels.INNER_MAX,
    "squared_s3": kernels.INNER_S3,
    "squared_s2prime": kernels.INNER_SUM,
}


def shannon_closed(s) -> float:
    return kernels.shannon(np.clip(np.asarray(as_state(s).coords), 0.0, None))


def closed_form(name: str):
    if name == "shannon":
        return shannon_closed
    try:
        return CLOSED_FORMS[name]
    except KeyError:
        raise InputError(f"no closed form named {name!r}") from None


def closed_form_name(model: Model, base: str, depth: int) -> str | None:
    """Registered closed form for ``base`` induced ``depth`` times, if any.

    squared: S1 = min h, S1' = S2 = max h, S3 exact, and every further
    induction of S1, S2, S3 equals ``h(c1) + h(c2)``.  Classical and qubit: all
    bases coincide with Shannon / von Neumann entropy at every depth.
    """
    if model.kind == "squared":
        if base == "S1":
            return ("squared_s1", "squared_s2")[depth] if depth < 2 else "squared_s2prime"
        if base == "S2":
            return "squared_s2" if depth == 0 else "squared_s2prime"
        if base == "S3":
            return "squared_s3" if depth == 0 else "squared_s2prime"
        return None
    if model.kind == "classical" and base in ("S1", "S2", "S3", "H"):
        return "shannon"
    if model.kind == "qubit" and base in ("S1", "S2", "S3", "Sq"):
        return "qubit_vn"
    return None


# --------------------------------------------------------------------------
# sampling


def random_state(model: Model, rng: np.random.Generator) -> list:
    if model.kind == "classical":
        return list(rng.dirichlet(np.ones(model.d)))
    if model.kind == "squared":
        return list(rng.uniform(0.0, 1.0, 2))
    v = rng.normal(size=3)
    return list(v / np.linalg.norm(v) * rng.uniform() ** (1.0 / 3.0))


def random_pure_state(model: Model, rng: np.random.Generator) -> list:
    if model.kind == "qubit":
        v = rng.normal(size=3)
        return list(v / np.linalg.norm(v))
    verts = model.vertices()
    return list(verts[rng.integers(len(verts))])


def check_fg_family(model: Model, param: FgParam) -> Measurement:
    M = fg_measurement(model, param)
    try:
        return check_measurement(model, M)
    except ContractError as exc:  # pragma: no cover - indicates a chart bug
        raise InfeasibleParameter(str(exc)) from exc
