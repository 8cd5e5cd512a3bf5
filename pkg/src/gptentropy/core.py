"""States, effects and measurements of finite-dimensional GPT models, with ensembles.

Every model is described by a coordinate chart of its state space:

==========  ====  ==============================================
kind        dim   coordinates
==========  ====  ==============================================
classical   d     probability vector (simplex vertices are pure)
squared     2     ``(c1, c2)`` in the unit square (corners pure)
qubit       3     Bloch vector ``r`` with ``|r| <= 1``
==========  ====  ==============================================

Effects are affine functionals stored as ``(offset, gradient)`` and evaluated
as ``offset + gradient . coords``.  For the qubit this is the Bloch form of the
operator ``offset * I + gradient . sigma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MEMBERSHIP_TOL = 1e-12
PURITY_TOL = 1e-9
SUM_TOL = 1e-9
PROB_SLACK = 1e-9
WEIGHT_SUM_TOL = 1e-12

KINDS = ("classical", "squared", "qubit")


class GPTError(Exception):
    """Base class for errors raised by this package."""


class InputError(GPTError, ValueError):
    """Malformed input: wrong dimension, out-of-range parameter, bad name."""


class ContractError(GPTError):
    """An object violates a model contract (invalid effect or measurement)."""


@dataclass(frozen=True)
class Model:
    kind: str
    d: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown model kind {self.kind!r}")
        if self.kind == "classical":
            if int(self.d) != self.d or self.d < 2:
                raise InputError("classical model needs d >= 2")
            object.__setattr__(self, "d", int(self.d))
        elif self.d:
            raise InputError(f"{self.kind} model takes no d")

    @classmethod
    def classical(cls, d: int) -> "Model":
        return cls("classical", d)

    @classmethod
    def squared(cls) -> "Model":
        return cls("squared")

    @classmethod
    def qubit(cls) -> "Model":
        return cls("qubit")

    @property
    def dim(self) -> int:
        if self.kind == "classical":
            return self.d
        return 2 if self.kind == "squared" else 3

    @property
    def key(self) -> str:
        return f"classical{self.d}" if self.kind == "classical" else self.kind

    def vertices(self) -> np.ndarray | None:
        """Pure states of a polytope model as rows; ``None`` for the qubit."""
        if self.kind == "classical":
            return np.eye(self.d)
        if self.kind == "squared":
            return np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        return None


@dataclass(frozen=True)
class State:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    def __len__(self):
        return len(self.coords)


def as_state(s) -> State:
    return s if isinstance(s, State) else State(tuple(s))


@dataclass(frozen=True)
class Effect:
    offset: float
    gradient: tuple

    def __post_init__(self):
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "gradient", tuple(float(g) for g in self.gradient))

    def raw(self, coords: Sequence[float]) -> float:
        return self.offset + math.fsum(g * c for g, c in zip(self.gradient, coords))


@dataclass(frozen=True)
class Measurement:
    effects: tuple
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(self.effects))
        if not self.effects:
            raise InputError("a measurement needs at least one effect")

    def __len__(self):
        return len(self.effects)


@dataclass(frozen=True)
class Ensemble:
    """Weighted list ``{p_x, s_x}``; ``pure_only`` marks a pure decomposition."""

    weights: tuple
    states: tuple
    pure_only: bool = False

    def __post_init__(self):
        weights = tuple(float(p) for p in self.weights)
        states = tuple(as_state(s) for s in self.states)
        if not weights or len(weights) != len(states):
            raise InputError("ensemble needs matching, non-empty weights and states")
        if min(weights) < 0.0:
            raise InputError("ensemble weights must be non-negative")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_SUM_TOL:
            raise InputError("ensemble weights must sum to 1")
        if len({len(s) for s in states}) != 1:
            raise InputError("ensemble states have mixed dimensions")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return len(self.weights)

    @property
    def weight_array(self) -> np.ndarray:
        return np.array(self.weights)

    @property
    def state_array(self) -> np.ndarray:
        return np.array([s.coords for s in self.states])


def _check_dim(model: Model, coords: Sequence[float]):
    if len(coords) != model.dim:
        raise InputError(
            f"{model.key} states have {model.dim} coordinates, got {len(coords)}"
        )


def in_state_space(model: Model, coords: Sequence[float], tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership test on raw coordinates (no dimension check)."""
    if model.kind == "classical":
        return min(coords) >= -tol and abs(math.fsum(coords) - 1.0) <= tol
    if model.kind == "squared":
        return all(-tol <= c <= 1.0 + tol for c in coords)
    return math.sqrt(math.fsum(c * c for c in coords)) <= 1.0 + tol


def validate_state(model: Model, s) -> bool:
    s = as_state(s)
    _check_dim(model, s.coords)
    if not all(math.isfinite(c) for c in s.coords):
        return False
    return in_state_space(model, s.coords)


def is_pure(model: Model, s, tol: float = PURITY_TOL) -> bool:
    coords = as_state(s).coords
    _check_dim(model, coords)
    if not in_state_space(model, coords):
        return False
    if model.kind == "classical":
        return max(coords) >= 1.0 - tol
    if model.kind == "squared":
        return all(min(c, abs(1.0 - c)) <= tol for c in coords)
    return abs(math.sqrt(math.fsum(c * c for c in coords)) - 1.0) <= tol


def require_state(model: Model, s) -> State:
    s = as_state(s)
    if not validate_state(model, s):
        raise InputError(f"{s.coords} is not a state of the {model.key} model")
    return s


def effect_range(model: Model, e: Effect) -> tuple[float, float]:
    """Minimum and maximum of ``e`` over the whole state space."""
    if len(e.gradient) != model.dim:
        raise ContractError("effect gradient does not match the model dimension")
    verts = model.vertices()
    if verts is None:
        norm = math.sqrt(math.fsum(g * g for g in e.gradient))
        return e.offset - norm, e.offset + norm
    values = [e.raw(v) for v in verts]
    return min(values), max(values)


def check_effect(model: Model, e: Effect) -> Effect:
    lo, hi = effect_range(model, e)
    if lo < -PROB_SLACK or hi > 1.0 + PROB_SLACK:
        raise ContractError(f"effect takes values in [{lo}, {hi}] outside [0, 1]")
    return e


def check_measurement(model: Model, M: Measurement) -> Measurement:
    """Raise :class:`ContractError` unless every effect is valid and they sum to one."""
    for e in M.effects:
        check_effect(model, e)
    verts = model.vertices()
    if verts is None:
        offset = math.fsum(e.offset for e in M.effects)
        grad = [math.fsum(e.gradient[i] for e in M.effects) for i in range(model.dim)]
        ok = abs(offset - 1.0) <= SUM_TOL and max(abs(g) for g in grad) <= SUM_TOL
    else:
        ok = all(abs(math.fsum(e.raw(v) for e in M.effects) - 1.0) <= SUM_TOL for v in verts)
    if not ok:
        raise ContractError("measurement effects do not sum to the unit effect")
    return M


def effect_value(model: Model, e: Effect, s) -> float:
    s = require_state(model, s)
    check_effect(model, e)
    value = e.raw(s.coords)
    if value < -PROB_SLACK or value > 1.0 + PROB_SLACK:
        raise ContractError(f"effect value {value} is not a probability")
    return min(max(value, 0.0), 1.0)


def measurement_probs(model: Model, M: Measurement, s) -> np.ndarray:
    check_measurement(model, M)
    return np.array([effect_value(model, e, s) for e in M.effects])


def validate_ensemble(model: Model, ens: Ensemble) -> Ensemble:
    for s in ens.states:
        require_state(model, s)
        if ens.pure_only and not is_pure(model, s):
            raise InputError(f"{s.coords} is not pure but the ensemble is pure_only")
    return ens


def mix(model: Model, ens: Ensemble) -> State:
    validate_ensemble(model, ens)
    coords = [
        math.fsum(p * s.coords[i] for p, s in zip(ens.weights, ens.states))
        for i in range(model.dim)
    ]
    return require_state(model, coords)


def ensemble(weights: Iterable[float], states: Iterable, pure_only: bool = False) -> Ensemble:
    return Ensemble(tuple(weights), tuple(as_state(s) for s in states), pure_only)
