"""Entropy and mutual information of classical distributions, in bits."""
from __future__ import annotations

import numpy as np

from . import kernels
from .core import Ensemble, InputError, Measurement, Model, measurement_probs, validate_ensemble

NEG_TOL = 1e-12
SUM_TOL = 1e-9


def binary_entropy(x: float) -> float:
    """``h(x) = -x log2 x - (1-x) log2 (1-x)`` with ``0 log 0 = 0``."""
    x = float(x)
    if not -NEG_TOL <= x <= 1.0 + NEG_TOL:
        raise InputError(f"binary entropy needs 0 <= x <= 1, got {x}")
    return kernels.binary_entropy(min(max(x, 0.0), 1.0))


def as_prob_vector(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float).ravel()
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise InputError("probability vector must be finite and non-empty")
    if arr.min() < -NEG_TOL or abs(arr.sum() - 1.0) > SUM_TOL:
        raise InputError("not a probability vector")
    return np.clip(arr, 0.0, None)


def shannon_entropy(p) -> float:
    return kernels.shannon(as_prob_vector(p))


def as_joint(j) -> np.ndarray:
    arr = np.asarray(j, dtype=float)
    if arr.ndim != 2 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise InputError("joint distribution must be a finite, non-empty matrix")
    if arr.min() < -NEG_TOL or abs(arr.sum() - 1.0) > SUM_TOL:
        raise InputError("joint distribution entries must be >= 0 and sum to 1")
    return np.clip(arr, 0.0, None)


def joint_distribution(model: Model, ens: Ensemble, M: Measurement) -> np.ndarray:
    """Table ``p(x, y) = p_x m_y(s_x)``; rows are messages, columns outcomes."""
    validate_ensemble(model, ens)
    return np.array([p * measurement_probs(model, M, s) for p, s in zip(ens.weights, ens.states)])


def mutual_information(j) -> float:
    """``I(X:Y) = H(X) + H(Y) - H(X,Y)``, clamped at zero."""
    value = kernels.mutual_information(as_joint(j))
    return value if value > 0.0 else 0.0
