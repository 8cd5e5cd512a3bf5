"""Entropies of general probabilistic theories and their induced entropies."""
from .core import (
    ContractError,
    Effect,
    Ensemble,
    GPTError,
    InputError,
    Measurement,
    Model,
    State,
    effect_value,
    ensemble,
    measurement_probs,
    mix,
    validate_state,
)
from .entropy import (
    EntropyFunctional,
    EvalConfig,
    EvalResult,
    accessible_information,
    clear_caches,
    eval_s1,
    eval_s2,
    eval_s3,
    evaluate,
    holevo_report,
    induce_once,
)
from .info import binary_entropy, joint_distribution, mutual_information, shannon_entropy
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ContractError",
    "Effect",
    "Ensemble",
    "EntropyFunctional",
    "EvalConfig",
    "EvalResult",
    "GPTError",
    "InputError",
    "Measurement",
    "Model",
    "State",
    "accessible_information",
    "binary_entropy",
    "clear_caches",
    "effect_value",
    "ensemble",
    "eval_s1",
    "eval_s2",
    "eval_s3",
    "evaluate",
    "holevo_report",
    "induce_once",
    "joint_distribution",
    "measurement_probs",
    "mix",
    "mutual_information",
    "shannon_entropy",
    "validate_state",
]
