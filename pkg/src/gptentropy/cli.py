"""Command-line driver: compute, sweep, accinfo, holevo and verify.

Exit codes: 0 success, 1 suite failure, 2 usage or input error, 3 I/O error.
Floats in JSON and CSV output carry 12 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import models
from .core import Ensemble, GPTError, Model, State, ensemble
from .entropy import (
    EntropyFunctional,
    EvalConfig,
    accessible_information,
    evaluate,
    holevo_report,
)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
MODELS = ("classical", "squared", "qubit")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def to_jsonable(obj):
    """Convert results to JSON-ready data with floats rounded to 12 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(fmt(x)) if math.isfinite(x) else str(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, Ensemble):
        return {"weights": to_jsonable(obj.weights), "states": [to_jsonable(s) for s in obj.states]}
    if isinstance(obj, State):
        return to_jsonable(obj.coords)
    if isinstance(obj, models.FgParam):
        return to_jsonable({"n": obj.n, "values": obj.values, **obj.describe()})
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(data) -> None:
    sys.stdout.write(json.dumps(to_jsonable(data), indent=2) + "\n")


# --------------------------------------------------------------------------
# argument helpers


def parse_vector(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse vector {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise UsageError("vector entries must be finite")
    return values


def make_model(kind: str, dim: int) -> Model:
    if kind == "classical":
        return Model.classical(dim)
    return Model.squared() if kind == "squared" else Model.qubit()


def config_from(args) -> EvalConfig:
    cfg = EvalConfig.full() if args.budget == "full" else EvalConfig.quick()
    changes = {"seed": args.seed}
    for name in ("restarts", "iters", "tol"):
        if getattr(args, name, None) is not None:
            changes[name] = getattr(args, name)
    if getattr(args, "k", None) is not None:
        changes["components_k"] = args.k
    if getattr(args, "pure_only", False):
        changes["pure_only"] = True
    if getattr(args, "force_numerical", False):
        changes["use_closed_forms"] = False
    return replace(cfg, **changes)


def load_ensemble(path: str):
    """Read an ensemble file ``{"model": ..., "ensemble": [{"p": ..., "state": [...]}]}``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
        kind = data["model"]
        members = data["ensemble"]
        weights = [float(m["p"]) for m in members]
        states = [tuple(float(c) for c in m["state"]) for m in members]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed ensemble file: {exc}") from None
    if kind not in MODELS or not states:
        raise UsageError("ensemble file needs a known model and at least one member")
    model = make_model(kind, len(states[0]))
    return model, ensemble(weights, states)


# --------------------------------------------------------------------------
# commands


def cmd_compute(args) -> int:
    state = parse_vector(args.state)
    model = make_model(args.model, len(state))
    f = EntropyFunctional.parse(args.entropy)
    result = evaluate(f, model, state, config_from(args))
    emit({
        "entropy": f.label,
        "model": model.key,
        "state": state,
        "value": result.value,
        "bound_direction": result.bound_direction,
        "certificate": result.certificate,
        "budget": result.budget_used,
    })
    return EXIT_OK


def sweep_rows(step: float, names, cfg: EvalConfig):
    if not 0.0 < step <= 1.0:
        raise UsageError("grid step must lie in (0, 1]")
    n = int(round(1.0 / step))
    if abs(n * step - 1.0) > 1e-9:
        raise UsageError("grid step must divide 1")
    funcs = [EntropyFunctional.parse(name) for name in names]
    model = Model.squared()
    grid = [round(i * step, 12) for i in range(n + 1)]
    for c1 in grid:
        for c2 in grid:
            row = [c1, c2]
            for f in funcs:
                name = models.closed_form_name(model, f.base, f.depth) if cfg.use_closed_forms else None
                if name is not None:
                    row.append(models.closed_form(name)((c1, c2)))
                else:
                    row.append(evaluate(f, model, (c1, c2), cfg).value)
            yield row


def cmd_sweep(args) -> int:
    if args.model != "squared":
        raise UsageError("sweep supports the squared model only")
    names = [n.strip() for n in args.entropies.split(",") if n.strip()]
    rows = list(sweep_rows(args.grid_step, names, config_from(args)))
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["c1", "c2", *names])
            for row in rows:
                writer.writerow([fmt(v) for v in row])
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_accinfo(args) -> int:
    model, ens = load_ensemble(args.ensemble)
    result = accessible_information(model, ens, config_from(args))
    cert = {k: v for k, v in result.certificate.items() if k != "ensemble"}
    emit({"I_acc": result.value, "bound_direction": result.bound_direction, "certificate": cert,
          "budget": result.budget_used})
    return EXIT_OK


def cmd_holevo(args) -> int:
    model, ens = load_ensemble(args.ensemble)
    report = holevo_report(model, ens, EntropyFunctional.parse(args.entropy), config_from(args))
    report["certificate"] = {k: v for k, v in report["certificate"].items() if k != "ensemble"}
    emit(report)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, config_from(args))
    data = report.to_dict()
    if not args.timing:
        data.pop("wall_time")
    emit(data)
    print(f"{args.suite}: {'pass' if report.passed else 'FAIL'} in {report.wall_time:.1f}s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# parser


def _budget_flags(p, extra=True):
    p.add_argument("--budget", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    if extra:
        p.add_argument("--restarts", type=int)
        p.add_argument("--iters", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpt-entropy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one entropy at one state")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--state", required=True, help="comma-separated coordinates")
    p.add_argument("--entropy", required=True, help="S1, S2, S3, H, Sq with optional primes")
    p.add_argument("--k", type=int, help="decomposition size bound")
    p.add_argument("--pure-only", action="store_true", help="restrict induction to pure decompositions")
    p.add_argument("--force-numerical", action="store_true", help="ignore registered closed forms")
    _budget_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="tabulate entropies on a squared-model grid")
    p.add_argument("--model", choices=MODELS, default="squared")
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--entropies", default="S1,S2,S3,S2'")
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--force-numerical", action="store_true")
    _budget_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("accinfo", help="accessible information of an ensemble file")
    p.add_argument("--ensemble", required=True)
    _budget_flags(p)
    p.set_defaults(func=cmd_accinfo)

    p = sub.add_parser("holevo", help="accessible information against the generalized Holevo bound")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--entropy", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--force-numerical", action="store_true")
    _budget_flags(p)
    p.set_defaults(func=cmd_holevo)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=(*SUITES, "all"), required=True)
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    _budget_flags(p, extra=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GPTError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
