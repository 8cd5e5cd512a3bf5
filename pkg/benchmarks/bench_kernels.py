"""Compare the compiled kernels with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Each case is timed on both backends (best of N runs); results must agree.
The end-to-end case runs one induction in a subprocess per backend, since
the backend is chosen at import.
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

from gptentropy import _fallback as py

try:
    from gptentropy import _kernels as cy
except ImportError:  # pragma: no cover
    cy = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - start)
    return min(times), value


def search(mod, obj, x0, iters=200):
    n = len(x0)
    return mod.pattern_search(obj, x0, [0.0] * n, [1.0] * n, iters, True)[1]


def cases(mod):
    sq_x0 = [0.5, 0.5, 0.5, 0.3, 0.6, 0.2, 0.7, 0.4, 0.5]
    cl_x0 = [0.5, 0.5, 0.5, 0.2, 0.3, 0.1, 0.4, 0.3, 0.3]
    qb_box = ([0.0] * 3 + [-1.0] * 9, [1.0] * 12)
    qb_x0 = [0.5, 0.5, 0.5, 0.2, 0.1, 0.3, -0.2, 0.2, 0.3, 0.1, -0.1, 0.3]
    W, S = [0.3, 0.3, 0.4], [[0, 0, 1], [1, 0, 0], [0, 0.6, 0.8]]
    return {
        "squared_s3_exact x200": lambda: sum(mod.squared_s3_exact(0.01 * i % 1, 0.37) for i in range(200)),
        "squared S2' search": lambda: search(mod, mod.SquaredInduction(0.3, 0.6, 4, mod.INNER_MAX), sq_x0),
        "squared S3' search": lambda: search(mod, mod.SquaredInduction(0.3, 0.6, 4, mod.INNER_S3), sq_x0, 20),
        "classical H' search": lambda: search(mod, mod.ClassicalInduction([0.2, 0.3, 0.5], 4), cl_x0),
        "qubit Sq' search": lambda: mod.pattern_search(
            mod.QubitInduction([0.1, 0.2, 0.3], 4), qb_x0, *qb_box, 30, True)[1],
        "qubit projective I_acc": lambda: mod.projective_accinfo(W, S, [0.3, 0.24, 0.62])[0],
    }


def end_to_end(pure: bool) -> float:
    code = (
        "import time; from gptentropy import *; t = time.perf_counter();"
        "[induce_once(EntropyFunctional('S2'), Model.squared(), (0.1 * i, 0.3), EvalConfig()) for i in range(1, 10)];"
        "print(time.perf_counter() - t)"
    )
    env = dict(os.environ)
    env.pop("GPT_ENTROPY_PURE_PYTHON", None)
    if pure:
        env["GPT_ENTROPY_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    return float(out.stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true", help="print results as JSON")
    args = parser.parse_args(argv)
    if cy is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    py_cases, cy_cases = cases(py), cases(cy)
    for name in py_cases:
        t_py, v_py = best_of(py_cases[name], args.repeat)
        t_cy, v_cy = best_of(cy_cases[name], args.repeat)
        rows.append({"case": name, "python_s": t_py, "cython_s": t_cy,
                     "speedup": t_py / t_cy, "agree": abs(v_py - v_cy) <= 1e-9})
    t_py, t_cy = end_to_end(True), end_to_end(False)
    rows.append({"case": "induce_once S2' x9 (end to end)", "python_s": t_py, "cython_s": t_cy,
                 "speedup": t_py / t_cy, "agree": True})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'case':36s} {'python':>10s} {'cython':>10s} {'speedup':>9s}  agree")
        for r in rows:
            print(f"{r['case']:36s} {r['python_s']:10.4f} {r['cython_s']:10.4f} {r['speedup']:8.1f}x  {r['agree']}")
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
