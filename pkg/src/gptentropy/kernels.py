"""Backend selection for the hot kernels.

The compiled extension ``_kernels`` is used when it imports; otherwise the
pure-Python ``_fallback`` module provides the same API.  Setting
``GPT_ENTROPY_PURE_PYTHON=1`` forces the fallback.
"""
import os

if os.environ.get("GPT_ENTROPY_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as _backend

    BACKEND = "python"
else:
    try:
        from . import _kernels as _backend

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _fallback as _backend

        BACKEND = "python"

CHART_BOX = _backend.CHART_BOX
CHART_SIMPLEX = _backend.CHART_SIMPLEX
CHART_BALL = _backend.CHART_BALL
INNER_ZERO = _backend.INNER_ZERO
INNER_MIN = _backend.INNER_MIN
INNER_MAX = _backend.INNER_MAX
INNER_S3 = _backend.INNER_S3
INNER_SUM = _backend.INNER_SUM
MODE_MI = _backend.MODE_MI
MODE_HY = _backend.MODE_HY

binary_entropy = _backend.binary_entropy
shannon = _backend.shannon
mutual_information = _backend.mutual_information
pattern_search = _backend.pattern_search
decode_stick = _backend.decode_stick
decode_povm = _backend.decode_povm
projective_accinfo = _backend.projective_accinfo
squared_s3_exact = _backend.squared_s3_exact
squared_s3_endpoints = _backend.squared_s3_endpoints

SquaredInduction = _backend.SquaredInduction
ClassicalInduction = _backend.ClassicalInduction
QubitInduction = _backend.QubitInduction
SquaredFgInfo = _backend.SquaredFgInfo
QubitPovmInfo = _backend.QubitPovmInfo

# Native objectives release the GIL inside pattern_search.
NATIVE_OBJECTIVES = (
    (SquaredInduction, ClassicalInduction, QubitInduction, SquaredFgInfo, QubitPovmInfo)
    if BACKEND == "cython"
    else ()
)
