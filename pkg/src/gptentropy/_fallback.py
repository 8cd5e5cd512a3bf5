"""Pure-Python implementation of the hot kernels.

Mirrors ``_kernels.pyx`` operation for operation (same summation order, same
candidate sets, same tie rules) so that both backends agree to rounding.
Objectives return ``nan`` for infeasible points.
"""
import math

NAN = float("nan")
DROP = 1e-9
MEMBER_TOL = 1e-12

CHART_BOX = 0
CHART_SIMPLEX = 1
CHART_BALL = 2

INNER_ZERO = 0
INNER_MIN = 1
INNER_MAX = 2
INNER_S3 = 3
INNER_SUM = 4

MODE_MI = 0
MODE_HY = 1

S3_GRID = 1024
S3_TOL = 1e-9
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DIR_GRID = 24
DIR_STEP = 0.5
DIR_MIN_STEP = 1e-8
DIR_SWEEPS = 200


def xlx(p):
    if p <= 0.0:
        return 0.0
    return -p * math.log2(p)


def binary_entropy(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return xlx(x) + xlx(1.0 - x)


def shannon(p):
    total = 0.0
    for v in p:
        total += xlx(v)
    return total


def _mi_rows(joint, nrow, ncol):
    if nrow <= 1 or ncol <= 1:
        return 0.0  # one message or one outcome carries no information
    hx = 0.0
    hxy = 0.0
    col = [0.0] * ncol
    for i in range(nrow):
        row = joint[i]
        rs = 0.0
        for j in range(ncol):
            v = row[j]
            rs += v
            col[j] += v
            hxy += xlx(v)
        hx += xlx(rs)
    hy = 0.0
    for j in range(ncol):
        hy += xlx(col[j])
    return hx + hy - hxy


def mutual_information(joint):
    rows = [list(map(float, r)) for r in joint]
    return _mi_rows(rows, len(rows), len(rows[0]) if rows else 0)


def _better(fc, f, maximize):
    if fc != fc:
        return False
    if f != f:
        return True
    return fc > f if maximize else fc < f


def pattern_search(objective, x0, lower, upper, iters, maximize, min_step=1e-9):
    """Coordinate pattern search with step halving.

    Returns ``(x, f, evals)``; ``f`` is ``nan`` when no feasible point was seen.
    """
    n = len(x0)
    lo = [float(v) for v in lower]
    hi = [float(v) for v in upper]
    x = [min(max(float(v), lo[i]), hi[i]) for i, v in enumerate(x0)]
    f = float(objective(list(x)))
    evals = 1
    step = [0.25 * (hi[i] - lo[i]) for i in range(n)]
    sweeps = 0
    while sweeps < iters:
        if n == 0 or max(step) < min_step:
            break
        sweeps += 1
        improved = False
        for i in range(n):
            if step[i] <= 0.0:
                continue
            old = x[i]
            for sign in (1.0, -1.0):
                cand = min(max(old + sign * step[i], lo[i]), hi[i])
                if cand == old:
                    continue
                x[i] = cand
                fc = float(objective(list(x)))
                evals += 1
                if _better(fc, f, maximize):
                    f = fc
                    improved = True
                    break
                x[i] = old
        if not improved:
            for i in range(n):
                step[i] *= 0.5
    return x, f, evals


def _chart_width(m, chart):
    return m - 1 if chart == CHART_SIMPLEX else m


def _chart_state(comp, chart):
    if chart == CHART_SIMPLEX:
        coords = list(comp)
        rest = 1.0
        for c in comp:
            rest -= c
        coords.append(rest)
        return coords
    return list(comp)


def _member(coords, chart):
    if chart == CHART_BALL:
        sq = 0.0
        for c in coords:
            sq += c * c
        return math.sqrt(sq) <= 1.0 + MEMBER_TOL
    for c in coords:
        if c < -MEMBER_TOL:
            return False
        if chart == CHART_BOX and c > 1.0 + MEMBER_TOL:
            return False
    return True


def decode_stick(x, target, k, chart):
    """Decode a stick-breaking decomposition code.

    ``x`` holds ``k - 1`` stick fractions followed by ``k - 1`` free component
    charts; the last component is solved from the barycenter constraint.
    Returns ``(weights, states)`` or ``None`` when infeasible.
    """
    m = len(target)
    cw = _chart_width(m, chart)
    rem = 1.0
    W = []
    S = []
    for i in range(k - 1):
        p = rem * x[i]
        rem -= p
        if p < DROP:
            continue
        base = k - 1 + i * cw
        coords = _chart_state(x[base:base + cw], chart)
        if not _member(coords, chart):
            return None
        W.append(p)
        S.append(coords)
    kept = 0.0
    for p in W:
        kept += p
    pk = 1.0 - kept
    if pk < DROP:
        return None
    last = []
    for j in range(m):
        acc = target[j]
        for i in range(len(W)):
            acc -= W[i] * S[i][j]
        last.append(acc / pk)
    if not _member(last, chart):
        return None
    W.append(pk)
    S.append(last)
    return W, S


def squared_s3_exact(c1, c2):
    """Minimum of H over pure corner decompositions of ``(c1, c2)``."""
    tmin = max(0.0, c1 + c2 - 1.0)
    tmax = min(c1, c2)

    def H(t):
        return xlx(t) + xlx(c1 - t) + xlx(c2 - t) + xlx(1.0 - c1 - c2 + t)

    span = tmax - tmin
    if span <= 0.0:
        return H(tmin)
    best_j = 0
    best = H(tmin)
    for j in range(1, S3_GRID):
        t = tmax if j == S3_GRID - 1 else tmin + span * j / (S3_GRID - 1)
        v = H(t)
        if v < best:
            best = v
            best_j = j
    a = tmin + span * max(best_j - 1, 0) / (S3_GRID - 1)
    b = tmin + span * min(best_j + 1, S3_GRID - 1) / (S3_GRID - 1)
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1 = H(x1)
    f2 = H(x2)
    while b - a > S3_TOL:
        if f1 <= f2:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - GOLDEN * (b - a)
            f1 = H(x1)
        else:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + GOLDEN * (b - a)
            f2 = H(x2)
    return min(best, f1, f2)


def _direction(z, phi):
    s = math.sqrt(max(0.0, 1.0 - z * z))
    return [s * math.cos(phi), s * math.sin(phi), z]


def _angles_direction(theta, phi):
    st = math.sin(theta)
    return [st * math.cos(phi), st * math.sin(phi), math.cos(theta)]


def _dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _norm3(a):
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def _direction_grid():
    golden_angle = math.pi * (3.0 - math.sqrt(5.0))
    grid = []
    for j in range(DIR_GRID):
        z = 1.0 - (j + 0.5) / DIR_GRID
        grid.append(_direction(z, j * golden_angle))
    return grid


_GRID = _direction_grid()


def _proj_value(u, W, S, r):
    v = binary_entropy(0.5 * (1.0 + _dot3(u, r)))
    for i in range(len(W)):
        v -= W[i] * binary_entropy(0.5 * (1.0 + _dot3(u, S[i])))
    return v


def projective_accinfo(W, S, r):
    """Best two-outcome projective mutual information for a qubit ensemble.

    Returns ``(value, direction)``.
    """
    cands = []
    nr = _norm3(r)
    if nr > 1e-12:
        cands.append([r[0] / nr, r[1] / nr, r[2] / nr])
    for q in S:
        nq = _norm3(q)
        if nq > 1e-12:
            cands.append([q[0] / nq, q[1] / nq, q[2] / nq])
    cands.extend(_GRID)
    best_u = cands[0]
    best = _proj_value(best_u, W, S, r)
    for u in cands[1:]:
        v = _proj_value(u, W, S, r)
        if v > best:
            best = v
            best_u = u
    ang = [math.acos(min(max(best_u[2], -1.0), 1.0)), math.atan2(best_u[1], best_u[0])]
    f = _proj_value(_angles_direction(ang[0], ang[1]), W, S, r)
    step = DIR_STEP
    sweeps = 0
    while sweeps < DIR_SWEEPS and step >= DIR_MIN_STEP:
        sweeps += 1
        improved = False
        for i in range(2):
            old = ang[i]
            for sign in (1.0, -1.0):
                ang[i] = old + sign * step
                fc = _proj_value(_angles_direction(ang[0], ang[1]), W, S, r)
                if fc > f:
                    f = fc
                    improved = True
                    break
                ang[i] = old
        if not improved:
            step *= 0.5
    if f < 0.0:
        f = 0.0
    return f, _angles_direction(ang[0], ang[1])


def decode_povm(x, n):
    """Decode a rank-one qubit POVM chart into ``(weights, directions)``."""
    if n == 2:
        u = _direction(x[0], x[1])
        return [1.0, 1.0], [u, [-u[0], -u[1], -u[2]]]
    a = [float(v) for v in x[:n - 1]]
    U = []
    v = [0.0, 0.0, 0.0]
    for i in range(n - 1):
        u = _direction(x[n - 1 + 2 * i], x[n + 2 * i])
        U.append(u)
        for j in range(3):
            v[j] -= a[i] * u[j]
    an = _norm3(v)
    if an > 1e-12:
        U.append([v[0] / an, v[1] / an, v[2] / an])
    else:
        an = 0.0
        U.append([0.0, 0.0, 1.0])
    a.append(an)
    total = 0.0
    for w in a:
        total += w
    if total < 1e-12:
        return None
    return [2.0 * w / total for w in a], U


def _povm_info(w, U, W, S, mode):
    nrow = len(W)
    n = len(w)
    joint = []
    for i in range(nrow):
        row = []
        for y in range(n):
            e = 0.5 * w[y] * (1.0 + _dot3(U[y], S[i]))
            row.append(W[i] * min(max(e, 0.0), 1.0))
        joint.append(row)
    if mode == MODE_HY:
        col = [0.0] * n
        for i in range(nrow):
            for y in range(n):
                col[y] += joint[i][y]
        return shannon(col)
    v = _mi_rows(joint, nrow, n)
    return v if v > 0.0 else 0.0


def _squared_rows(alpha, W, S):
    joint = []
    ab = 1.0 - alpha
    for i in range(len(W)):
        a = S[i][0]
        b = S[i][1]
        p = W[i]
        joint.append([p * alpha * a, p * alpha * (1.0 - a), p * ab * b, p * ab * (1.0 - b)])
    return joint


def squared_s3_endpoints(c1, c2):
    """The same minimum from the two endpoints only: H is concave along the family."""
    lo, hi = max(0.0, c1 + c2 - 1.0), min(c1, c2)
    return min(_corner_H(c1, c2, lo), _corner_H(c1, c2, hi))


def _corner_H(c1, c2, t):
    return xlx(t) + xlx(c1 - t) + xlx(c2 - t) + xlx(1.0 - c1 - c2 + t)


def _squared_inner(kind, a, b):
    if kind == INNER_MIN:
        return min(binary_entropy(a), binary_entropy(b))
    if kind == INNER_MAX:
        return max(binary_entropy(a), binary_entropy(b))
    if kind == INNER_S3:
        return squared_s3_endpoints(min(max(a, 0.0), 1.0), min(max(b, 0.0), 1.0))
    if kind == INNER_SUM:
        return binary_entropy(a) + binary_entropy(b)
    return 0.0


def squared_accinfo_terms(W, S, c1, c2):
    i1 = binary_entropy(c1)
    i2 = binary_entropy(c2)
    for i in range(len(W)):
        i1 -= W[i] * binary_entropy(S[i][0])
        i2 -= W[i] * binary_entropy(S[i][1])
    return i1, i2


class SquaredInduction:
    """Induction body in the squared model with a closed-form inner entropy."""

    def __init__(self, c1, c2, k, inner):
        self.target = [float(c1), float(c2)]
        self.k = int(k)
        self.inner = int(inner)

    def decode(self, x):
        return decode_stick(x, self.target, self.k, CHART_BOX)

    def best_index(self, x):
        dec = self.decode(x)
        if dec is None:
            return -1
        i1, i2 = squared_accinfo_terms(dec[0], dec[1], self.target[0], self.target[1])
        return 0 if i1 >= i2 else 1

    def __call__(self, x):
        dec = self.decode(x)
        if dec is None:
            return NAN
        W, S = dec
        i1, i2 = squared_accinfo_terms(W, S, self.target[0], self.target[1])
        info = i1 if i1 >= i2 else i2
        if info < 0.0:
            info = 0.0
        inner = 0.0
        for i in range(len(W)):
            inner += W[i] * _squared_inner(self.inner, S[i][0], S[i][1])
        return info + inner


class ClassicalInduction:
    """Induction body in a classical model: canonical readout, Shannon inner."""

    def __init__(self, p, k):
        self.target = [float(v) for v in p]
        self.k = int(k)

    def decode(self, x):
        return decode_stick(x, self.target, self.k, CHART_SIMPLEX)

    def __call__(self, x):
        dec = self.decode(x)
        if dec is None:
            return NAN
        W, S = dec
        d = len(self.target)
        joint = [[W[i] * max(S[i][j], 0.0) for j in range(d)] for i in range(len(W))]
        info = _mi_rows(joint, len(W), d)
        if info < 0.0:
            info = 0.0
        inner = 0.0
        for i in range(len(W)):
            h = 0.0
            for j in range(d):
                h += xlx(S[i][j])
            inner += W[i] * h
        return info + inner


class QubitInduction:
    """Induction body for the qubit: projective inner search, von Neumann inner."""

    def __init__(self, r, k):
        self.target = [float(v) for v in r]
        self.k = int(k)

    def decode(self, x):
        return decode_stick(x, self.target, self.k, CHART_BALL)

    def best_direction(self, x):
        dec = self.decode(x)
        if dec is None:
            return None
        return projective_accinfo(dec[0], dec[1], self.target)[1]

    def __call__(self, x):
        dec = self.decode(x)
        if dec is None:
            return NAN
        W, S = dec
        info = projective_accinfo(W, S, self.target)[0]
        inner = 0.0
        for i in range(len(W)):
            inner += W[i] * binary_entropy(0.5 * (1.0 + _norm3(S[i])))
        return info + inner


class SquaredFgInfo:
    """Mutual information (or outcome entropy) of the squared family at ``x = [alpha]``."""

    def __init__(self, weights, states, mode=MODE_MI):
        self.W = [float(v) for v in weights]
        self.S = [[float(c) for c in s] for s in states]
        self.mode = int(mode)

    def __call__(self, x):
        joint = _squared_rows(x[0], self.W, self.S)
        if self.mode == MODE_HY:
            col = [0.0] * 4
            for row in joint:
                for y in range(4):
                    col[y] += row[y]
            return shannon(col)
        v = _mi_rows(joint, len(self.W), 4)
        return v if v > 0.0 else 0.0


class QubitPovmInfo:
    """Mutual information (or outcome entropy) of a rank-one qubit POVM chart."""

    def __init__(self, weights, states, n, mode=MODE_MI):
        self.W = [float(v) for v in weights]
        self.S = [[float(c) for c in s] for s in states]
        self.n = int(n)
        self.mode = int(mode)

    def __call__(self, x):
        dec = decode_povm(x, self.n)
        if dec is None:
            return NAN
        return _povm_info(dec[0], dec[1], self.W, self.S, self.mode)
