# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.

Same algorithms, summation order and tie rules as ``_fallback.py``.  Native
objectives (subclasses of :class:`Objective`) run inside :func:`pattern_search`
without the GIL, so restarts can be spread over threads.
"""
from libc.math cimport log2, sqrt, cos, sin, acos, atan2, NAN, M_PI
from libc.stdlib cimport malloc, free

import numpy as np

cdef double DROP = 1e-9
cdef double MEMBER_TOL = 1e-12

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

DEF S3_GRID = 1024
cdef double S3_TOL = 1e-9
cdef double GOLDEN = (sqrt(5.0) - 1.0) / 2.0

DEF DIR_GRID = 24
cdef double DIR_STEP = 0.5
cdef double DIR_MIN_STEP = 1e-8
DEF DIR_SWEEPS = 200

cdef double _GRID[DIR_GRID][3]


cdef inline double xlx(double p) noexcept nogil:
    if p <= 0.0:
        return 0.0
    return -p * log2(p)


cdef inline double c_h(double x) noexcept nogil:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return xlx(x) + xlx(1.0 - x)


cdef inline double c_min(double a, double b) noexcept nogil:
    return a if a < b else b


cdef inline double c_max(double a, double b) noexcept nogil:
    return a if a > b else b


cdef inline double clip(double v, double lo, double hi) noexcept nogil:
    return c_min(c_max(v, lo), hi)


cdef inline void c_direction(double z, double phi, double* out) noexcept nogil:
    cdef double s = sqrt(c_max(0.0, 1.0 - z * z))
    out[0] = s * cos(phi)
    out[1] = s * sin(phi)
    out[2] = z


cdef inline void c_angles_direction(double theta, double phi, double* out) noexcept nogil:
    cdef double st = sin(theta)
    out[0] = st * cos(phi)
    out[1] = st * sin(phi)
    out[2] = cos(theta)


cdef inline double dot3(const double* a, const double* b) noexcept nogil:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


cdef inline double norm3(const double* a) noexcept nogil:
    return sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


cdef void _init_grid():
    cdef double golden_angle = M_PI * (3.0 - sqrt(5.0))
    cdef int j
    for j in range(DIR_GRID):
        c_direction(1.0 - (j + 0.5) / DIR_GRID, j * golden_angle, _GRID[j])


_init_grid()


def binary_entropy(double x):
    return c_h(x)


def shannon(p):
    cdef double[::1] v = np.ascontiguousarray(p, dtype=np.float64)
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(v.shape[0]):
        total += xlx(v[i])
    return total


cdef double c_mi(const double* joint, int nrow, int ncol, double* col) noexcept nogil:
    cdef double hx = 0.0, hxy = 0.0, hy = 0.0, rs, v
    cdef int i, j
    if nrow <= 1 or ncol <= 1:
        return 0.0  # one message or one outcome carries no information
    for j in range(ncol):
        col[j] = 0.0
    for i in range(nrow):
        rs = 0.0
        for j in range(ncol):
            v = joint[i * ncol + j]
            rs += v
            col[j] += v
            hxy += xlx(v)
        hx += xlx(rs)
    for j in range(ncol):
        hy += xlx(col[j])
    return hx + hy - hxy


def mutual_information(joint):
    cdef double[:, ::1] j = np.ascontiguousarray(joint, dtype=np.float64)
    cdef int nrow = j.shape[0], ncol = j.shape[1]
    if nrow == 0 or ncol == 0:
        return 0.0
    cdef double* col = <double*> malloc(ncol * sizeof(double))
    cdef double v
    try:
        v = c_mi(&j[0, 0], nrow, ncol, col)
    finally:
        free(col)
    return v


# --------------------------------------------------------------------------
# stick-breaking decomposition decode


cdef inline int chart_width(int m, int chart) noexcept nogil:
    return m - 1 if chart == 1 else m


cdef bint c_member(const double* coords, int m, int chart) noexcept nogil:
    cdef double sq = 0.0
    cdef int j
    if chart == 2:
        for j in range(m):
            sq += coords[j] * coords[j]
        return sqrt(sq) <= 1.0 + MEMBER_TOL
    for j in range(m):
        if coords[j] < -MEMBER_TOL:
            return False
        if chart == 0 and coords[j] > 1.0 + MEMBER_TOL:
            return False
    return True


cdef int c_decode(const double* x, const double* target, int m, int k, int chart,
                  double* W, double* S) noexcept nogil:
    """Fill ``W`` (k) and ``S`` (k x m); return member count, 0 if infeasible."""
    cdef int cw = chart_width(m, chart)
    cdef double rem = 1.0, p, rest, kept, pk, acc
    cdef int i, j, base, cnt = 0
    for i in range(k - 1):
        p = rem * x[i]
        rem -= p
        if p < DROP:
            continue
        base = k - 1 + i * cw
        if chart == 1:
            rest = 1.0
            for j in range(cw):
                S[cnt * m + j] = x[base + j]
                rest -= x[base + j]
            S[cnt * m + m - 1] = rest
        else:
            for j in range(m):
                S[cnt * m + j] = x[base + j]
        if not c_member(&S[cnt * m], m, chart):
            return 0
        W[cnt] = p
        cnt += 1
    kept = 0.0
    for i in range(cnt):
        kept += W[i]
    pk = 1.0 - kept
    if pk < DROP:
        return 0
    for j in range(m):
        acc = target[j]
        for i in range(cnt):
            acc -= W[i] * S[i * m + j]
        S[cnt * m + j] = acc / pk
    if not c_member(&S[cnt * m], m, chart):
        return 0
    W[cnt] = pk
    return cnt + 1


def decode_stick(x, target, int k, int chart):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(target, dtype=np.float64)
    cdef int m = tv.shape[0]
    cdef double[::1] W = np.empty(k)
    cdef double[::1] S = np.empty(k * m)
    cdef int cnt
    if xv.shape[0] != (k - 1) * (1 + chart_width(m, chart)):
        raise ValueError("decomposition code has the wrong length")
    if k == 1:
        return [1.0], [list(tv)]
    cnt = c_decode(&xv[0], &tv[0], m, k, chart, &W[0], &S[0])
    if cnt == 0:
        return None
    return ([W[i] for i in range(cnt)],
            [[S[i * m + j] for j in range(m)] for i in range(cnt)])


# --------------------------------------------------------------------------
# squared model S3 (pure corner decompositions)


cdef inline double s3_H(double c1, double c2, double t) noexcept nogil:
    return xlx(t) + xlx(c1 - t) + xlx(c2 - t) + xlx(1.0 - c1 - c2 + t)


cdef double c_s3(double c1, double c2) noexcept nogil:
    cdef double tmin = c_max(0.0, c1 + c2 - 1.0)
    cdef double tmax = c_min(c1, c2)
    cdef double span = tmax - tmin
    cdef double best, v, t, a, b, x1, x2, f1, f2
    cdef int j, best_j = 0
    if span <= 0.0:
        return s3_H(c1, c2, tmin)
    best = s3_H(c1, c2, tmin)
    for j in range(1, S3_GRID):
        if j == S3_GRID - 1:
            t = tmax
        else:
            t = tmin + span * j / (S3_GRID - 1)
        v = s3_H(c1, c2, t)
        if v < best:
            best = v
            best_j = j
    a = tmin + span * (best_j - 1 if best_j > 0 else 0) / (S3_GRID - 1)
    b = tmin + span * (best_j + 1 if best_j + 1 < S3_GRID - 1 else S3_GRID - 1) / (S3_GRID - 1)
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1 = s3_H(c1, c2, x1)
    f2 = s3_H(c1, c2, x2)
    while b - a > S3_TOL:
        if f1 <= f2:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - GOLDEN * (b - a)
            f1 = s3_H(c1, c2, x1)
        else:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + GOLDEN * (b - a)
            f2 = s3_H(c1, c2, x2)
    return c_min(c_min(best, f1), f2)


def squared_s3_exact(double c1, double c2):
    return c_s3(c1, c2)


cdef double c_s3_ends(double c1, double c2) noexcept nogil:
    # H is concave along the corner family, so its minimum sits at an endpoint
    return c_min(s3_H(c1, c2, c_max(0.0, c1 + c2 - 1.0)), s3_H(c1, c2, c_min(c1, c2)))


def squared_s3_endpoints(double c1, double c2):
    return c_s3_ends(c1, c2)


# --------------------------------------------------------------------------
# qubit projective search


cdef double proj_value(const double* u, const double* W, const double* S, int cnt,
                       const double* r) noexcept nogil:
    cdef double v = c_h(0.5 * (1.0 + dot3(u, r)))
    cdef int i
    for i in range(cnt):
        v -= W[i] * c_h(0.5 * (1.0 + dot3(u, &S[3 * i])))
    return v


cdef double c_projective(const double* W, const double* S, int cnt, const double* r,
                         double* u_out) noexcept nogil:
    cdef double best, v, nr, nq, f, fc, old, step
    cdef double u[3]
    cdef double best_u[3]
    cdef double ang[2]
    cdef int i, j, s, sweeps
    cdef bint have = False, improved
    nr = norm3(r)
    if nr > 1e-12:
        best_u[0] = r[0] / nr
        best_u[1] = r[1] / nr
        best_u[2] = r[2] / nr
        best = proj_value(best_u, W, S, cnt, r)
        have = True
    for i in range(cnt):
        nq = norm3(&S[3 * i])
        if nq > 1e-12:
            u[0] = S[3 * i] / nq
            u[1] = S[3 * i + 1] / nq
            u[2] = S[3 * i + 2] / nq
            v = proj_value(u, W, S, cnt, r)
            if not have or v > best:
                best = v
                best_u[0] = u[0]
                best_u[1] = u[1]
                best_u[2] = u[2]
                have = True
    for j in range(DIR_GRID):
        v = proj_value(_GRID[j], W, S, cnt, r)
        if not have or v > best:
            best = v
            best_u[0] = _GRID[j][0]
            best_u[1] = _GRID[j][1]
            best_u[2] = _GRID[j][2]
            have = True
    ang[0] = acos(clip(best_u[2], -1.0, 1.0))
    ang[1] = atan2(best_u[1], best_u[0])
    c_angles_direction(ang[0], ang[1], u)
    f = proj_value(u, W, S, cnt, r)
    step = DIR_STEP
    sweeps = 0
    while sweeps < DIR_SWEEPS and step >= DIR_MIN_STEP:
        sweeps += 1
        improved = False
        for i in range(2):
            old = ang[i]
            for s in range(2):
                ang[i] = old + (step if s == 0 else -step)
                c_angles_direction(ang[0], ang[1], u)
                fc = proj_value(u, W, S, cnt, r)
                if fc > f:
                    f = fc
                    improved = True
                    break
                ang[i] = old
        if not improved:
            step *= 0.5
    if f < 0.0:
        f = 0.0
    c_angles_direction(ang[0], ang[1], u_out)
    return f


def projective_accinfo(W, S, r):
    cdef double[::1] wv = np.ascontiguousarray(W, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(S, dtype=np.float64).ravel()
    cdef double[::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef double u[3]
    cdef int cnt = wv.shape[0]
    cdef double f = c_projective(&wv[0], &sv[0], cnt, &rv[0], u)
    return f, [u[0], u[1], u[2]]


# --------------------------------------------------------------------------
# qubit rank-one POVM chart


cdef int c_decode_povm(const double* x, int n, double* w, double* U) noexcept nogil:
    cdef double v[3]
    cdef double an, total
    cdef int i, j
    if n == 2:
        c_direction(x[0], x[1], U)
        U[3] = -U[0]
        U[4] = -U[1]
        U[5] = -U[2]
        w[0] = 1.0
        w[1] = 1.0
        return 1
    v[0] = 0.0
    v[1] = 0.0
    v[2] = 0.0
    for i in range(n - 1):
        w[i] = x[i]
        c_direction(x[n - 1 + 2 * i], x[n + 2 * i], &U[3 * i])
        for j in range(3):
            v[j] -= w[i] * U[3 * i + j]
    an = norm3(v)
    if an > 1e-12:
        U[3 * (n - 1)] = v[0] / an
        U[3 * (n - 1) + 1] = v[1] / an
        U[3 * (n - 1) + 2] = v[2] / an
    else:
        an = 0.0
        U[3 * (n - 1)] = 0.0
        U[3 * (n - 1) + 1] = 0.0
        U[3 * (n - 1) + 2] = 1.0
    w[n - 1] = an
    total = 0.0
    for i in range(n):
        total += w[i]
    if total < 1e-12:
        return 0
    for i in range(n):
        w[i] = 2.0 * w[i] / total
    return 1


def decode_povm(x, int n):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double w[4]
    cdef double U[12]
    if n < 2 or n > 4:
        raise ValueError("qubit POVM charts support 2 to 4 outcomes")
    if not c_decode_povm(&xv[0], n, w, U):
        return None
    return [w[i] for i in range(n)], [[U[3 * i + j] for j in range(3)] for i in range(n)]


# --------------------------------------------------------------------------
# objectives


cdef class Objective:
    cdef int dim

    cdef double eval(self, const double* x) noexcept nogil:
        return NAN

    def __call__(self, x):
        cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
        if xv.shape[0] != self.dim:
            raise ValueError("objective called with a point of the wrong length")
        if self.dim == 0:
            return self.eval(NULL)
        return self.eval(&xv[0])


cdef class SquaredInduction(Objective):
    """Induction body in the squared model with a closed-form inner entropy."""
    cdef double target[2]
    cdef public int k, inner

    def __init__(self, double c1, double c2, int k, int inner):
        self.target[0] = c1
        self.target[1] = c2
        self.k = k
        self.inner = inner
        self.dim = (k - 1) * 3

    def decode(self, x):
        return decode_stick(x, [self.target[0], self.target[1]], self.k, 0)

    def best_index(self, x):
        dec = self.decode(x)
        if dec is None:
            return -1
        W, S = dec
        i1 = c_h(self.target[0])
        i2 = c_h(self.target[1])
        for i in range(len(W)):
            i1 -= W[i] * c_h(S[i][0])
            i2 -= W[i] * c_h(S[i][1])
        return 0 if i1 >= i2 else 1

    cdef double eval(self, const double* x) noexcept nogil:
        cdef double* W = <double*> malloc(self.k * 3 * sizeof(double))
        cdef double* S = W + self.k
        cdef int cnt, i
        cdef double i1, i2, info, inner, a, b, term
        if W == NULL:
            return NAN
        if self.k == 1:
            cnt = 1
            W[0] = 1.0
            S[0] = self.target[0]
            S[1] = self.target[1]
        else:
            cnt = c_decode(x, self.target, 2, self.k, 0, W, S)
        if cnt == 0:
            free(W)
            return NAN
        i1 = c_h(self.target[0])
        i2 = c_h(self.target[1])
        for i in range(cnt):
            i1 -= W[i] * c_h(S[2 * i])
            i2 -= W[i] * c_h(S[2 * i + 1])
        info = i1 if i1 >= i2 else i2
        if info < 0.0:
            info = 0.0
        inner = 0.0
        for i in range(cnt):
            a = S[2 * i]
            b = S[2 * i + 1]
            if self.inner == 1:
                term = c_min(c_h(a), c_h(b))
            elif self.inner == 2:
                term = c_max(c_h(a), c_h(b))
            elif self.inner == 3:
                term = c_s3_ends(clip(a, 0.0, 1.0), clip(b, 0.0, 1.0))
            elif self.inner == 4:
                term = c_h(a) + c_h(b)
            else:
                term = 0.0
            inner += W[i] * term
        free(W)
        return info + inner


cdef class ClassicalInduction(Objective):
    """Induction body in a classical model: canonical readout, Shannon inner."""
    cdef double[::1] target
    cdef public int k
    cdef int d

    def __init__(self, p, int k):
        self.target = np.ascontiguousarray(p, dtype=np.float64).copy()
        self.d = self.target.shape[0]
        self.k = k
        self.dim = (k - 1) * self.d

    def decode(self, x):
        return decode_stick(x, np.asarray(self.target), self.k, 1)

    cdef double eval(self, const double* x) noexcept nogil:
        cdef int d = self.d, k = self.k
        cdef double* buf = <double*> malloc((k + 2 * k * d + d) * sizeof(double))
        cdef double* W = buf
        cdef double* S = buf + k
        cdef double* J = S + k * d
        cdef double* col = J + k * d
        cdef int cnt, i, j
        cdef double info, inner, h
        if buf == NULL:
            return NAN
        if k == 1:
            cnt = 1
            W[0] = 1.0
            for j in range(d):
                S[j] = self.target[j]
        else:
            cnt = c_decode(x, &self.target[0], d, k, 1, W, S)
        if cnt == 0:
            free(buf)
            return NAN
        for i in range(cnt):
            for j in range(d):
                J[i * d + j] = W[i] * c_max(S[i * d + j], 0.0)
        info = c_mi(J, cnt, d, col)
        if info < 0.0:
            info = 0.0
        inner = 0.0
        for i in range(cnt):
            h = 0.0
            for j in range(d):
                h += xlx(S[i * d + j])
            inner += W[i] * h
        free(buf)
        return info + inner


cdef class QubitInduction(Objective):
    """Induction body for the qubit: projective inner search, von Neumann inner."""
    cdef double target[3]
    cdef public int k

    def __init__(self, r, int k):
        for j in range(3):
            self.target[j] = float(r[j])
        self.k = k
        self.dim = (k - 1) * 4

    def decode(self, x):
        return decode_stick(x, [self.target[0], self.target[1], self.target[2]], self.k, 2)

    def best_direction(self, x):
        dec = self.decode(x)
        if dec is None:
            return None
        return projective_accinfo(dec[0], dec[1], [self.target[0], self.target[1], self.target[2]])[1]

    cdef double eval(self, const double* x) noexcept nogil:
        cdef double* W = <double*> malloc(self.k * 4 * sizeof(double))
        cdef double* S = W + self.k
        cdef double u[3]
        cdef int cnt, i
        cdef double info, inner
        if W == NULL:
            return NAN
        if self.k == 1:
            cnt = 1
            W[0] = 1.0
            for i in range(3):
                S[i] = self.target[i]
        else:
            cnt = c_decode(x, self.target, 3, self.k, 2, W, S)
        if cnt == 0:
            free(W)
            return NAN
        info = c_projective(W, S, cnt, self.target, u)
        inner = 0.0
        for i in range(cnt):
            inner += W[i] * c_h(0.5 * (1.0 + norm3(&S[3 * i])))
        free(W)
        return info + inner


cdef class SquaredFgInfo(Objective):
    """Mutual information (or outcome entropy) of the squared family at ``x = [alpha]``."""
    cdef double[::1] W
    cdef double[::1] S
    cdef int m, mode

    def __init__(self, weights, states, int mode=0):
        self.W = np.ascontiguousarray(weights, dtype=np.float64).copy()
        self.S = np.ascontiguousarray(states, dtype=np.float64).ravel().copy()
        self.m = self.W.shape[0]
        self.mode = mode
        self.dim = 1

    cdef double eval(self, const double* x) noexcept nogil:
        cdef double* J = <double*> malloc((self.m * 4 + 4) * sizeof(double))
        cdef double* col = J + self.m * 4
        cdef double alpha = x[0], ab = 1.0 - x[0], a, b, p, v
        cdef int i, j
        if J == NULL:
            return NAN
        for i in range(self.m):
            a = self.S[2 * i]
            b = self.S[2 * i + 1]
            p = self.W[i]
            J[4 * i] = p * alpha * a
            J[4 * i + 1] = p * alpha * (1.0 - a)
            J[4 * i + 2] = p * ab * b
            J[4 * i + 3] = p * ab * (1.0 - b)
        if self.mode == 1:
            for i in range(4):
                col[i] = 0.0
            for i in range(self.m):
                for j in range(4):
                    col[j] += J[4 * i + j]
            v = 0.0
            for i in range(4):
                v += xlx(col[i])
        else:
            v = c_mi(J, self.m, 4, col)
            if v < 0.0:
                v = 0.0
        free(J)
        return v


cdef class QubitPovmInfo(Objective):
    """Mutual information (or outcome entropy) of a rank-one qubit POVM chart."""
    cdef double[::1] W
    cdef double[::1] S
    cdef int m, n, mode

    def __init__(self, weights, states, int n, int mode=0):
        if n < 2 or n > 4:
            raise ValueError("qubit POVM charts support 2 to 4 outcomes")
        self.W = np.ascontiguousarray(weights, dtype=np.float64).copy()
        self.S = np.ascontiguousarray(states, dtype=np.float64).ravel().copy()
        self.m = self.W.shape[0]
        self.n = n
        self.mode = mode
        self.dim = 2 if n == 2 else (n - 1) * 3

    cdef double eval(self, const double* x) noexcept nogil:
        cdef double w[4]
        cdef double U[12]
        cdef int n = self.n, i, y
        cdef double e, v
        cdef double* J
        cdef double* col
        if not c_decode_povm(x, n, w, U):
            return NAN
        J = <double*> malloc((self.m * n + n) * sizeof(double))
        if J == NULL:
            return NAN
        col = J + self.m * n
        for i in range(self.m):
            for y in range(n):
                e = 0.5 * w[y] * (1.0 + dot3(&U[3 * y], &self.S[3 * i]))
                J[i * n + y] = self.W[i] * clip(e, 0.0, 1.0)
        if self.mode == 1:
            for y in range(n):
                col[y] = 0.0
            for i in range(self.m):
                for y in range(n):
                    col[y] += J[i * n + y]
            v = 0.0
            for y in range(n):
                v += xlx(col[y])
        else:
            v = c_mi(J, self.m, n, col)
            if v < 0.0:
                v = 0.0
        free(J)
        return v


# --------------------------------------------------------------------------
# pattern search


cdef inline bint better(double fc, double f, bint maximize) noexcept nogil:
    if fc != fc:
        return False
    if f != f:
        return True
    return fc > f if maximize else fc < f


cdef double native_search(Objective obj, double* x, const double* lo, const double* hi,
                          double* step, int n, int iters, bint maximize, double min_step,
                          long* evals) noexcept nogil:
    cdef double f, fc, old, cand, mx
    cdef int sweeps = 0, i, s
    cdef bint improved
    f = obj.eval(x)
    evals[0] = 1
    while sweeps < iters:
        mx = 0.0
        for i in range(n):
            if step[i] > mx:
                mx = step[i]
        if n == 0 or mx < min_step:
            break
        sweeps += 1
        improved = False
        for i in range(n):
            if step[i] <= 0.0:
                continue
            old = x[i]
            for s in range(2):
                cand = clip(old + (step[i] if s == 0 else -step[i]), lo[i], hi[i])
                if cand == old:
                    continue
                x[i] = cand
                fc = obj.eval(x)
                evals[0] += 1
                if better(fc, f, maximize):
                    f = fc
                    improved = True
                    break
                x[i] = old
        if not improved:
            for i in range(n):
                step[i] *= 0.5
    return f


def pattern_search(objective, x0, lower, upper, int iters, bint maximize, double min_step=1e-9):
    """Coordinate pattern search with step halving; returns ``(x, f, evals)``."""
    cdef double[::1] x = np.array(x0, dtype=np.float64)
    cdef double[::1] lo = np.ascontiguousarray(lower, dtype=np.float64)
    cdef double[::1] hi = np.ascontiguousarray(upper, dtype=np.float64)
    cdef int n = x.shape[0], i, sweeps = 0, s
    cdef double[::1] step = np.empty(max(n, 1))
    cdef long evals = 0
    cdef double f, fc, old, cand
    cdef bint improved
    cdef Objective native
    cdef double* xp
    for i in range(n):
        x[i] = clip(x[i], lo[i], hi[i])
        step[i] = 0.25 * (hi[i] - lo[i])
    if isinstance(objective, Objective):
        native = <Objective> objective
        if native.dim != n:
            raise ValueError("objective dimension does not match the start point")
        xp = &x[0] if n > 0 else NULL
        with nogil:
            f = native_search(native, xp, &lo[0] if n > 0 else NULL,
                              &hi[0] if n > 0 else NULL, &step[0], n, iters,
                              maximize, min_step, &evals)
        return list(x), f, evals
    f = float(objective(list(x)))
    evals = 1
    while sweeps < iters:
        if n == 0 or max([step[i] for i in range(n)]) < min_step:
            break
        sweeps += 1
        improved = False
        for i in range(n):
            if step[i] <= 0.0:
                continue
            old = x[i]
            for s in range(2):
                cand = clip(old + (step[i] if s == 0 else -step[i]), lo[i], hi[i])
                if cand == old:
                    continue
                x[i] = cand
                fc = float(objective(list(x)))
                evals += 1
                if better(fc, f, maximize):
                    f = fc
                    improved = True
                    break
                x[i] = old
        if not improved:
            for i in range(n):
                step[i] *= 0.5
    return list(x), f, evals
