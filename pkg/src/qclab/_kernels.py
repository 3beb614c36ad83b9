"""Batch numeric kernels.

Every kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version.  The public names at the bottom of the module point at one of the
two, chosen once at import time.  Set ``QCLAB_NUMBA=0`` to force the numpy
path (useful for debugging and for the benchmark in ``benchmarks/``).
"""
from __future__ import annotations

import math
import os

import numpy as np

TWO_PI = 2.0 * math.pi


def _want_numba() -> bool:
    flag = os.environ.get("QCLAB_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _sn_np(k, x):
    if k > 0.0:
        rk = math.sqrt(k)
        return np.sin(rk * x) / rk
    if k < 0.0:
        rk = math.sqrt(-k)
        return np.sinh(rk * x) / rk
    return x


def half_angle_np(k, b, c, a, clamp):
    """Angle opposite ``a`` in the model triangle with sides b, c, a.

    Returns ``(angle, status)`` where status is 0 for a valid triangle,
    1 when the side data is invalid beyond ``clamp``.  Degenerate
    perimeters for k > 0 are left to the caller (status 2).
    """
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b, c, a = np.broadcast_arrays(b, c, a)
    s = 0.5 * (a + b + c)
    sa, sb, sc = s - a, s - b, s - c
    bad = (sa < -clamp) | (sb < -clamp) | (sc < -clamp)
    sa = np.maximum(sa, 0.0)
    sb = np.maximum(sb, 0.0)
    sc = np.maximum(sc, 0.0)
    status = np.where(bad, 1, 0).astype(np.int64)
    if k > 0.0:
        lim = math.pi / math.sqrt(k)
        bad_p = s > lim + clamp
        status = np.where(bad_p, 1, status)
        degen = (np.abs(s - lim) <= 1e-9 * max(1.0, lim)) & (status == 0)
        status = np.where(degen, 2, status)
        s = np.minimum(s, lim)
    num = _sn_np(k, sb) * _sn_np(k, sc)
    den = _sn_np(k, s) * _sn_np(k, sa)
    num = np.maximum(num, 0.0)
    den = np.maximum(den, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        ang = 2.0 * np.arctan2(np.sqrt(num), np.sqrt(den))
    return ang, status


def circle_min_dist_np(x, pts, length):
    x = np.asarray(x, dtype=np.float64).reshape(-1, 1)
    pts = np.asarray(pts, dtype=np.float64).reshape(1, -1)
    d = np.mod(np.abs(x - pts), length)
    d = np.minimum(d, length - d)
    return d.min(axis=1)


def sphere_min_dist_np(X, pts):
    X = np.asarray(X, dtype=np.float64)
    pts = np.asarray(pts, dtype=np.float64)
    dot = X @ pts.T
    cr = np.linalg.norm(np.cross(X[:, None, :], pts[None, :, :]), axis=2)
    return np.arctan2(cr, dot).min(axis=1)


def sphere_dist_np(U, V):
    U = np.asarray(U, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    num = np.linalg.norm(U - V, axis=-1)
    den = np.linalg.norm(U + V, axis=-1)
    return 2.0 * np.arctan2(num, den)


def circle_cone_dist_np(k, angle, r1, f1, r2, f2):
    """Distances in the Euclidean (k=0) or spherical (k=1) cone over a
    circle of length ``angle``; radial coordinate r, angular coordinate f."""
    r1 = np.asarray(r1, dtype=np.float64)
    r2 = np.asarray(r2, dtype=np.float64)
    delta = np.mod(np.abs(np.asarray(f1, dtype=np.float64) - f2), angle)
    delta = np.minimum(delta, angle - delta)
    delta = np.minimum(delta, math.pi)
    hs = np.sin(0.5 * delta) ** 2
    if k > 0.0:
        ss = np.sin(r1) * np.sin(r2)
        hav = np.sin(0.5 * (r1 - r2)) ** 2 + ss * hs
        # 1 - hav written as a sum of squares keeps accuracy near distance pi
        co = np.cos(0.5 * (r1 + r2)) ** 2 + ss * (1.0 - hs)
        return 2.0 * np.arctan2(np.sqrt(np.maximum(hav, 0.0)), np.sqrt(np.maximum(co, 0.0)))
    sq = (r1 - r2) ** 2 + 4.0 * r1 * r2 * hs
    return np.sqrt(np.maximum(sq, 0.0))


# scalar versions: a single pair costs less in plain Python than a kernel call

def sphere_dist1(u, v) -> float:
    d = u - v
    a = u + v
    return 2.0 * math.atan2(math.sqrt(float(d @ d)), math.sqrt(float(a @ a)))


def circle_cone_dist1(k, angle, r1, f1, r2, f2) -> float:
    delta = abs(f1 - f2) % angle
    delta = min(delta, angle - delta, math.pi)
    hs = math.sin(0.5 * delta) ** 2
    if k > 0.0:
        ss = math.sin(r1) * math.sin(r2)
        hav = math.sin(0.5 * (r1 - r2)) ** 2 + ss * hs
        co = math.cos(0.5 * (r1 + r2)) ** 2 + ss * (1.0 - hs)
        return 2.0 * math.atan2(math.sqrt(max(hav, 0.0)), math.sqrt(max(co, 0.0)))
    return math.sqrt(max((r1 - r2) ** 2 + 4.0 * r1 * r2 * hs, 0.0))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _sn_nb(k, x):
        if k > 0.0:
            rk = math.sqrt(k)
            return math.sin(rk * x) / rk
        if k < 0.0:
            rk = math.sqrt(-k)
            return math.sinh(rk * x) / rk
        return x

    @numba.njit(cache=True)
    def _half_angle_loop(k, b, c, a, clamp, out, status):
        lim = math.pi / math.sqrt(k) if k > 0.0 else 0.0
        for i in range(a.shape[0]):
            s = 0.5 * (a[i] + b[i] + c[i])
            sa = s - a[i]
            sb = s - b[i]
            sc = s - c[i]
            st = 0
            if sa < -clamp or sb < -clamp or sc < -clamp:
                st = 1
            sa = max(sa, 0.0)
            sb = max(sb, 0.0)
            sc = max(sc, 0.0)
            if k > 0.0:
                if s > lim + clamp:
                    st = 1
                elif abs(s - lim) <= 1e-9 * max(1.0, lim) and st == 0:
                    st = 2
                s = min(s, lim)
            num = max(_sn_nb(k, sb) * _sn_nb(k, sc), 0.0)
            den = max(_sn_nb(k, s) * _sn_nb(k, sa), 0.0)
            out[i] = 2.0 * math.atan2(math.sqrt(num), math.sqrt(den))
            status[i] = st

    def half_angle_nb(k, b, c, a, clamp):
        b, c, a = np.broadcast_arrays(
            np.asarray(b, dtype=np.float64),
            np.asarray(c, dtype=np.float64),
            np.asarray(a, dtype=np.float64),
        )
        shape = a.shape
        bf = np.ascontiguousarray(b).ravel()
        cf = np.ascontiguousarray(c).ravel()
        af = np.ascontiguousarray(a).ravel()
        out = np.empty(af.shape[0])
        status = np.empty(af.shape[0], dtype=np.int64)
        _half_angle_loop(float(k), bf, cf, af, float(clamp), out, status)
        return out.reshape(shape), status.reshape(shape)

    @numba.njit(cache=True)
    def _circle_min_dist_loop(x, pts, length, out):
        for i in range(x.shape[0]):
            best = np.inf
            for j in range(pts.shape[0]):
                d = abs(x[i] - pts[j]) % length
                d = min(d, length - d)
                if d < best:
                    best = d
            out[i] = best

    def circle_min_dist_nb(x, pts, length):
        x = np.ascontiguousarray(x, dtype=np.float64).ravel()
        pts = np.ascontiguousarray(pts, dtype=np.float64).ravel()
        out = np.empty(x.shape[0])
        _circle_min_dist_loop(x, pts, float(length), out)
        return out

    @numba.njit(cache=True)
    def _sphere_min_dist_loop(X, pts, out):
        for i in range(X.shape[0]):
            best = np.inf
            for j in range(pts.shape[0]):
                dot = X[i, 0] * pts[j, 0] + X[i, 1] * pts[j, 1] + X[i, 2] * pts[j, 2]
                c0 = X[i, 1] * pts[j, 2] - X[i, 2] * pts[j, 1]
                c1 = X[i, 2] * pts[j, 0] - X[i, 0] * pts[j, 2]
                c2 = X[i, 0] * pts[j, 1] - X[i, 1] * pts[j, 0]
                d = math.atan2(math.sqrt(c0 * c0 + c1 * c1 + c2 * c2), dot)
                if d < best:
                    best = d
            out[i] = best

    def sphere_min_dist_nb(X, pts):
        X = np.ascontiguousarray(X, dtype=np.float64).reshape(-1, 3)
        pts = np.ascontiguousarray(pts, dtype=np.float64).reshape(-1, 3)
        out = np.empty(X.shape[0])
        _sphere_min_dist_loop(X, pts, out)
        return out

    @numba.njit(cache=True)
    def _sphere_dist_loop(U, V, out):
        m = U.shape[1]
        for i in range(U.shape[0]):
            sm = 0.0
            sp = 0.0
            for j in range(m):
                dm = U[i, j] - V[i, j]
                dp = U[i, j] + V[i, j]
                sm += dm * dm
                sp += dp * dp
            out[i] = 2.0 * math.atan2(math.sqrt(sm), math.sqrt(sp))

    def sphere_dist_nb(U, V):
        U, V = np.broadcast_arrays(np.asarray(U, dtype=np.float64),
                                   np.asarray(V, dtype=np.float64))
        shape = U.shape[:-1]
        Uf = np.ascontiguousarray(U).reshape(-1, U.shape[-1])
        Vf = np.ascontiguousarray(V).reshape(-1, V.shape[-1])
        out = np.empty(Uf.shape[0])
        _sphere_dist_loop(Uf, Vf, out)
        return out.reshape(shape)

    @numba.njit(cache=True)
    def _circle_cone_loop(k, angle, r1, f1, r2, f2, out):
        for i in range(r1.shape[0]):
            delta = abs(f1[i] - f2[i]) % angle
            delta = min(delta, angle - delta)
            delta = min(delta, math.pi)
            hs = math.sin(0.5 * delta) ** 2
            if k > 0.0:
                ss = math.sin(r1[i]) * math.sin(r2[i])
                hav = math.sin(0.5 * (r1[i] - r2[i])) ** 2 + ss * hs
                co = math.cos(0.5 * (r1[i] + r2[i])) ** 2 + ss * (1.0 - hs)
                out[i] = 2.0 * math.atan2(math.sqrt(max(hav, 0.0)), math.sqrt(max(co, 0.0)))
            else:
                sq = (r1[i] - r2[i]) ** 2 + 4.0 * r1[i] * r2[i] * hs
                out[i] = math.sqrt(max(sq, 0.0))

    def circle_cone_dist_nb(k, angle, r1, f1, r2, f2):
        arrs = np.broadcast_arrays(*(np.asarray(v, dtype=np.float64) for v in (r1, f1, r2, f2)))
        shape = arrs[0].shape
        flat = [np.ascontiguousarray(v).ravel() for v in arrs]
        out = np.empty(flat[0].shape[0])
        _circle_cone_loop(float(k), float(angle), flat[0], flat[1], flat[2], flat[3], out)
        return out.reshape(shape)


USE_NUMBA = HAVE_NUMBA and _want_numba()
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    half_angle = half_angle_nb
    circle_min_dist = circle_min_dist_nb
    sphere_min_dist = sphere_min_dist_nb
    sphere_dist = sphere_dist_nb
    circle_cone_dist = circle_cone_dist_nb
else:
    half_angle = half_angle_np
    circle_min_dist = circle_min_dist_np
    sphere_min_dist = sphere_min_dist_np
    sphere_dist = sphere_dist_np
    circle_cone_dist = circle_cone_dist_np
