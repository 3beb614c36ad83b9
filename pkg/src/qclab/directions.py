"""Spaces of directions and subsets of them.

A direction space here is one of

* ``circle``: a closed circle of length ``length`` in (0, 2*pi], directions
  are floats in [0, length);
* ``pair``: the two-point space S^0, encoded as the angles 0 and pi of the
  circle of length 2*pi (so the circle metric gives them distance pi);
* ``sphere``: the round unit 2-sphere, directions are unit 3-vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


class EmptyDirectionSet(ValueError):
    pass


@dataclass(frozen=True)
class DirectionSpace:
    kind: str
    length: float = TWO_PI

    def __post_init__(self):
        if self.kind not in ("circle", "pair", "sphere"):
            raise ValueError(f"unknown direction space kind {self.kind!r}")
        if self.kind == "circle" and not 0.0 < self.length <= TWO_PI + 1e-12:
            raise ValueError(f"circle length {self.length} outside (0, 2pi]")

    @property
    def metric_length(self) -> float:
        return TWO_PI if self.kind == "pair" else self.length

    @property
    def diameter(self) -> float:
        if self.kind == "circle":
            return 0.5 * self.length
        return math.pi

    @property
    def is_angular(self) -> bool:
        return self.kind != "sphere"

    def canonical(self, d):
        if self.kind == "sphere":
            v = np.asarray(d, dtype=np.float64)
            return v / np.linalg.norm(v)
        x = float(np.mod(float(np.asarray(d).ravel()[0]), self.metric_length))
        if self.kind == "pair":
            return 0.0 if min(x, TWO_PI - x) < 0.5 * math.pi else math.pi
        if self.metric_length - x < 1e-15:
            x = 0.0
        return x

    def as_array(self, dirs) -> np.ndarray:
        if self.kind == "sphere":
            return np.asarray(dirs, dtype=np.float64).reshape(-1, 3)
        return np.asarray(dirs, dtype=np.float64).reshape(-1)

    def dist(self, a, b):
        """Intrinsic distance, broadcasting over leading axes."""
        if self.kind == "sphere":
            a = np.asarray(a, dtype=np.float64)
            b = np.asarray(b, dtype=np.float64)
            dot = np.sum(a * b, axis=-1)
            cr = np.linalg.norm(np.cross(a, b), axis=-1)
            return np.arctan2(cr, dot)
        ell = self.metric_length
        d = np.mod(np.abs(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)), ell)
        return np.minimum(d, ell - d)

    def pairwise(self, A, B) -> np.ndarray:
        A = self.as_array(A)
        B = self.as_array(B)
        if self.kind == "sphere":
            return self.dist(A[:, None, :], B[None, :, :])
        return self.dist(A[:, None], B[None, :])

    def min_dist(self, X, pts) -> np.ndarray:
        X = self.as_array(X)
        pts = self.as_array(pts)
        if len(pts) == 0:
            return np.full(len(X), np.inf)
        if self.kind == "sphere":
            return _kernels.sphere_min_dist(X, pts)
        return _kernels.circle_min_dist(X, pts, self.metric_length)

    def grid(self, count: int) -> np.ndarray:
        """Quasi-uniform set of ``count`` directions (both points for S^0)."""
        if self.kind == "pair":
            return np.array([0.0, math.pi])
        if self.kind == "circle":
            return np.arange(count) * (self.length / count)
        return fibonacci_sphere(count)

    def random(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if self.kind == "pair":
            return rng.integers(0, 2, size=count) * math.pi
        if self.kind == "circle":
            return rng.uniform(0.0, self.length, size=count)
        v = rng.normal(size=(count, 3))
        return v / np.linalg.norm(v, axis=1, keepdims=True)


def fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    ga = math.pi * (3.0 - math.sqrt(5.0))
    th = ga * i
    return np.stack([rho * np.cos(th), rho * np.sin(th), z], axis=1)


def sigma_distance(sigma: DirectionSpace, a, b) -> float:
    return float(sigma.dist(a, b))


@dataclass
class DirectionSet:
    """Closed subset of a direction space.

    ``kind`` is ``finite`` (points in ``pts``), ``full`` (the whole space) or
    ``great_circle`` (unit vectors orthogonal to ``normal``; sphere only).
    ``estimated`` marks sets obtained by sampling rather than analytically.
    """

    sigma: DirectionSpace
    kind: str = "finite"
    pts: np.ndarray = field(default_factory=lambda: np.empty(0))
    normal: np.ndarray | None = None
    estimated: bool = False

    def __post_init__(self):
        if self.kind == "finite":
            self.pts = self.sigma.as_array(self.pts)
        if self.kind == "great_circle":
            if self.sigma.kind != "sphere":
                raise ValueError("great_circle sets live in the direction sphere")
            n = np.asarray(self.normal, dtype=np.float64)
            self.normal = n / np.linalg.norm(n)

    @classmethod
    def finite(cls, sigma, pts, estimated=False):
        return cls(sigma, "finite", sigma.as_array(pts), estimated=estimated)

    @classmethod
    def empty(cls, sigma, estimated=False):
        return cls.finite(sigma, [], estimated=estimated)

    @classmethod
    def full(cls, sigma):
        return cls(sigma, "full")

    @property
    def is_empty(self) -> bool:
        return self.kind == "finite" and len(self.pts) == 0

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __len__(self):
        if self.kind != "finite":
            raise TypeError("continuum direction set has no length")
        return len(self.pts)

    def dist_to(self, X) -> np.ndarray:
        """Distance from each direction in X to this set."""
        X = self.sigma.as_array(X)
        if self.kind == "full":
            return np.zeros(len(X))
        if self.kind == "great_circle":
            s = np.abs(X @ self.normal)
            return np.arcsin(np.clip(s, 0.0, 1.0))
        if self.is_empty:
            raise EmptyDirectionSet("distance to an empty direction set")
        return self.sigma.min_dist(X, self.pts)

    def contains(self, x, tol: float = 1e-9) -> bool:
        if self.is_empty:
            return False
        return bool(self.dist_to(x)[0] <= tol)

    def discretize(self, resolution: float = 1e-3) -> np.ndarray:
        """Finite point sample; exact for finite sets."""
        if self.kind == "finite":
            return self.pts
        if self.kind == "full":
            if self.sigma.kind == "sphere":
                n = max(64, int(4.0 * math.pi / resolution ** 2))
                return fibonacci_sphere(min(n, 20000))
            if self.sigma.kind == "pair":
                return self.sigma.grid(2)
            n = max(8, int(math.ceil(self.sigma.length / resolution)))
            return self.sigma.grid(n)
        e1, e2 = _orthonormal_pair(self.normal)
        n = max(8, int(math.ceil(TWO_PI / resolution)))
        t = np.arange(n) * (TWO_PI / n)
        return np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2

    def nearest_in(self, x) -> np.ndarray:
        """Closest member of this set to the direction x."""
        x = self.sigma.canonical(x)
        if self.kind == "full":
            return x
        if self.kind == "great_circle":
            v = np.asarray(x) - (np.asarray(x) @ self.normal) * self.normal
            nv = np.linalg.norm(v)
            if nv < 1e-15:
                return _orthonormal_pair(self.normal)[0]
            return v / nv
        if self.is_empty:
            raise EmptyDirectionSet("empty direction set")
        d = self.sigma.dist(self.pts if self.sigma.kind != "sphere" else self.pts,
                            x if self.sigma.kind != "sphere" else np.asarray(x)[None, :])
        return self.pts[int(np.argmin(d))]

    def intersect(self, other: "DirectionSet", tol: float = 1e-6) -> "DirectionSet":
        if self.kind == "full":
            return other
        if other.kind == "full":
            return self
        if self.kind == "finite" or other.kind == "finite":
            fin, oth = (self, other) if self.kind == "finite" else (other, self)
            if fin.is_empty or oth.is_empty:
                return DirectionSet.empty(self.sigma)
            keep = oth.dist_to(fin.pts) <= tol
            return DirectionSet.finite(self.sigma, fin.pts[keep],
                                       estimated=self.estimated or other.estimated)
        # two great circles of the direction sphere
        c = np.cross(self.normal, other.normal)
        if np.linalg.norm(c) < tol:
            return self
        c = c / np.linalg.norm(c)
        return DirectionSet.finite(self.sigma, np.stack([c, -c]))

    def hausdorff(self, other: "DirectionSet", resolution: float = 1e-3) -> float:
        if self.is_empty and other.is_empty:
            return 0.0
        if self.is_empty or other.is_empty:
            return math.inf
        a = self.discretize(resolution)
        b = other.discretize(resolution)
        return float(max(other.dist_to(a).max(), self.dist_to(b).max()))

    def describe(self) -> dict:
        if self.kind == "finite":
            return {"kind": "finite", "points": self.pts.tolist()}
        if self.kind == "great_circle":
            return {"kind": "great_circle", "normal": self.normal.tolist()}
        return {"kind": "full"}


def _orthonormal_pair(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = a - (a @ n) * n
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


def set_distance(sigma: DirectionSpace, A: DirectionSet, B: DirectionSet) -> float:
    """min over a in A, b in B of |ab|; exact for the analytic continua."""
    if A.is_empty or B.is_empty:
        raise EmptyDirectionSet("set_distance needs two nonempty sets")
    if A.kind == "full" or B.kind == "full":
        return 0.0
    if A.kind == "finite":
        return float(B.dist_to(A.pts).min())
    if B.kind == "finite":
        return float(A.dist_to(B.pts).min())
    return 0.0  # two great circles of S^2 always meet


def minimizing_pair(sigma: DirectionSpace, A: DirectionSet, B: DirectionSet):
    """A pair (a, b) realising set_distance(A, B)."""
    if A.kind != "finite":
        b = B.pts[0] if B.kind == "finite" else B.discretize(0.1)[0]
        return A.nearest_in(b), b
    d = B.dist_to(A.pts)
    i = int(np.argmin(d))
    return A.pts[i], B.nearest_in(A.pts[i])


@dataclass(frozen=True)
class Farthest:
    direction: object
    value: float
    unique: bool


UNIQUE_MARGIN = 1e-6


def farthest_direction(sigma: DirectionSpace, A: DirectionSet, method: str = "exact",
                       grid_step: float = 1e-3, resolution: float = 1e-6,
                       starts: int = 4, rng: np.random.Generator | None = None) -> Farthest:
    """Direction maximising the distance to A.

    ``method="exact"`` solves the circle case through the largest gap of A
    and the sphere case by enumerating the Voronoi-vertex candidates;
    ``method="grid"`` does an exhaustive grid of spacing ``grid_step`` with
    golden-section refinement of the best ``starts`` local maxima.
    """
    if A.is_empty:
        raise EmptyDirectionSet("farthest direction from an empty set")
    if A.kind == "full":
        x = sigma.grid(1)[0] if sigma.kind != "sphere" else np.array([0.0, 0.0, 1.0])
        return Farthest(x, 0.0, False)
    if A.kind == "great_circle":
        return Farthest(A.normal.copy(), HALF_PI, False)
    if sigma.kind == "pair":
        cand = np.array([0.0, math.pi])
        vals = A.dist_to(cand)
        i = int(np.argmax(vals))
        return Farthest(float(cand[i]), float(vals[i]), bool(vals[i] > HALF_PI + UNIQUE_MARGIN))
    if sigma.kind == "circle":
        if method == "exact":
            x, v = _circle_gap_farthest(A.pts, sigma.length)
        else:
            x, v = _circle_grid_farthest(A.pts, sigma.length, grid_step, resolution, starts)
        return Farthest(x, v, bool(v > HALF_PI + UNIQUE_MARGIN))
    x, v = _sphere_farthest(A.pts, method, starts, rng)
    return Farthest(x, v, bool(v > HALF_PI + UNIQUE_MARGIN))


def _circle_gap_farthest(pts: np.ndarray, length: float) -> tuple[float, float]:
    p = np.sort(np.mod(pts, length))
    gaps = np.diff(np.concatenate([p, [p[0] + length]]))
    i = int(np.argmax(gaps))
    x = float(np.mod(p[i] + 0.5 * gaps[i], length))
    if length - x < 1e-15:
        x = 0.0
    return x, float(min(0.5 * gaps[i], 0.5 * length))


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    g = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = lo, hi
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _circle_grid_farthest(pts, length, step, resolution, starts):
    n = max(16, int(math.ceil(length / step)))
    h = length / n
    grid = np.arange(n) * h
    vals = _kernels.circle_min_dist(grid, pts, length)
    left = np.roll(vals, 1)
    right = np.roll(vals, -1)
    peaks = np.flatnonzero((vals >= left) & (vals >= right))
    peaks = peaks[np.argsort(-vals[peaks])][:max(1, starts)]

    def f(x):
        return float(_kernels.circle_min_dist(np.array([x]), pts, length)[0])

    best_x, best_v = float(grid[peaks[0]]), float(vals[peaks[0]])
    for i in peaks:
        x, v = _golden_max(f, grid[i] - h, grid[i] + h, resolution * 0.1)
        if v > best_v:
            best_x, best_v = x, v
    return float(np.mod(best_x, length)), best_v


def _sphere_farthest(pts, method, starts, rng):
    pts = np.asarray(pts, dtype=np.float64).reshape(-1, 3)
    cands = [-pts]
    m = len(pts)
    if m >= 2 and m <= 40:
        i, j = np.triu_indices(m, 1)
        s = pts[i] + pts[j]
        ns = np.linalg.norm(s, axis=1)
        ok = ns > 1e-12
        cands.append(-(s[ok] / ns[ok, None]))
        c = np.cross(pts[i], pts[j])
        nc = np.linalg.norm(c, axis=1)
        ok = nc > 1e-12
        cands.append(c[ok] / nc[ok, None])
        cands.append(-c[ok] / nc[ok, None])
        # antipodal pairs: the bisector is a whole great circle
        for a in np.flatnonzero(~ok):
            if pts[i[a]] @ pts[j[a]] < 0:
                cands.append(np.stack(_orthonormal_pair(pts[i[a]])))
    if m >= 3 and m <= 20:
        i, j, k = (np.array(t) for t in zip(*[(a, b, c) for a in range(m)
                                              for b in range(a + 1, m) for c in range(b + 1, m)]))
        n = np.cross(pts[j] - pts[i], pts[k] - pts[i])
        nn = np.linalg.norm(n, axis=1)
        ok = nn > 1e-12
        n = n[ok] / nn[ok, None]
        cands.extend([n, -n])
    lattice = fibonacci_sphere(4000)
    allc = np.concatenate(cands + [lattice])
    vals = _kernels.sphere_min_dist(allc, pts)
    order = np.argsort(-vals)
    best = allc[order[0]]
    best_v = float(vals[order[0]])
    if method == "grid" or m > 20:
        from scipy.optimize import minimize

        for idx in order[:max(1, starts)]:
            x0 = allc[idx]
            e1, e2 = _orthonormal_pair(x0)

            def neg(u, x0=x0, e1=e1, e2=e2):
                v = x0 + u[0] * e1 + u[1] * e2
                v = v / np.linalg.norm(v)
                return -float(_kernels.sphere_min_dist(v[None, :], pts)[0])

            res = minimize(neg, np.zeros(2), method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-12, "initial_simplex":
                                    np.array([[0.0, 0.0], [0.02, 0.0], [0.0, 0.02]])})
            if -res.fun > best_v:
                v = x0 + res.x[0] * e1 + res.x[1] * e2
                best, best_v = v / np.linalg.norm(v), -float(res.fun)
    return best, best_v
