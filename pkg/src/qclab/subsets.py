"""Closed subsets of the zoo spaces.

Every subset answers membership, distance and nearest-point queries
analytically, samples its own points, and (where the geometry is simple
enough) reports its tangent cone Sigma_p F exactly.  ``tangent`` returns
``None`` when no analytic answer is available; callers then fall back on
``tangent.tangent_cone_estimate``.
"""
from __future__ import annotations

import math

import numpy as np

from .directions import TWO_PI, DirectionSet, DirectionSpace
from .spaces import (Cone, Euclidean, Isometry, ModelSpace, Sphere, Spindle,
                     _CircleCone, _LinearChart)

MEMBER_TOL = 1e-9
TIE_TOL = 1e-6
CONTINUUM_SAMPLE = 8


def _dedupe(space: ModelSpace, pts, tol: float = 1e-9) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for p in pts:
        if all(space.distance(p, q) > tol for q in out):
            out.append(np.asarray(p, dtype=np.float64))
    return out


def _null_space(M: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal rows spanning the null space of M."""
    _, s, vt = np.linalg.svd(M)
    rank = int(np.sum(s > tol))
    return vt[rank:].copy()


class SubsetSpec:
    """Base class: a closed subset F of ``space``."""

    space: ModelSpace
    description: str = "subset"

    def distance_to(self, x) -> float:
        raise NotImplementedError

    def contains(self, x, tol: float = MEMBER_TOL) -> bool:
        return self.distance_to(x) <= tol

    def nearest(self, q) -> list[np.ndarray]:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        raise NotImplementedError

    def sample_near(self, rng: np.random.Generator, center, radius: float, count: int) -> np.ndarray:
        raise NotImplementedError

    def tangent(self, p) -> DirectionSet | None:
        return None

    def special_points(self) -> list[np.ndarray]:
        return []

    @property
    def is_empty(self) -> bool:
        return False

    @property
    def finite_points(self) -> np.ndarray | None:
        return None

    def describe(self) -> dict:
        return {"type": self.description}

    def _filter_near(self, pts, center, radius):
        if len(pts) == 0:
            return np.empty((0, len(np.asarray(center))))
        pts = np.asarray(pts, dtype=np.float64)
        d = self.space.distances(pts, np.broadcast_to(center, pts.shape))
        return pts[d <= radius]


class EmptySet(SubsetSpec):
    description = "empty"

    def __init__(self, space: ModelSpace):
        self.space = space

    @property
    def is_empty(self) -> bool:
        return True

    def distance_to(self, x) -> float:
        return math.inf

    def nearest(self, q):
        return []

    def sample(self, rng, count):
        return np.empty((0,))

    def sample_near(self, rng, center, radius, count):
        return np.empty((0, len(np.asarray(center))))


class WholeSpace(SubsetSpec):
    description = "whole_space"

    def __init__(self, space: ModelSpace):
        self.space = space

    def distance_to(self, x) -> float:
        return 0.0

    def nearest(self, q):
        return [self.space.point(q)]

    def sample(self, rng, count):
        return self.space.random_points(rng, count)

    def sample_near(self, rng, center, radius, count):
        return self.space.random_near(rng, center, radius, count)

    def tangent(self, p):
        return DirectionSet.full(self.space.direction_space(p))

    def special_points(self):
        return self.space.special_points()


class FinitePoints(SubsetSpec):
    description = "points"

    def __init__(self, space: ModelSpace, points, description: str | None = None):
        self.space = space
        self.points = np.array([space.point(p) for p in points])
        if description:
            self.description = description

    @property
    def is_empty(self) -> bool:
        return len(self.points) == 0

    @property
    def finite_points(self):
        return self.points

    def _d(self, x):
        x = self.space.point(x)
        return self.space.distances(self.points, np.broadcast_to(x, self.points.shape))

    def distance_to(self, x) -> float:
        if self.is_empty:
            return math.inf
        return float(self._d(x).min())

    def nearest(self, q):
        if self.is_empty:
            return []
        d = self._d(q)
        return [self.points[i] for i in np.flatnonzero(d <= d.min() + TIE_TOL)]

    def sample(self, rng, count):
        return self.points[rng.integers(0, len(self.points), size=count)]

    def sample_near(self, rng, center, radius, count):
        return self._filter_near(self.points, center, radius)

    def tangent(self, p):
        return DirectionSet.empty(self.space.direction_space(p))

    def special_points(self):
        return list(self.points)

    def describe(self):
        return {"type": self.description, "points": self.points.tolist()}


# ---------------------------------------------------------------------------
# sphere subsets
# ---------------------------------------------------------------------------

def _directions_from_tangent_span(space: _LinearChart, p, W: np.ndarray) -> DirectionSet:
    """Direction set at p of the unit vectors in span(W) (rows, tangent at p)."""
    sigma = space.direction_space(p)
    if len(W) == 0:
        return DirectionSet.empty(sigma)
    if len(W) >= space.dim:
        return DirectionSet.full(sigma)
    F = space.frame(p)
    C = W @ F.T  # coordinates in the frame
    if len(W) == 1:
        w = C[0]
        return DirectionSet.finite(sigma, [_as_dir(space.dim, w), _as_dir(space.dim, -w)])
    # two-dimensional span inside a three-dimensional tangent space
    return DirectionSet(sigma, "great_circle", normal=np.cross(C[0], C[1]))


def _as_dir(n, c):
    if n == 1:
        return 0.0 if c[0] >= 0 else math.pi
    if n == 2:
        return float(np.mod(math.atan2(c[1], c[0]), TWO_PI))
    return c / np.linalg.norm(c)


class GreatSubsphere(SubsetSpec):
    """Intersection of a sphere with a linear subspace (rows of ``basis``)."""

    description = "great_subsphere"

    def __init__(self, space: Sphere, basis, description: str | None = None):
        self.space = space
        B = np.atleast_2d(np.asarray(basis, dtype=np.float64))
        _, s, vt = np.linalg.svd(B)
        self.basis = vt[: int(np.sum(s > 1e-12))]
        if len(self.basis) < 2:
            raise ValueError("use FinitePoints for zero-dimensional great subspheres")
        if description:
            self.description = description

    def _proj(self, x):
        return self.basis.T @ (self.basis @ x)

    def distance_to(self, x) -> float:
        x = self.space.point(x)
        pr = self._proj(x)
        return self.space.radius * math.atan2(np.linalg.norm(x - pr), np.linalg.norm(pr))

    def _circle_points(self, count):
        t = np.arange(count) * (TWO_PI / count)
        return np.cos(t)[:, None] * self.basis[0] + np.sin(t)[:, None] * self.basis[1]

    def nearest(self, q):
        x = self.space.point(q)
        pr = self._proj(x)
        n = np.linalg.norm(pr)
        if n < 1e-12:
            return list(self._circle_points(CONTINUUM_SAMPLE))
        return [pr / n]

    def sample(self, rng, count):
        c = rng.normal(size=(count, len(self.basis)))
        v = c @ self.basis
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    def _tangent_span(self, p):
        W = self.basis - np.outer(self.basis @ p, p)
        _, s, vt = np.linalg.svd(W)
        return vt[: int(np.sum(s > 1e-9))]

    def sample_near(self, rng, center, radius, count):
        c = self.nearest(center)[0]
        W = self._tangent_span(c)
        a = rng.normal(size=(count, len(W))) @ W
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        t = rng.uniform(0.0, 1.0, size=count) ** (1.0 / len(W)) * radius / self.space.radius
        pts = np.cos(t)[:, None] * c + np.sin(t)[:, None] * a
        return self._filter_near(pts, center, radius)

    def tangent(self, p):
        p = self.space.point(p)
        return _directions_from_tangent_span(self.space, p, self._tangent_span(p))

    def describe(self):
        return {"type": self.description, "basis": self.basis.tolist()}


class LatitudeCircle(SubsetSpec):
    """Points of sphere(2, R) at angle s0 from ``axis`` (a small circle unless s0 = pi/2)."""

    description = "latitude_circle"

    def __init__(self, space: Sphere, axis, s0: float, description: str | None = None):
        if space.dim != 2:
            raise ValueError("latitude circles live on the 2-sphere")
        self.space = space
        a = np.asarray(axis, dtype=np.float64)
        self.axis = a / np.linalg.norm(a)
        self.s0 = float(s0)
        e1 = np.array([1.0, 0.0, 0.0]) if abs(self.axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = e1 - (e1 @ self.axis) * self.axis
        self.e1 = e1 / np.linalg.norm(e1)
        self.e2 = np.cross(self.axis, self.e1)
        if description:
            self.description = description

    def _at(self, az):
        az = np.asarray(az, dtype=np.float64)
        u = np.cos(az)[..., None] * self.e1 + np.sin(az)[..., None] * self.e2
        return math.cos(self.s0) * self.axis + math.sin(self.s0) * u

    def _polar(self, x):
        x = np.asarray(x, dtype=np.float64)
        return math.atan2(np.linalg.norm(np.cross(self.axis, x)), x @ self.axis)

    def distance_to(self, x) -> float:
        return self.space.radius * abs(self._polar(self.space.point(x)) - self.s0)

    def nearest(self, q):
        x = self.space.point(q)
        u = x - (x @ self.axis) * self.axis
        n = np.linalg.norm(u)
        if n < 1e-12:
            return list(self._at(np.arange(CONTINUUM_SAMPLE) * (TWO_PI / CONTINUUM_SAMPLE)))
        return [math.cos(self.s0) * self.axis + math.sin(self.s0) * u / n]

    def sample(self, rng, count):
        return self._at(rng.uniform(0.0, TWO_PI, size=count))

    def sample_near(self, rng, center, radius, count):
        c = self.nearest(center)[0]
        az0 = math.atan2(c @ self.e2, c @ self.e1)
        sn = max(math.sin(self.s0), 1e-12)
        span = min(math.pi, 2.0 * math.asin(min(1.0, math.sin(0.5 * min(radius / self.space.radius, math.pi)) / sn)))
        pts = self._at(az0 + rng.uniform(-span, span, size=count))
        return self._filter_near(pts, center, radius)

    def tangent(self, p):
        p = self.space.point(p)
        t = np.cross(self.axis, p)
        return _directions_from_tangent_span(self.space, p, t[None, :] / np.linalg.norm(t))

    def describe(self):
        return {"type": self.description, "axis": self.axis.tolist(), "s0": self.s0}


# ---------------------------------------------------------------------------
# euclidean subsets
# ---------------------------------------------------------------------------

class AffineSubspace(SubsetSpec):
    description = "affine"

    def __init__(self, space: Euclidean, point, basis, description: str | None = None, extent: float = 2.0):
        self.space = space
        B = np.atleast_2d(np.asarray(basis, dtype=np.float64))
        _, s, vt = np.linalg.svd(B)
        self.basis = vt[: int(np.sum(s > 1e-12))]
        x0 = np.asarray(point, dtype=np.float64)
        self.origin = x0 - self.basis.T @ (self.basis @ x0)
        self.extent = extent
        if description:
            self.description = description

    def _proj(self, x):
        x = np.asarray(x, dtype=np.float64)
        return self.origin + self.basis.T @ (self.basis @ (x - self.origin))

    def distance_to(self, x) -> float:
        x = self.space.point(x)
        return float(np.linalg.norm(x - self._proj(x)))

    def nearest(self, q):
        return [self._proj(self.space.point(q))]

    def sample(self, rng, count):
        c = rng.uniform(-self.extent, self.extent, size=(count, len(self.basis)))
        return self.origin + c @ self.basis

    def sample_near(self, rng, center, radius, count):
        c = self._proj(center)
        m = len(self.basis)
        a = rng.normal(size=(count, m))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        t = radius * rng.uniform(0.0, 1.0, size=count) ** (1.0 / m)
        pts = c + (t[:, None] * a) @ self.basis
        return self._filter_near(pts, center, radius)

    def tangent(self, p):
        return _directions_from_tangent_span(self.space, p, self.basis)

    def describe(self):
        return {"type": self.description, "origin": self.origin.tolist(), "basis": self.basis.tolist()}


class Union(SubsetSpec):
    description = "union"

    def __init__(self, parts: list[SubsetSpec], description: str | None = None, special=()):
        self.parts = list(parts)
        self.space = self.parts[0].space
        self._special = [self.space.point(p) for p in special]
        if description:
            self.description = description

    def distance_to(self, x) -> float:
        return min(P.distance_to(x) for P in self.parts)

    def nearest(self, q):
        ds = [P.distance_to(q) for P in self.parts]
        m = min(ds)
        cand = []
        for P, d in zip(self.parts, ds):
            if d <= m + TIE_TOL:
                cand.extend(P.nearest(q))
        return _dedupe(self.space, cand)

    def sample(self, rng, count):
        idx = rng.integers(0, len(self.parts), size=count)
        out = [self.parts[i].sample(rng, int(np.sum(idx == i))) for i in range(len(self.parts))]
        pts = np.concatenate([o for o in out if len(o)])
        return pts[rng.permutation(len(pts))]

    def sample_near(self, rng, center, radius, count):
        per = max(1, count // len(self.parts))
        out = [P.sample_near(rng, center, radius, per) for P in self.parts]
        out = [o for o in out if len(o)]
        return np.concatenate(out) if out else np.empty((0, len(np.asarray(center))))

    def tangent(self, p):
        sigma = self.space.direction_space(p)
        pieces = [P.tangent(p) for P in self.parts if P.contains(p)]
        if any(t is None for t in pieces):
            return None
        if any(t.kind == "full" for t in pieces):
            return DirectionSet.full(sigma)
        if all(t.kind == "finite" for t in pieces):
            pts = [t.pts for t in pieces if len(t.pts)]
            if not pts:
                return DirectionSet.empty(sigma)
            return DirectionSet.finite(sigma, np.concatenate(pts))
        return None

    def special_points(self):
        out = list(self._special)
        for P in self.parts:
            out.extend(P.special_points())
        return _dedupe(self.space, out)

    def describe(self):
        return {"type": self.description, "parts": [P.describe() for P in self.parts]}


# ---------------------------------------------------------------------------
# cone and spindle subsets
# ---------------------------------------------------------------------------

class RaySet(SubsetSpec):
    """Union of rays phi = a_i of a cone, or of meridians phi = a_i of a
    spindle; always contains the apex (both poles)."""

    description = "rays"

    def __init__(self, space: _CircleCone, angles, description: str | None = None):
        self.space = space
        ang = np.mod(np.asarray(angles, dtype=np.float64).reshape(-1), space.angle)
        keep: list[float] = []
        for a in ang:
            if all(DirectionSpace("circle", space.angle).dist(a, b) > 1e-12 for b in keep):
                keep.append(float(a))
        self.angles = np.array(sorted(keep))
        self.rmax = math.pi if isinstance(space, Spindle) else getattr(space, "rmax", 2.0)
        if description:
            self.description = description

    def _sep(self, phi):
        ell = self.space.angle
        d = np.mod(np.abs(phi - self.angles), ell)
        return np.minimum(np.minimum(d, ell - d), math.pi)

    def _nearest_per_ray(self, q):
        q = self.space.point(q)
        rho, phi = q
        out = []
        for a, dl in zip(self.angles, self._sep(phi)):
            if isinstance(self.space, Cone):
                if dl >= 0.5 * math.pi:
                    out.append((rho, self.space.point([0.0, 0.0])))
                else:
                    out.append((rho * math.sin(dl), self.space.point([rho * math.cos(dl), a])))
            else:
                x = math.sin(rho) * math.cos(dl)
                z = math.cos(rho)
                if x >= 0.0 and (x > 0.0 or z != 0.0):
                    s = math.atan2(x, z)
                    d = math.asin(min(1.0, math.sin(rho) * math.sin(dl)))
                    out.append((d, self.space.point([s, a])))
                elif x < 0.0:
                    out.append((rho, self.space.point([0.0, 0.0])))
                    out.append((math.pi - rho, self.space.point([math.pi, 0.0])))
                else:
                    # equidistant (pi/2) from the whole meridian
                    for s in np.linspace(0.0, math.pi, CONTINUUM_SAMPLE):
                        out.append((0.5 * math.pi, self.space.point([s, a])))
        return out

    def distance_to(self, x) -> float:
        if len(self.angles) == 0:
            return min(self.space.distance(x, p) for p in self.special_points())
        return min(d for d, _ in self._nearest_per_ray(x))

    def nearest(self, q):
        if len(self.angles) == 0:
            return FinitePoints(self.space, self.special_points()).nearest(q)
        cand = self._nearest_per_ray(q)
        m = min(d for d, _ in cand)
        return _dedupe(self.space, [p for d, p in cand if d <= m + TIE_TOL])

    def _param_points(self, t, idx):
        if len(t) == 0:
            return np.empty((0, 2))
        return self.space.points(np.stack([np.asarray(t, dtype=np.float64), self.angles[idx]], axis=1))

    def sample(self, rng, count):
        idx = rng.integers(0, len(self.angles), size=count)
        if isinstance(self.space, Cone):
            t = rng.uniform(0.0, self.rmax, size=count)
        else:
            t = rng.uniform(0.0, math.pi, size=count)
        return self._param_points(t, idx)

    def sample_near(self, rng, center, radius, count):
        center = self.space.point(center)
        rho = center[0]
        per = max(1, count // max(1, len(self.angles)))
        hi = math.pi if isinstance(self.space, Spindle) else math.inf
        lo, top = max(0.0, rho - radius), min(hi, rho + radius)
        # stratified along each ray so both sides of the center are always hit
        u = (np.arange(per)[None, :] + rng.uniform(0.0, 1.0, size=(len(self.angles), per))) / per
        t = (lo + u * (top - lo)).ravel()
        idx = np.repeat(np.arange(len(self.angles)), per)
        return self._filter_near(self._param_points(t, idx), center, radius)

    def tangent(self, p):
        p = self.space.point(p)
        sigma = self.space.direction_space(p)
        if self.space.is_singular(p):
            return DirectionSet.finite(sigma, self.angles)
        return DirectionSet.finite(sigma, [0.0, math.pi])

    def special_points(self):
        return self.space.special_points()

    def describe(self):
        return {"type": self.description, "angles": self.angles.tolist()}


class SpindleLatitude(SubsetSpec):
    """The circle s = s0 of a spindle (the equator Y when s0 = pi/2)."""

    description = "latitude"

    def __init__(self, space: Spindle, s0: float = 0.5 * math.pi, description: str | None = None):
        self.space = space
        self.s0 = float(s0)
        if description:
            self.description = description

    def distance_to(self, x) -> float:
        return abs(float(self.space.point(x)[0]) - self.s0)

    def nearest(self, q):
        q = self.space.point(q)
        if self.space.is_singular(q):
            L = self.space.length
            return [self.space.point([self.s0, a]) for a in np.arange(CONTINUUM_SAMPLE) * (L / CONTINUUM_SAMPLE)]
        return [self.space.point([self.s0, q[1]])]

    def sample(self, rng, count):
        phi = rng.uniform(0.0, self.space.length, size=count)
        return np.array([self.space.point([self.s0, f]) for f in phi])

    def sample_near(self, rng, center, radius, count):
        c = self.nearest(center)[0]
        span = min(0.5 * self.space.length, radius / max(math.sin(self.s0), 1e-12))
        phi = c[1] + rng.uniform(-span, span, size=count)
        pts = np.array([self.space.point([self.s0, f]) for f in phi])
        return self._filter_near(pts, center, radius)

    def tangent(self, p):
        sigma = self.space.direction_space(p)
        return DirectionSet.finite(sigma, [0.5 * math.pi, 1.5 * math.pi])

    def describe(self):
        return {"type": self.description, "s0": self.s0}


class TiltedGreatCircle(SubsetSpec):
    """Great circle of spindle(2pi), seen as the round sphere, with ambient unit normal."""

    description = "tilted_great_circle"

    def __init__(self, space: Spindle, normal, description: str | None = None):
        if space.length < TWO_PI - 1e-12:
            raise ValueError("tilted great circles need spindle(2pi)")
        self.space = space
        n = np.asarray(normal, dtype=np.float64)
        self.normal = n / np.linalg.norm(n)
        self.inner = GreatSubsphere(Sphere(2), _null_space(self.normal[None, :]))
        if description:
            self.description = description

    def distance_to(self, x) -> float:
        return self.inner.distance_to(self.space.ambient(self.space.point(x)))

    def nearest(self, q):
        return [self.space.from_ambient(v) for v in self.inner.nearest(self.space.ambient(self.space.point(q)))]

    def sample(self, rng, count):
        return np.array([self.space.from_ambient(v) for v in self.inner.sample(rng, count)])

    def sample_near(self, rng, center, radius, count):
        c = self.space.ambient(self.space.point(center))
        pts = np.array([self.space.from_ambient(v) for v in self.inner.sample_near(rng, c, radius, count)])
        return self._filter_near(pts, center, radius) if len(pts) else pts

    def tangent(self, p):
        p = self.space.point(p)
        x = self.space.ambient(p)
        t = np.cross(self.normal, x)
        dirs = []
        for v in (t, -t):
            if self.space.is_singular(p):
                dirs.append(math.atan2(v[1], v[0]))
            else:
                s, f = p
                es = np.array([math.cos(s) * math.cos(f), math.cos(s) * math.sin(f), -math.sin(s)])
                ef = np.array([-math.sin(f), math.cos(f), 0.0])
                dirs.append(math.atan2(v @ ef, v @ es))
        return DirectionSet.finite(self.space.direction_space(p), np.mod(dirs, TWO_PI))

    def describe(self):
        return {"type": self.description, "normal": self.normal.tolist()}


# ---------------------------------------------------------------------------
# fixed point sets
# ---------------------------------------------------------------------------

def _fixed_carrier(space: ModelSpace, gamma: Isometry) -> SubsetSpec:
    tag = f"fixed({gamma.name})"
    if isinstance(space, Sphere):
        V = _null_space(gamma.A - np.eye(space.dim + 1))
        if len(V) == 0:
            return EmptySet(space)
        if len(V) == 1:
            return FinitePoints(space, [V[0], -V[0]], tag)
        if len(V) == space.dim + 1:
            return WholeSpace(space)
        return GreatSubsphere(space, V, tag)
    if isinstance(space, Euclidean):
        M = gamma.A - np.eye(space.dim)
        b = gamma.b if gamma.b is not None else np.zeros(space.dim)
        x0, *_ = np.linalg.lstsq(M, -b, rcond=None)
        if np.linalg.norm(M @ x0 + b) > 1e-9:
            return EmptySet(space)
        N = _null_space(M)
        if len(N) == 0:
            return FinitePoints(space, [x0], tag)
        if len(N) == space.dim:
            return WholeSpace(space)
        return AffineSubspace(space, x0, N, tag)
    if isinstance(space, _CircleCone):
        ell = space.angle
        sh = float(np.mod(gamma.shift, ell))
        trivial_shift = min(sh, ell - sh) <= 1e-12
        if not gamma.swap:
            if gamma.sign > 0:
                if trivial_shift:
                    return WholeSpace(space)
                return FinitePoints(space, space.special_points(), tag)
            return RaySet(space, [0.5 * sh, 0.5 * sh + 0.5 * ell], tag)
        if gamma.sign > 0:
            if trivial_shift:
                return SpindleLatitude(space, 0.5 * math.pi, tag)
            return EmptySet(space)
        return FinitePoints(space, [[0.5 * math.pi, 0.5 * sh], [0.5 * math.pi, 0.5 * sh + 0.5 * ell]], tag)
    raise TypeError(f"unsupported space {space!r}")


def induced_direction_map(space: ModelSpace, gamma: Isometry, p):
    """The isometry of Sigma_p induced by gamma at a fixed point p."""
    p = space.point(p)

    def dmap(eta):
        t = min(1e-2, 0.5 * space.injectivity_bound(p, eta))
        x = gamma.apply(space.exp_step(p, eta, t))
        ds = space.directions_to(p, x)
        return ds.pts[0]

    return dmap


def induced_fixed_directions(space: ModelSpace, gamma: Isometry, p) -> DirectionSet:
    """Fixed set of the induced direction isometry (exact case analysis)."""
    sigma = space.direction_space(p)
    g = induced_direction_map(space, gamma, p)
    if sigma.kind == "pair":
        fixed = [d for d in (0.0, math.pi) if sigma.dist(g(d), d) < 1e-6]
        return DirectionSet.finite(sigma, fixed)
    if sigma.kind == "circle":
        ell = sigma.length
        a = float(g(0.0))
        b = float(g(0.25 * ell))
        step = float(np.mod(b - a + 0.5 * ell, ell) - 0.5 * ell)
        if step > 0:  # rotation by a
            if sigma.dist(a, 0.0) < 1e-6:
                return DirectionSet.full(sigma)
            return DirectionSet.empty(sigma)
        return DirectionSet.finite(sigma, np.mod([0.5 * a, 0.5 * a + 0.5 * ell], ell))
    M = np.stack([g(e) for e in np.eye(3)], axis=1)
    V = _null_space(M - np.eye(3), tol=1e-6)
    if len(V) == 0:
        return DirectionSet.empty(sigma)
    if len(V) == 1:
        return DirectionSet.finite(sigma, [V[0], -V[0]])
    if len(V) == 2:
        return DirectionSet(sigma, "great_circle", normal=np.cross(V[0], V[1]))
    return DirectionSet.full(sigma)


class FixedPointSet(SubsetSpec):
    """Fixed point set of an isometry; tangent cones are the fixed sets of
    the induced direction isometries."""

    def __init__(self, space: ModelSpace, gamma: Isometry):
        self.space = space
        self.gamma = gamma
        self.carrier = _fixed_carrier(space, gamma)
        self.description = f"fixed({gamma.name})"

    @property
    def is_empty(self):
        return self.carrier.is_empty

    @property
    def finite_points(self):
        return self.carrier.finite_points

    def distance_to(self, x):
        return self.carrier.distance_to(x)

    def contains(self, x, tol: float = MEMBER_TOL) -> bool:
        return self.carrier.contains(x, tol)

    def is_fixed(self, x, tol: float = 1e-9) -> bool:
        return self.space.distance(self.gamma.apply(x), x) <= tol

    def nearest(self, q):
        return self.carrier.nearest(q)

    def sample(self, rng, count):
        return self.carrier.sample(rng, count)

    def sample_near(self, rng, center, radius, count):
        return self.carrier.sample_near(rng, center, radius, count)

    def tangent(self, p):
        return induced_fixed_directions(self.space, self.gamma, p)

    def special_points(self):
        return self.carrier.special_points()

    def describe(self):
        return {"type": "fixed_point_set", "isometry": self.gamma.describe(),
                "carrier": self.carrier.describe()}


def fixed_point_set(space: ModelSpace, gamma: Isometry) -> FixedPointSet:
    return FixedPointSet(space, gamma)


# ---------------------------------------------------------------------------
# intersections
# ---------------------------------------------------------------------------

class OracleIntersection(SubsetSpec):
    """F and G by membership conjunction, represented through a dense
    sample of F filtered by G; tangent cones are left to estimation."""

    def __init__(self, F: SubsetSpec, G: SubsetSpec, count: int = 20000, tol: float = 1e-6):
        self.space = F.space
        self.F, self.G = F, G
        rng = np.random.default_rng(20240917)
        pts = list(F.sample(rng, count)) + F.special_points()
        keep = [p for p in pts if G.distance_to(p) <= tol]
        self.cloud = FinitePoints(self.space, _dedupe(self.space, keep, 1e-6))
        self.description = f"({F.description})&({G.description})"

    @property
    def is_empty(self):
        return self.cloud.is_empty

    def distance_to(self, x):
        return max(self.F.distance_to(x), self.G.distance_to(x), 0.0) if not self.is_empty else math.inf

    def contains(self, x, tol: float = MEMBER_TOL):
        return self.F.contains(x, tol) and self.G.contains(x, tol)

    def nearest(self, q):
        return self.cloud.nearest(q)

    def sample(self, rng, count):
        return self.cloud.sample(rng, count)

    def sample_near(self, rng, center, radius, count):
        near = self.F.sample_near(rng, center, radius, 4 * count)
        keep = [p for p in near if self.G.distance_to(p) <= 1e-9]
        return np.array(keep) if keep else np.empty((0, len(np.asarray(center))))

    def special_points(self):
        return [p for p in self.F.special_points() if self.G.contains(p)]

    def describe(self):
        return {"type": "oracle_intersection", "parts": [self.F.describe(), self.G.describe()]}


def _unwrap(F):
    return F.carrier if isinstance(F, FixedPointSet) else F


def intersect(F: SubsetSpec, G: SubsetSpec) -> SubsetSpec:
    """F intersected with G, analytic when both are of a recognised type."""
    space = F.space
    A, B = _unwrap(F), _unwrap(G)
    if A.is_empty or B.is_empty:
        return EmptySet(space)
    if isinstance(A, WholeSpace):
        return G
    if isinstance(B, WholeSpace):
        return F
    if F is G or A.describe() == B.describe():
        return F
    for X, Y in ((A, B), (B, A)):
        if isinstance(X, FinitePoints):
            pts = [p for p in X.points if Y.contains(p)]
            return FinitePoints(space, pts, "points") if pts else EmptySet(space)
    if isinstance(A, GreatSubsphere) and isinstance(B, GreatSubsphere):
        P = np.eye(space.dim + 1)
        V = _null_space(np.vstack([P - A.basis.T @ A.basis, P - B.basis.T @ B.basis]))
        if len(V) == 0:
            return EmptySet(space)
        if len(V) == 1:
            return FinitePoints(space, [V[0], -V[0]], "points")
        return GreatSubsphere(space, V)
    if isinstance(A, AffineSubspace) and isinstance(B, AffineSubspace):
        n = space.dim
        M = np.hstack([A.basis.T, -B.basis.T])
        c, *_ = np.linalg.lstsq(M, B.origin - A.origin, rcond=None)
        if np.linalg.norm(M @ c - (B.origin - A.origin)) > 1e-9:
            return EmptySet(space)
        x0 = A.origin + A.basis.T @ c[: len(A.basis)]
        V = _null_space(np.vstack([np.eye(n) - A.basis.T @ A.basis, np.eye(n) - B.basis.T @ B.basis]))
        if len(V) == 0:
            return FinitePoints(space, [x0], "points")
        return AffineSubspace(space, x0, V)
    if isinstance(A, RaySet) and isinstance(B, RaySet):
        sig = DirectionSpace("circle", space.angle)
        common = [a for a in A.angles if np.min(sig.dist(a, B.angles)) <= 1e-12]
        if common:
            return RaySet(space, common)
        return FinitePoints(space, space.special_points(), "points")
    for X, Y in ((A, B), (B, A)):
        if isinstance(X, RaySet) and isinstance(Y, SpindleLatitude):
            return FinitePoints(space, [[Y.s0, a] for a in X.angles], "points")
    return OracleIntersection(F, G)
