"""Analytic Alexandrov spaces with closed-form distances and geodesics.

Point charts:

* ``Sphere(n, R)``: unit vectors of R^(n+1); distances are scaled by R.
* ``Euclidean(n)``: plain vectors.
* ``Cone(theta)``: ``[r, phi]`` with r >= 0, phi in [0, theta).
* ``Spindle(L)``: ``[s, phi]`` with s in [0, pi], phi in [0, L); the poles
  s = 0 and s = pi are z1 and z2.

Directions at a smooth point of a surface are angles; on the cone and the
spindle the angle psi is measured from the outward radial direction (growing
r or s) toward growing phi.  At the apex and the poles the direction is the
intrinsic coordinate phi of the circle of directions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .directions import TWO_PI, DirectionSet, DirectionSpace

ANTIPODAL_TOL = 1e-9
TIE_TOL = 1e-9
STEP_SLACK = 1e-9


_FRAME_CACHE: dict = {}


class StepTooLarge(ValueError):
    """exp_step asked to go past the minimality bound of its geodesic."""


class SamePoint(ValueError):
    pass


class ModelSpace:
    kind: str = ""
    k: float = 0.0
    dim: int = 2

    # --- points -----------------------------------------------------------
    def point(self, p) -> np.ndarray:
        return np.asarray(p, dtype=np.float64).copy()

    def same_point(self, p, q, tol: float = 1e-12) -> bool:
        return self.distance(p, q) <= tol

    def special_points(self) -> list[np.ndarray]:
        return []

    def is_singular(self, p) -> bool:
        return False

    # --- metric -----------------------------------------------------------
    def distance(self, p, q) -> float:
        return float(self.distances(np.asarray(p)[None], np.asarray(q)[None])[0])

    def distances(self, P, Q) -> np.ndarray:
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        return math.inf

    # --- directions -------------------------------------------------------
    def direction_space(self, p) -> DirectionSpace:
        raise NotImplementedError

    def directions_to(self, p, q) -> DirectionSet:
        raise NotImplementedError

    def injectivity_bound(self, p, eta) -> float:
        raise NotImplementedError

    def _exp(self, p, eta, h):
        raise NotImplementedError

    def exp_step(self, p, eta, h: float) -> np.ndarray:
        if h < 0:
            raise ValueError(f"negative step {h}")
        bound = self.injectivity_bound(p, eta)
        if h > bound * (1.0 + STEP_SLACK) + 1e-12:
            raise StepTooLarge(f"step {h} exceeds minimality bound {bound}")
        if h == 0:
            return self.point(p)
        return self._exp(self.point(p), eta, min(h, bound))

    def minimal_geodesics(self, p, q) -> "GeodesicFamily":
        d = self.distance(p, q)
        if d <= 0.0:
            raise SamePoint("minimal geodesics need two distinct points")
        return GeodesicFamily(self, self.point(p), self.point(q), d, self.directions_to(p, q))

    # --- sampling ---------------------------------------------------------
    def random_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        raise NotImplementedError

    def random_near(self, rng: np.random.Generator, center, radius: float, count: int) -> np.ndarray:
        """Points at distance <= radius from center (radius clipped per direction)."""
        sigma = self.direction_space(center)
        dirs = sigma.random(rng, count)
        rad = radius * rng.uniform(0.0, 1.0, size=count) ** (1.0 / max(self.dim, 1))
        out = []
        for d, t in zip(dirs, rad):
            b = self.injectivity_bound(center, d)
            out.append(self.exp_step(center, d, min(t, 0.999 * b)))
        return np.array(out)

    def describe(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# spaces with a linear chart
# ---------------------------------------------------------------------------

def _dir_from_vec(n: int, coeffs: np.ndarray):
    if n == 1:
        return 0.0 if coeffs[0] >= 0 else math.pi
    if n == 2:
        return float(np.mod(math.atan2(coeffs[1], coeffs[0]), TWO_PI))
    return coeffs / np.linalg.norm(coeffs)


def _vec_from_dir(n: int, eta) -> np.ndarray:
    if n == 1:
        e = float(np.asarray(eta).ravel()[0])
        return np.array([1.0 if math.cos(e) >= 0 else -1.0])
    if n == 2:
        e = float(np.asarray(eta).ravel()[0])
        return np.array([math.cos(e), math.sin(e)])
    v = np.asarray(eta, dtype=np.float64)
    return v / np.linalg.norm(v)


class _LinearChart(ModelSpace):
    def _sigma(self) -> DirectionSpace:
        if self.dim == 1:
            return DirectionSpace("pair")
        if self.dim == 2:
            return DirectionSpace("circle", TWO_PI)
        return DirectionSpace("sphere")

    def direction_space(self, p) -> DirectionSpace:
        return self._sigma()

    def frame(self, p) -> np.ndarray:
        raise NotImplementedError

    def tangent_vector(self, p, eta) -> np.ndarray:
        """Unit ambient vector for the direction eta at p."""
        return _vec_from_dir(self.dim, eta) @ self.frame(p)

    def direction_of(self, p, v) -> object:
        """Direction at p of the ambient tangent vector v (nonzero)."""
        return _dir_from_vec(self.dim, self.frame(p) @ np.asarray(v, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class Sphere(_LinearChart):
    dim: int = 2
    radius: float = 1.0
    kind: str = field(default="sphere", init=False)

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("sphere dimension must be 1, 2 or 3")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def k(self) -> float:
        return 1.0 / self.radius ** 2

    @property
    def diameter(self) -> float:
        return math.pi * self.radius

    def point(self, p) -> np.ndarray:
        v = np.asarray(p, dtype=np.float64).reshape(-1)
        if v.shape[0] != self.dim + 1:
            raise ValueError(f"sphere({self.dim}) points have {self.dim + 1} coordinates")
        return v / math.sqrt(float(v @ v))

    def frame(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        key = p.tobytes()
        hit = _FRAME_CACHE.get((self.dim, key))
        if hit is not None:
            return hit
        H = self._householder(p)
        H.flags.writeable = False
        if len(_FRAME_CACHE) > 64:
            _FRAME_CACHE.clear()
        _FRAME_CACHE[(self.dim, key)] = H
        return H

    def _householder(self, p) -> np.ndarray:
        m = self.dim + 1
        e = np.zeros(m)
        e[-1] = 1.0
        v = p + (1.0 if p[-1] >= 0 else -1.0) * e
        H = np.eye(m) - 2.0 * np.outer(v, v) / (v @ v)
        return H[:, :self.dim].T.copy()

    def distances(self, P, Q) -> np.ndarray:
        return self.radius * _kernels.sphere_dist(P, Q)

    def distance(self, p, q) -> float:
        return self.radius * _kernels.sphere_dist1(np.asarray(p, dtype=np.float64), np.asarray(q, dtype=np.float64))

    def angular(self, p, q) -> float:
        return _kernels.sphere_dist1(np.asarray(p, dtype=np.float64), np.asarray(q, dtype=np.float64))

    def directions_to(self, p, q) -> DirectionSet:
        p = np.asarray(p, dtype=np.float64)
        q = np.asarray(q, dtype=np.float64)
        sigma = self._sigma()
        a = self.angular(p, q)
        if a <= 0.0:
            raise SamePoint("no direction from a point to itself")
        if a >= math.pi - ANTIPODAL_TOL:
            return DirectionSet.full(sigma)
        w = q - p
        v = w - (w @ p) * p
        return DirectionSet.finite(sigma, [self.direction_of(p, v)])

    def injectivity_bound(self, p, eta) -> float:
        return math.pi * self.radius

    def _exp(self, p, eta, h):
        u = self.tangent_vector(p, eta)
        a = h / self.radius
        x = math.cos(a) * p + math.sin(a) * u
        return x / math.sqrt(float(x @ x))

    def random_points(self, rng, count):
        v = rng.normal(size=(count, self.dim + 1))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    def describe(self) -> dict:
        return {"kind": "sphere", "dim": self.dim, "radius": self.radius}


@dataclass(frozen=True, eq=False)
class Euclidean(_LinearChart):
    dim: int = 2
    box: float = 2.0
    kind: str = field(default="euclidean", init=False)

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("euclidean dimension must be 1, 2 or 3")

    @property
    def k(self) -> float:
        return 0.0

    def point(self, p) -> np.ndarray:
        v = np.asarray(p, dtype=np.float64).reshape(-1).copy()
        if v.shape[0] != self.dim:
            raise ValueError(f"euclidean({self.dim}) points have {self.dim} coordinates")
        return v

    def frame(self, p) -> np.ndarray:
        return np.eye(self.dim)

    def distances(self, P, Q) -> np.ndarray:
        return np.linalg.norm(np.asarray(P, dtype=np.float64) - np.asarray(Q, dtype=np.float64), axis=-1)

    def distance(self, p, q) -> float:
        d = np.asarray(p, dtype=np.float64) - np.asarray(q, dtype=np.float64)
        return math.sqrt(float(d @ d))

    def directions_to(self, p, q) -> DirectionSet:
        w = np.asarray(q, dtype=np.float64) - np.asarray(p, dtype=np.float64)
        if not np.any(w):
            raise SamePoint("no direction from a point to itself")
        return DirectionSet.finite(self._sigma(), [self.direction_of(p, w)])

    def injectivity_bound(self, p, eta) -> float:
        return math.inf

    def _exp(self, p, eta, h):
        return p + h * self.tangent_vector(p, eta)

    def random_points(self, rng, count):
        return rng.uniform(-self.box, self.box, size=(count, self.dim))

    def describe(self) -> dict:
        return {"kind": "euclidean", "dim": self.dim}


# ---------------------------------------------------------------------------
# cones over a circle: Euclidean cone (kc = 0) and spherical suspension (kc = 1)
# ---------------------------------------------------------------------------

class _CircleCone(ModelSpace):
    kc: float = 0.0
    dim = 2

    @property
    def angle(self) -> float:
        raise NotImplementedError

    @property
    def _full_turn(self) -> bool:
        return self.angle >= TWO_PI - 1e-12

    def point(self, p) -> np.ndarray:
        if isinstance(p, np.ndarray) and p.shape == (2,):
            rho, phi = float(p[0]), float(p[1])
        else:
            rho, phi = (float(x) for x in np.asarray(p, dtype=np.float64).reshape(-1)[:2])
        if rho <= 0.0:
            return np.array([0.0, 0.0])
        if self.kc > 0 and rho >= math.pi:
            return np.array([math.pi, 0.0])
        phi = math.fmod(phi, self.angle)
        if phi < 0:
            phi += self.angle
        if phi >= self.angle:
            phi = 0.0
        return np.array([rho, phi])

    def points(self, P) -> np.ndarray:
        """Vectorised ``point`` for an (n, 2) array."""
        P = np.array(P, dtype=np.float64).reshape(-1, 2)
        rho, phi = P[:, 0], np.mod(P[:, 1], self.angle)
        phi[phi >= self.angle] = 0.0
        apex = rho <= 0.0
        far = (rho >= math.pi) if self.kc > 0 else np.zeros_like(apex)
        rho[apex] = 0.0
        rho[far] = math.pi
        phi[apex | far] = 0.0
        return np.stack([rho, phi], axis=1)

    def is_singular(self, p) -> bool:
        rho = float(p[0])
        return rho == 0.0 or (self.kc > 0 and rho == math.pi)

    def distances(self, P, Q) -> np.ndarray:
        P = np.asarray(P, dtype=np.float64)
        Q = np.asarray(Q, dtype=np.float64)
        return _kernels.circle_cone_dist(self.kc, self.angle, P[..., 0], P[..., 1], Q[..., 0], Q[..., 1])

    def distance(self, p, q) -> float:
        return _kernels.circle_cone_dist1(self.kc, self.angle, float(p[0]), float(p[1]), float(q[0]), float(q[1]))

    def direction_space(self, p) -> DirectionSpace:
        if self.is_singular(p):
            return DirectionSpace("circle", self.angle)
        return DirectionSpace("circle", TWO_PI)

    def signed_sep(self, phi_from: float, phi_to: float) -> float:
        ell = self.angle
        return float(np.mod(phi_to - phi_from + 0.5 * ell, ell) - 0.5 * ell)

    # development of a neighbourhood of the meridian through p
    def _develop(self, p, q, delta):
        raise NotImplementedError

    def _dev_direction(self, p, q, delta) -> float:
        raise NotImplementedError

    def directions_to(self, p, q) -> DirectionSet:
        p = self.point(p)
        q = self.point(q)
        d = self.distance(p, q)
        if d <= 0.0:
            raise SamePoint("no direction from a point to itself")
        sigma = self.direction_space(p)
        if self.kc > 0 and d >= math.pi - ANTIPODAL_TOL:
            return DirectionSet.full(sigma)
        if self.is_singular(p):
            return DirectionSet.finite(sigma, [q[1]])
        if self.is_singular(q):
            inward = q[0] < p[0]
            return DirectionSet.finite(sigma, [math.pi if inward else 0.0])
        delta = self.signed_sep(p[1], q[1])
        if not self._full_turn and abs(abs(delta) - 0.5 * self.angle) <= TIE_TOL:
            h = 0.5 * self.angle
            dirs = [self._dev_direction(p, q, h), self._dev_direction(p, q, -h)]
            return DirectionSet.finite(sigma, np.mod(dirs, TWO_PI))
        return DirectionSet.finite(sigma, [float(np.mod(self._dev_direction(p, q, delta), TWO_PI))])

    def _mirror(self, eta) -> tuple[float, float]:
        """(|psi|, sign) with psi taken in (-pi, pi]."""
        psi = float(np.mod(float(eta) + math.pi, TWO_PI) - math.pi)
        return abs(psi), (1.0 if psi >= 0 else -1.0)


@dataclass(frozen=True, eq=False)
class Cone(_CircleCone):
    theta: float = math.pi
    rmax: float = 2.0
    kind: str = field(default="cone", init=False)

    def __post_init__(self):
        if not 0.0 < self.theta <= TWO_PI + 1e-12:
            raise ValueError("cone angle must lie in (0, 2pi]")

    @property
    def kc(self) -> float:
        return 0.0

    @property
    def k(self) -> float:
        return 0.0

    @property
    def angle(self) -> float:
        return self.theta

    def apex(self) -> np.ndarray:
        return np.array([0.0, 0.0])

    def special_points(self):
        return [self.apex()]

    def _dev_direction(self, p, q, delta):
        P = np.array([p[0], 0.0])
        Q = q[0] * np.array([math.cos(delta), math.sin(delta)])
        w = Q - P
        return math.atan2(w[1], w[0])

    def injectivity_bound(self, p, eta) -> float:
        if self.is_singular(p):
            return math.inf
        if self._full_turn:
            return math.inf
        a, _ = self._mirror(eta)
        beta = 0.5 * self.theta
        if a <= beta:
            return math.inf
        return float(p[0]) * math.sin(beta) / math.sin(a - beta)

    def _exp(self, p, eta, h):
        if self.is_singular(p):
            return self.point([h, float(eta)])
        psi = float(np.mod(float(eta), TWO_PI))
        if psi == 0.0:
            return self.point([p[0] + h, p[1]])
        if psi == math.pi:
            return self.point([p[0] - h, p[1]])
        X = np.array([p[0] + h * math.cos(psi), h * math.sin(psi)])
        return self.point([math.hypot(X[0], X[1]), p[1] + math.atan2(X[1], X[0])])

    def random_points(self, rng, count):
        r = self.rmax * np.sqrt(rng.uniform(size=count))
        phi = rng.uniform(0.0, self.theta, size=count)
        return np.array([self.point(x) for x in np.stack([r, phi], axis=1)])

    def describe(self) -> dict:
        return {"kind": "cone", "theta": self.theta}


@dataclass(frozen=True, eq=False)
class Spindle(_CircleCone):
    length: float = math.pi
    kind: str = field(default="spindle", init=False)

    def __post_init__(self):
        if not 0.0 < self.length <= TWO_PI + 1e-12:
            raise ValueError("spindle equator length must lie in (0, 2pi]")

    @property
    def kc(self) -> float:
        return 1.0

    @property
    def k(self) -> float:
        return 1.0

    @property
    def angle(self) -> float:
        return self.length

    @property
    def diameter(self) -> float:
        return math.pi

    def z1(self) -> np.ndarray:
        return np.array([0.0, 0.0])

    def z2(self) -> np.ndarray:
        return np.array([math.pi, 0.0])

    def special_points(self):
        return [self.z1(), self.z2()]

    @staticmethod
    def _frame(s):
        P = np.array([math.sin(s), 0.0, math.cos(s)])
        es = np.array([math.cos(s), 0.0, -math.sin(s)])
        ef = np.array([0.0, 1.0, 0.0])
        return P, es, ef

    def _dev_direction(self, p, q, delta):
        P, es, ef = self._frame(p[0])
        Q = np.array([math.sin(q[0]) * math.cos(delta), math.sin(q[0]) * math.sin(delta), math.cos(q[0])])
        w = Q - P
        return math.atan2(w @ ef, w @ es)

    def injectivity_bound(self, p, eta) -> float:
        if self.is_singular(p) or self._full_turn:
            return math.pi
        a, _ = self._mirror(eta)
        s = float(p[0])
        if a == 0.0:
            return math.pi - s
        if a == math.pi:
            return s
        beta = 0.5 * self.length
        t = math.atan2(math.sin(beta) * math.sin(s),
                       math.cos(beta) * math.sin(a) - math.sin(beta) * math.cos(a) * math.cos(s))
        return min(t, math.pi)

    def _exp(self, p, eta, h):
        if p[0] == 0.0:
            return self.point([h, float(eta)])
        if p[0] == math.pi:
            return self.point([math.pi - h, float(eta)])
        psi = float(np.mod(float(eta), TWO_PI))
        if psi == 0.0:
            return self.point([min(p[0] + h, math.pi), p[1]])
        if psi == math.pi:
            return self.point([max(p[0] - h, 0.0), p[1]])
        P, es, ef = self._frame(p[0])
        X = math.cos(h) * P + math.sin(h) * (math.cos(psi) * es + math.sin(psi) * ef)
        s = math.atan2(math.hypot(X[0], X[1]), X[2])
        return self.point([s, p[1] + math.atan2(X[1], X[0])])

    def random_points(self, rng, count):
        s = np.arccos(1.0 - 2.0 * rng.uniform(size=count))
        phi = rng.uniform(0.0, self.length, size=count)
        return np.array([self.point(x) for x in np.stack([s, phi], axis=1)])

    def ambient(self, p) -> np.ndarray:
        """Embedding of spindle(2pi) as the round unit sphere."""
        s, phi = float(p[0]), float(p[1])
        return np.array([math.sin(s) * math.cos(phi), math.sin(s) * math.sin(phi), math.cos(s)])

    def from_ambient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        x = x / np.linalg.norm(x)
        return self.point([math.atan2(math.hypot(x[0], x[1]), x[2]), math.atan2(x[1], x[0])])

    def describe(self) -> dict:
        return {"kind": "spindle", "length": self.length}


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeodesicSegment:
    space: ModelSpace
    start: np.ndarray
    end: np.ndarray
    initial_direction: object
    length: float

    def point_at(self, t: float) -> np.ndarray:
        if t >= self.length:
            return self.end.copy()
        return self.space.exp_step(self.start, self.initial_direction, max(t, 0.0))

    def sample(self, count: int) -> np.ndarray:
        return np.array([self.point_at(t) for t in np.linspace(0.0, self.length, count)])


@dataclass(frozen=True, eq=False)
class GeodesicFamily:
    """All minimal geodesics from start to end, via their initial directions."""

    space: ModelSpace
    start: np.ndarray
    end: np.ndarray
    length: float
    directions: DirectionSet

    @property
    def is_continuum(self) -> bool:
        return not self.directions.is_finite

    def segments(self, max_count: int = 8) -> list[GeodesicSegment]:
        if self.directions.is_finite:
            dirs = list(self.directions.pts)
        else:
            pts = self.directions.discretize(TWO_PI / max_count)
            dirs = list(pts[:: max(1, len(pts) // max_count)][:max_count])
        return [GeodesicSegment(self.space, self.start, self.end, d, self.length) for d in dirs]

    def __len__(self):
        return len(self.directions) if self.directions.is_finite else math.inf


# ---------------------------------------------------------------------------
# isometries
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Isometry:
    """Isometry of a zoo space.

    sphere/euclidean: x -> A x + b.  cone/spindle: phi -> sign*phi + shift,
    and for the spindle optionally s -> pi - s (``swap``).
    """

    space: ModelSpace
    name: str
    A: np.ndarray | None = None
    b: np.ndarray | None = None
    sign: float = 1.0
    shift: float = 0.0
    swap: bool = False

    def apply(self, p) -> np.ndarray:
        sp = self.space
        p = sp.point(p)
        if isinstance(sp, _LinearChart):
            x = self.A @ p
            if self.b is not None:
                x = x + self.b
            return sp.point(x)
        rho = p[0]
        if self.swap:
            rho = math.pi - rho
        return sp.point([rho, self.sign * p[1] + self.shift])

    def describe(self) -> dict:
        out: dict = {"name": self.name}
        if self.A is not None:
            out["A"] = np.asarray(self.A).tolist()
            if self.b is not None:
                out["b"] = np.asarray(self.b).tolist()
        else:
            out.update(sign=self.sign, shift=self.shift, swap=self.swap)
        return out


def reflection_matrix(normal) -> np.ndarray:
    n = np.asarray(normal, dtype=np.float64)
    n = n / np.linalg.norm(n)
    return np.eye(len(n)) - 2.0 * np.outer(n, n)


def rotation_matrix_z(angle: float, dim: int = 3) -> np.ndarray:
    R = np.eye(dim)
    c, s = math.cos(angle), math.sin(angle)
    R[0, 0], R[0, 1], R[1, 0], R[1, 1] = c, -s, s, c
    return R


def builtin_isometries(space: ModelSpace) -> list[Isometry]:
    """Three isometries per zoo kind (used by the fixed-point experiments)."""
    if isinstance(space, Sphere):
        m = space.dim + 1
        normal = np.zeros(m)
        normal[1] = 1.0
        return [
            Isometry(space, "reflection", A=reflection_matrix(normal)),
            Isometry(space, "rotation", A=rotation_matrix_z(TWO_PI / 3, m)),
            Isometry(space, "antipodal", A=-np.eye(m)),
        ]
    if isinstance(space, Euclidean):
        n = space.dim
        if n == 1:
            return [Isometry(space, "reflection", A=-np.eye(1), b=np.array([1.0])),
                    Isometry(space, "translation", A=np.eye(1), b=np.array([0.5])),
                    Isometry(space, "identity", A=np.eye(1), b=np.zeros(1))]
        c = np.zeros(n)
        c[0], c[1] = 1.0, 0.5
        R = rotation_matrix_z(TWO_PI / 3, n)
        ref = reflection_matrix(np.eye(n)[1])
        shift = np.zeros(n)
        shift[1] = 0.5
        return [
            # reflection across the line y = 0.25
            Isometry(space, "reflection", A=ref, b=(np.eye(n) - ref) @ (shift * 0.5)),
            Isometry(space, "rotation", A=R, b=c - R @ c),
            Isometry(space, "point_reflection", A=-np.eye(n), b=2.0 * c),
        ]
    if isinstance(space, Cone):
        th = space.theta
        return [
            Isometry(space, "reflection", sign=-1.0, shift=0.0),
            Isometry(space, "reflection_shifted", sign=-1.0, shift=th / 3.0),
            Isometry(space, "rotation", sign=1.0, shift=th / 3.0),
        ]
    if isinstance(space, Spindle):
        L = space.length
        return [
            Isometry(space, "reflection", sign=-1.0, shift=0.0),
            Isometry(space, "rotation", sign=1.0, shift=L / 3.0),
            Isometry(space, "pole_swap", sign=1.0, shift=0.0, swap=True),
        ]
    raise TypeError(f"no built-in isometries for {space!r}")


def make_space(desc: dict) -> ModelSpace:
    kind = desc.get("kind")
    if kind == "sphere":
        return Sphere(int(desc.get("dim", 2)), float(desc.get("radius", 1.0)))
    if kind == "euclidean":
        return Euclidean(int(desc.get("dim", 2)))
    if kind == "cone":
        return Cone(float(desc["theta"]))
    if kind == "spindle":
        return Spindle(float(desc["length"]))
    raise ValueError(f"unknown space kind {kind!r}")
