"""Trigonometry of the two-dimensional model plane of constant curvature k.

All solvers use half-angle / haversine forms, which stay accurate for thin
and tiny triangles where the plain law of cosines loses most of its digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

ANGLE_TOL = 1e-9
CLAMP_TOL = 1e-12
PERIMETER_TOL = 1e-9


class InvalidTriangle(ValueError):
    """Side data that does not describe a triangle in the model plane."""


def _sn(k: float, x: float) -> float:
    if k > 0:
        rk = math.sqrt(k)
        return math.sin(rk * x) / rk
    if k < 0:
        rk = math.sqrt(-k)
        return math.sinh(rk * x) / rk
    return x


def model_diameter(k: float) -> float:
    """pi/sqrt(k) for k > 0, infinity otherwise."""
    return math.pi / math.sqrt(k) if k > 0 else math.inf


def side_from_angle(k: float, b: float, c: float, alpha: float) -> float:
    """Side opposite ``alpha`` in the hinge (b, alpha, c) of the model plane."""
    if b < 0 or c < 0:
        raise InvalidTriangle(f"negative side length: b={b}, c={c}")
    if not 0.0 <= alpha <= math.pi + ANGLE_TOL:
        raise InvalidTriangle(f"angle {alpha} outside [0, pi]")
    alpha = min(alpha, math.pi)
    diam = model_diameter(k)
    if b > diam * (1 + CLAMP_TOL) or c > diam * (1 + CLAMP_TOL):
        raise InvalidTriangle(f"side exceeds pi/sqrt(k)={diam} for k={k}")
    hs = math.sin(0.5 * alpha) ** 2
    if k > 0:
        rk = math.sqrt(k)
        ss = math.sin(rk * b) * math.sin(rk * c)
        hav = math.sin(0.5 * rk * (b - c)) ** 2 + ss * hs
        co = math.cos(0.5 * rk * (b + c)) ** 2 + ss * (1.0 - hs)
        return 2.0 * math.atan2(math.sqrt(max(hav, 0.0)), math.sqrt(max(co, 0.0))) / rk
    if k < 0:
        rk = math.sqrt(-k)
        sh = math.sinh(0.5 * rk * (b - c)) ** 2 + math.sinh(rk * b) * math.sinh(rk * c) * hs
        return 2.0 * math.asinh(math.sqrt(max(sh, 0.0))) / rk
    return math.sqrt((b - c) ** 2 + 4.0 * b * c * hs)


def comparison_angle(k: float, pq: float, pr: float, qr: float,
                     clamp: float = CLAMP_TOL) -> float:
    """Angle at p~ of the model triangle with sides |pq|, |pr|, |qr|.

    For k > 0 and perimeter 2*pi/sqrt(k) the three vertices are placed on a
    single geodesic of length pi/sqrt(k); the angle is then 0 when q~ and r~
    lie on the same side of p~ and pi when p~ separates them.
    """
    if pq <= 0 or pr <= 0:
        raise InvalidTriangle(f"sides at p must be positive: pq={pq}, pr={pr}")
    if qr < 0:
        raise InvalidTriangle(f"negative side qr={qr}")
    s = 0.5 * (pq + pr + qr)
    sa, sb, sc = s - qr, s - pq, s - pr
    if min(sa, sb, sc) < -clamp * max(1.0, s):
        raise InvalidTriangle(f"triangle inequality fails: {pq}, {pr}, {qr}")
    sa, sb, sc = max(sa, 0.0), max(sb, 0.0), max(sc, 0.0)
    if k > 0:
        lim = model_diameter(k)
        if s > lim * (1 + clamp) + clamp:
            raise InvalidTriangle(f"perimeter {2 * s} exceeds 2*pi/sqrt(k)")
        if abs(s - lim) <= PERIMETER_TOL * max(1.0, lim):
            # collinear on a geodesic of length lim
            if abs(pq - lim) <= PERIMETER_TOL * max(1.0, lim) or abs(pr - lim) <= PERIMETER_TOL * max(1.0, lim):
                return 0.0
            if abs(qr - lim) <= PERIMETER_TOL * max(1.0, lim):
                return math.pi
            return math.pi
        s = min(s, lim)
    num = _sn(k, sb) * _sn(k, sc)
    den = _sn(k, s) * _sn(k, sa)
    return 2.0 * math.atan2(math.sqrt(max(num, 0.0)), math.sqrt(max(den, 0.0)))


def comparison_angles(k: float, pq, pr, qr, clamp: float = CLAMP_TOL) -> np.ndarray:
    """Vectorised ``comparison_angle``; invalid entries come back as nan."""
    pq = np.asarray(pq, dtype=np.float64)
    pr = np.asarray(pr, dtype=np.float64)
    qr = np.asarray(qr, dtype=np.float64)
    ang, status = _kernels.half_angle(k, pq, pr, qr, clamp)
    ang = np.array(ang, dtype=np.float64)
    ang[(status == 1) | (pq <= 0) | (pr <= 0)] = np.nan
    degen = status == 2
    if np.any(degen):
        lim = model_diameter(k)
        tol = PERIMETER_TOL * max(1.0, lim)
        b, c, a = np.broadcast_arrays(pq, pr, qr)
        zero = degen & ((np.abs(b - lim) <= tol) | (np.abs(c - lim) <= tol))
        ang[degen] = math.pi
        ang[zero] = 0.0
    return ang


def right_angle_bound_check(eta_zeta: float, eta_xi: float, zeta_xi: float,
                            tol: float = ANGLE_TOL) -> bool:
    """cos|eta zeta| >= cos|eta xi| cos|zeta xi|, i.e. the comparison angle
    at xi of the unit-sphere triangle (eta, xi, zeta) is at most pi/2."""
    for v in (eta_zeta, eta_xi, zeta_xi):
        if not -tol <= v <= math.pi + tol:
            raise ValueError(f"angle {v} outside [0, pi]")
    return math.cos(eta_zeta) >= math.cos(eta_xi) * math.cos(zeta_xi) - tol


@dataclass(frozen=True)
class AlexandrovComparison:
    """Outcome of gluing two hinges along a shared side.

    ``glued_angle`` is the angle at the far vertex p of the first triangle;
    ``straight_angle`` the angle at p of the single triangle whose side
    from p is the straightened broken side.  ``predicted`` is the ordering
    the lemma asserts from the split-angle sum; ``observed`` the measured one.
    """

    glued_angle: float
    straight_angle: float
    split_sum: float
    predicted: str
    observed: str

    @property
    def consistent(self) -> bool:
        return self.predicted == self.observed or self.observed == "eq"


def alexandrov_lemma_compare(k: float, hinge_sides: tuple[float, float, float],
                             split_angles: tuple[float, float],
                             tol: float = 1e-9) -> AlexandrovComparison:
    """Glue triangles (p, z1, o) and (o, z1, z2) along [z1 o] and compare.

    ``hinge_sides`` are (|p z1|, |z1 o|, |z1 z2|), ``split_angles`` the
    angles at z1 between (p, o) and between (o, z2).  When the two split
    angles sum to at most pi, the straightened triangle (p, z2, o) with
    |p z2| = |p z1| + |z1 z2| has angle at p no larger than the glued one;
    when they sum to at least pi the inequality reverses.
    """
    x, y, w = hinge_sides
    a1, a2 = split_angles
    if min(x, y, w) <= 0:
        raise InvalidTriangle("hinge sides must be positive")
    diam = model_diameter(k)
    if x + w > diam * (1 + CLAMP_TOL):
        raise InvalidTriangle("straightened side longer than pi/sqrt(k)")
    po = side_from_angle(k, x, y, a1)
    oz2 = side_from_angle(k, y, w, a2)
    glued = comparison_angle(k, x, po, y)
    straight = comparison_angle(k, x + w, po, oz2)
    total = a1 + a2
    if abs(total - math.pi) <= tol:
        predicted = "eq"
    elif total < math.pi:
        predicted = "le"
    else:
        predicted = "ge"
    diff = straight - glued
    observed = "eq" if abs(diff) <= 1e-9 else ("le" if diff < 0 else "ge")
    return AlexandrovComparison(glued, straight, total, predicted, observed)
