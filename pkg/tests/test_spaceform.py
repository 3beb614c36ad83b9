from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qclab.spaceform import (
    InvalidTriangle,
    alexandrov_lemma_compare,
    comparison_angle,
    comparison_angles,
    right_angle_bound_check,
    side_from_angle,
)

mp.mp.dps = 40


def mp_side(k, b, c, alpha):
    """Law of cosines in high precision (oracle)."""
    k, b, c, alpha = map(mp.mpf, (k, b, c, alpha))
    if k > 0:
        rk = mp.sqrt(k)
        return mp.acos(mp.cos(rk * b) * mp.cos(rk * c) + mp.sin(rk * b) * mp.sin(rk * c) * mp.cos(alpha)) / rk
    if k < 0:
        rk = mp.sqrt(-k)
        return mp.acosh(mp.cosh(rk * b) * mp.cosh(rk * c) - mp.sinh(rk * b) * mp.sinh(rk * c) * mp.cos(alpha)) / rk
    return mp.sqrt(b * b + c * c - 2 * b * c * mp.cos(alpha))


# --- side_from_angle -------------------------------------------------------

def test_euclidean_right_triangle():
    assert side_from_angle(0, 3, 4, math.pi / 2) == pytest.approx(5, abs=1e-14)


def test_sphere_octant():
    assert side_from_angle(1, math.pi / 2, math.pi / 2, math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-14)


def test_hyperbolic_right_isoceles_frozen():
    # acosh(cosh(1)^2), from the mpmath oracle at 40 digits
    frozen = 1.513374006596504
    assert float(mp.acosh(mp.cosh(1) ** 2)) == pytest.approx(frozen, abs=1e-15)
    assert side_from_angle(-1, 1, 1, math.pi / 2) == pytest.approx(frozen, abs=1e-14)


@pytest.mark.parametrize("k", [-1.0, -0.3, 0.0, 0.7, 1.0, 4.0])
def test_side_matches_mpmath(k):
    rng = np.random.default_rng(7)
    top = math.pi / math.sqrt(k) if k > 0 else 2.0
    for _ in range(200):
        b, c = rng.uniform(0, top, 2)
        a = rng.uniform(0, math.pi)
        assert side_from_angle(k, b, c, a) == pytest.approx(float(mp_side(k, b, c, a)), abs=1e-12)


@pytest.mark.parametrize("k", [-1.0, 0.0, 1.0])
def test_side_limits(k):
    assert side_from_angle(k, 0.7, 0.3, 0.0) == pytest.approx(0.4, abs=1e-14)
    assert side_from_angle(k, 0.7, 0.3, math.pi) == pytest.approx(1.0, abs=1e-14)


def test_side_sum_wraps_on_sphere():
    # b + c > pi: the "sum" geodesic is 2*pi - (b + c)
    assert side_from_angle(1, 2.0, 2.0, math.pi) == pytest.approx(2 * math.pi - 4.0, abs=1e-14)


def test_side_rejects_long_sides():
    with pytest.raises(InvalidTriangle):
        side_from_angle(1, 3.5, 1.0, 1.0)
    with pytest.raises(InvalidTriangle):
        side_from_angle(4, 1.6, 1.0, 1.0)
    with pytest.raises(InvalidTriangle):
        side_from_angle(0, -1.0, 1.0, 1.0)


# --- comparison_angle ------------------------------------------------------

def test_equilateral():
    assert comparison_angle(0, 1, 1, 1) == pytest.approx(math.pi / 3, abs=1e-15)


def test_footnote_collinear_antipodal():
    assert comparison_angle(1, math.pi / 2, math.pi / 2, math.pi) == pytest.approx(math.pi, abs=1e-15)


def test_degenerate_perimeter_same_side():
    # q~ at distance pi from p~ so r~ sits between them
    assert comparison_angle(1, math.pi, 1.0, math.pi - 1.0) == 0.0


def test_spherical_0304_05_against_root_finder():
    f = lambda a: mp.cos(0.3) * mp.cos(0.4) + mp.sin(0.3) * mp.sin(0.4) * mp.cos(a) - mp.cos(0.5)
    oracle = float(mp.findroot(f, 1.5))
    assert comparison_angle(1, 0.3, 0.4, 0.5) == pytest.approx(oracle, abs=1e-14)


def test_comparison_rejects_bad_triangles():
    with pytest.raises(InvalidTriangle):
        comparison_angle(0, 1, 1, 2.5)
    with pytest.raises(InvalidTriangle):
        comparison_angle(1, 3.0, 3.0, 1.0)
    with pytest.raises(InvalidTriangle):
        comparison_angle(0, 0.0, 1.0, 1.0)


def test_clamp_accepts_rounding_noise():
    assert comparison_angle(0, 1.0, 2.0, 3.0 + 1e-13) == pytest.approx(math.pi)
    with pytest.raises(InvalidTriangle):
        comparison_angle(0, 1.0, 2.0, 3.0 + 1e-9)


@pytest.mark.parametrize("k", [-1.0, 0.0, 1.0])
def test_round_trip_grid(k):
    err = 0.0
    for b in np.linspace(0.05, math.pi / 2, 12):
        for c in np.linspace(0.05, math.pi / 2, 12):
            for a in (np.arange(40) + 0.5) * math.pi / 40:
                err = max(err, abs(comparison_angle(k, b, c, side_from_angle(k, b, c, a)) - a))
    assert err < 1e-9


@pytest.mark.parametrize("k", [-1.0, 0.0, 1.0])
def test_degenerate_limits(k):
    assert comparison_angle(k, 0.8, 0.5, 0.3) == pytest.approx(0.0, abs=1e-7)
    assert comparison_angle(k, 0.8, 0.5, 1.3) == pytest.approx(math.pi, abs=1e-7)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1, 1), st.floats(0.05, 1.4), st.floats(0.05, 1.4), st.floats(0.05, 0.95))
def test_monotone_in_opposite_side(k, b, c, t):
    lo = abs(b - c)
    hi = b + c
    a1 = lo + t * (hi - lo)
    a2 = a1 + 1e-3 * (hi - lo)
    assert comparison_angle(k, b, c, a2) > comparison_angle(k, b, c, a1)


def test_monotone_in_k():
    rng = np.random.default_rng(3)
    ks = np.linspace(-1, 1, 9)
    for _ in range(200):
        b, c = rng.uniform(0.05, 1.4, 2)
        a = abs(b - c) + rng.uniform(0.05, 0.95) * (b + c - abs(b - c))
        vals = [comparison_angle(k, b, c, a) for k in ks]
        assert all(y >= x - 1e-12 for x, y in zip(vals, vals[1:]))


def test_euclidean_limit():
    for k in (1e-4, -1e-4, 1e-6):
        for b, c, a in ((1, 1, 1), (0.3, 0.5, 0.6), (1.2, 0.2, 1.1)):
            assert comparison_angle(k, b, c, a) == pytest.approx(comparison_angle(0, b, c, a), abs=1e-4 * 3)
            ang = math.acos((b * b + c * c - a * a) / (2 * b * c))
            assert abs(comparison_angle(k * 1e-3, b, c, a) - ang) < 1e-7


def test_vectorised_matches_scalar():
    pq = np.array([1.0, 0.3, math.pi / 2, 1.0])
    pr = np.array([1.0, 0.4, math.pi / 2, 1.0])
    qr = np.array([1.0, 0.5, math.pi, 3.0])
    got = comparison_angles(1.0, pq, pr, qr)
    assert got[0] == pytest.approx(comparison_angle(1, 1, 1, 1))
    assert got[1] == pytest.approx(comparison_angle(1, 0.3, 0.4, 0.5))
    assert got[2] == pytest.approx(math.pi)
    assert math.isnan(got[3])


# --- right_angle_bound_check ----------------------------------------------

def test_right_angle_bound_examples():
    assert right_angle_bound_check(math.pi / 2, math.pi / 2, 1.234)
    assert right_angle_bound_check(math.pi / 4, math.pi / 4, 0.0)
    assert math.cos(3 * math.pi / 4) < math.cos(math.pi / 3) ** 2
    assert not right_angle_bound_check(3 * math.pi / 4, math.pi / 3, math.pi / 3)


def test_right_angle_bound_matches_comparison_angle():
    rng = np.random.default_rng(11)
    for _ in range(300):
        ex, zx = rng.uniform(0.1, 3.0, 2)
        ez = abs(ex - zx) + rng.uniform(0.02, 0.98) * (min(ex + zx, 2 * math.pi - ex - zx) - abs(ex - zx))
        angle = comparison_angle(1, ex, zx, ez)
        if abs(angle - math.pi / 2) > 1e-6:
            assert right_angle_bound_check(ez, ex, zx) == (angle <= math.pi / 2)


def test_right_angle_bound_range():
    with pytest.raises(ValueError):
        right_angle_bound_check(4.0, 0.0, 0.0)


# --- alexandrov_lemma_compare ---------------------------------------------

def _planar_glued(x, y, w, a1, a2):
    """Explicit coordinates: z1 at the origin, p on the +x axis."""
    p = np.array([x, 0.0])
    o = y * np.array([math.cos(a1), math.sin(a1)])
    z2 = w * np.array([math.cos(a1 + a2), math.sin(a1 + a2)])
    return p, o, z2


def test_alexandrov_equality():
    res = alexandrov_lemma_compare(0, (1.0, 0.7, 0.5), (1.2, math.pi - 1.2))
    assert res.predicted == "eq" and res.observed == "eq"


def test_alexandrov_planar_le_with_coordinates():
    x, y, w, a1, a2 = 1.0, 0.7, 0.5, 1.0, 1.5
    res = alexandrov_lemma_compare(0, (x, y, w), (a1, a2))
    assert res.predicted == "le" and res.observed == "le"
    p, o, z2 = _planar_glued(x, y, w, a1, a2)
    u, v = -p, o - p
    glued = math.acos(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
    assert res.glued_angle == pytest.approx(glued, abs=1e-12)
    po, oz2 = np.linalg.norm(o - p), np.linalg.norm(z2 - o)
    straight = math.acos(((x + w) ** 2 + po ** 2 - oz2 ** 2) / (2 * (x + w) * po))
    assert res.straight_angle == pytest.approx(straight, abs=1e-12)


def test_alexandrov_spherical_ge_with_coordinates():
    x, y, w, a1, a2 = 0.8, 0.6, 0.5, 1.8, 1.7
    res = alexandrov_lemma_compare(1, (x, y, w), (a1, a2))
    assert res.predicted == "ge" and res.observed == "ge"
    # oracle: z1 at the north pole, geodesics along azimuths 0, a1, a1 + a2
    def at(d, az):
        return np.array([math.sin(d) * math.cos(az), math.sin(d) * math.sin(az), math.cos(d)])
    p, o = at(x, 0.0), at(y, a1)
    z1 = np.array([0.0, 0.0, 1.0])
    tp = z1 - (z1 @ p) * p
    to = o - (o @ p) * p
    glued = math.acos(tp @ to / (np.linalg.norm(tp) * np.linalg.norm(to)))
    assert res.glued_angle == pytest.approx(glued, abs=1e-12)
    assert res.consistent


def test_alexandrov_random_consistency():
    rng = np.random.default_rng(5)
    valid = 0
    for k in (-1.0, 0.0, 1.0):
        for _ in range(200):
            x, y, w = rng.uniform(0.05, 1.0, 3)
            a1, a2 = rng.uniform(0.05, math.pi - 0.05, 2)
            try:
                res = alexandrov_lemma_compare(k, (x, y, w), (a1, a2))
            except InvalidTriangle:
                # the straightened triangle need not exist for every gluing
                continue
            assert res.consistent
            valid += 1
    assert valid > 300
