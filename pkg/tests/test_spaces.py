from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from qclab.spaces import (
    Cone,
    Euclidean,
    SamePoint,
    Sphere,
    Spindle,
    StepTooLarge,
    builtin_isometries,
    make_space,
)
from qclab.subsets import fixed_point_set

ZOO = [Sphere(2, 1.0), Sphere(3, 1.0), Sphere(2, 2.0), Sphere(1, 1.0), Euclidean(1), Euclidean(2), Euclidean(3),
       Cone(math.pi), Cone(1.5 * math.pi), Cone(2 * math.pi), Cone(0.5), Spindle(math.pi), Spindle(2 * math.pi),
       Spindle(1.0)]
IDS = [f"{s.kind}-{i}" for i, s in enumerate(ZOO)]


@pytest.mark.parametrize("space", ZOO, ids=IDS)
def test_metric_axioms(space):
    rng = np.random.default_rng(101)
    n = 10_000
    X, Y, Z = (space.random_points(rng, n) for _ in range(3))
    dxy, dyx = space.distances(X, Y), space.distances(Y, X)
    dyz, dxz = space.distances(Y, Z), space.distances(X, Z)
    assert np.all(dxy >= 0)
    assert np.max(np.abs(dxy - dyx)) <= 1e-12
    assert np.max(dxz - dxy - dyz) <= 1e-10
    assert np.all(space.distances(X, X) <= 1e-12)
    assert np.all(dxy <= space.diameter + 1e-12)


@pytest.mark.parametrize("space", ZOO, ids=IDS)
def test_scalar_distance_matches_vector(space):
    rng = np.random.default_rng(3)
    X, Y = space.random_points(rng, 200), space.random_points(rng, 200)
    got = [space.distance(x, y) for x, y in zip(X, Y)]
    np.testing.assert_allclose(got, space.distances(X, Y), atol=1e-13)


@pytest.mark.parametrize("space", ZOO, ids=IDS)
def test_geodesic_consistency(space):
    rng = np.random.default_rng(17)
    worst = 0.0
    for p, q in zip(space.random_points(rng, 60), space.random_points(rng, 60)):
        fam = space.minimal_geodesics(p, q)
        for seg in fam.segments(4):
            assert space.distance(seg.point_at(seg.length), q) <= 1e-9
            for t in np.linspace(0.0, 1.0, 7):
                x = seg.point_at(t * seg.length)
                worst = max(worst, abs(space.distance(p, x) + space.distance(x, q) - fam.length))
    assert worst <= 1e-9


@pytest.mark.parametrize("space", ZOO, ids=IDS)
def test_exp_step_distance(space):
    rng = np.random.default_rng(23)
    for p in space.random_points(rng, 100):
        eta = space.direction_space(p).random(rng, 1)[0]
        h = min(0.5, 0.9 * space.injectivity_bound(p, eta))
        assert abs(space.distance(p, space.exp_step(p, eta, h)) - h) <= 1e-10


@pytest.mark.parametrize("space", ZOO, ids=IDS)
def test_isometries_preserve_distance(space):
    rng = np.random.default_rng(29)
    X, Y = space.random_points(rng, 500), space.random_points(rng, 500)
    d = space.distances(X, Y)
    for g in builtin_isometries(space):
        gX = np.array([g.apply(x) for x in X])
        gY = np.array([g.apply(y) for y in Y])
        assert np.max(np.abs(space.distances(gX, gY) - d)) <= 1e-12


# --- worked examples -------------------------------------------------------

@pytest.mark.parametrize("L", [0.5, math.pi, 2 * math.pi])
def test_spindle_pole_distance(L):
    sp = Spindle(L)
    assert sp.distance(sp.z1(), sp.z2()) == pytest.approx(math.pi, abs=1e-15)


def test_cone_apex_distance_is_radius():
    for theta in (0.5, math.pi, 2 * math.pi):
        c = Cone(theta)
        assert c.distance(c.apex(), c.point([1.3, 0.2])) == pytest.approx(1.3, abs=1e-15)


def test_cone_three_half_pi_example():
    c = Cone(1.5 * math.pi)
    assert c.distance(c.point([1, 0]), c.point([1, math.pi / 2])) == pytest.approx(math.sqrt(2), abs=1e-14)


def test_cone_goes_through_apex_when_far_apart():
    c = Cone(2 * math.pi)
    assert c.distance(c.point([1, 0]), c.point([2, math.pi])) == pytest.approx(3.0, abs=1e-14)


def test_chart_canonicalisation():
    c = Cone(math.pi)
    np.testing.assert_array_equal(c.point([0.0, 1.0]), [0.0, 0.0])
    sp = Spindle(math.pi)
    np.testing.assert_array_equal(sp.point([math.pi, 2.0]), [math.pi, 0.0])
    assert sp.point([1.0, math.pi + 0.5])[1] == pytest.approx(0.5)


def _cone_graph_distance(theta, a, b, eps=1e-2, rlo=0.6, rhi=1.2, reach=0.06):
    """Shortest path on an eps-net of the annulus rlo <= r <= rhi.

    Edges join net points closer than ``reach``; their lengths come from the
    flat metric of the unrolled sector, which is exact for such short edges.
    """
    rs = np.arange(rlo, rhi + 1e-12, eps)
    nphi = int(round(theta / eps))
    phis = np.arange(nphi) * theta / nphi
    R, P = np.meshgrid(rs, phis, indexing="ij")
    nodes = np.column_stack([R.ravel(), P.ravel()])
    nodes = np.vstack([nodes, a, b])
    # neighbour candidates in (r, r_mid * phi) with a periodic phi axis
    scale = rlo
    tree = cKDTree(np.column_stack([nodes[:, 0], nodes[:, 1] * scale]), boxsize=[1e6, theta * scale])
    pairs = tree.query_pairs(reach, output_type="ndarray")
    i, j = pairs[:, 0], pairs[:, 1]
    dphi = np.abs(nodes[i, 1] - nodes[j, 1])
    dphi = np.minimum(dphi, theta - dphi)
    w = np.sqrt(nodes[i, 0] ** 2 + nodes[j, 0] ** 2 - 2 * nodes[i, 0] * nodes[j, 0] * np.cos(dphi))
    ok = w <= reach
    n = len(nodes)
    G = coo_matrix((w[ok], (i[ok], j[ok])), shape=(n, n)).tocsr()
    return dijkstra(G, directed=False, indices=n - 2)[n - 1]


@pytest.mark.parametrize("theta,a,b", [
    (1.5 * math.pi, (1.0, 0.0), (1.0, math.pi / 2)),
    (1.5 * math.pi, (0.8, 0.3), (1.1, 3.5)),
    (math.pi, (1.0, 0.1), (0.9, 1.2)),
])
def test_cone_distance_against_graph_oracle(theta, a, b):
    eps = 1e-2
    c = Cone(theta)
    exact = c.distance(c.point(a), c.point(b))
    approx = _cone_graph_distance(theta, np.array(a), np.array(b), eps)
    assert abs(approx - exact) <= 2 * eps
    assert approx >= exact - 1e-12


# --- geodesics --------------------------------------------------------------

def test_sphere_antipodal_continuum():
    s = Sphere(2, 1.0)
    p = np.array([0.0, 0.0, 1.0])
    fam = s.minimal_geodesics(p, -p)
    assert fam.is_continuum
    assert fam.directions.kind == "full"
    for seg in fam.segments(8):
        assert s.distance(seg.point_at(math.pi / 2), p) == pytest.approx(math.pi / 2)


def test_euclidean_unique_geodesic():
    e = Euclidean(2)
    fam = e.minimal_geodesics([0.0, 0.0], [1.0, 2.0])
    assert len(fam) == 1


def test_spindle_pole_to_pole_continuum():
    sp = Spindle(math.pi)
    fam = sp.minimal_geodesics(sp.z1(), sp.z2())
    assert fam.is_continuum
    assert fam.length == pytest.approx(math.pi)


def test_minimal_geodesics_rejects_equal_points():
    with pytest.raises(SamePoint):
        Euclidean(2).minimal_geodesics([1.0, 1.0], [1.0, 1.0])


def test_exp_examples():
    e = Euclidean(2)
    np.testing.assert_allclose(e.exp_step([0.0, 0.0], 0.0, 1.0), [1.0, 0.0], atol=1e-15)
    s = Sphere(2, 1.0)
    for eta in (0.0, 1.0, 4.0):
        assert abs(s.exp_step([0.0, 0.0, 1.0], eta, math.pi / 2)[2]) < 1e-15
    c = Cone(math.pi)
    np.testing.assert_allclose(c.exp_step(c.apex(), 0.7, 1.25), [1.25, 0.7], atol=1e-15)


def test_exp_step_too_large():
    with pytest.raises(StepTooLarge):
        Sphere(2, 1.0).exp_step([0.0, 0.0, 1.0], 0.0, 3.5)
    sp = Spindle(math.pi)
    with pytest.raises(StepTooLarge):
        sp.exp_step(sp.z1(), 0.0, 3.2)


# --- direction spaces -------------------------------------------------------

def test_direction_space_examples():
    c = Cone(math.pi)
    sig = c.direction_space(c.apex())
    assert sig.kind == "circle" and sig.length == pytest.approx(math.pi)
    assert c.direction_space(c.point([1, 0])).length == pytest.approx(2 * math.pi)
    assert Sphere(2, 1.0).direction_space([1.0, 0, 0]).length == pytest.approx(2 * math.pi)
    sp = Spindle(1.3)
    assert sp.direction_space(sp.z1()).length == pytest.approx(1.3)
    assert Sphere(3, 1.0).direction_space([1.0, 0, 0, 0]).kind == "sphere"
    assert Euclidean(1).direction_space([0.0]).kind == "pair"


def test_lower_bounds():
    assert Sphere(2, 2.0).k == pytest.approx(0.25)
    assert Euclidean(2).k == 0.0
    assert Cone(1.0).k == 0.0
    assert Spindle(1.0).k == 1.0


def test_make_space_rejects_bad_input():
    with pytest.raises(ValueError):
        make_space({"kind": "cone", "theta": 7.0})
    with pytest.raises(ValueError):
        make_space({"kind": "torus"})
    with pytest.raises(ValueError):
        Sphere(4, 1.0)


# --- fixed point sets -------------------------------------------------------

def test_fixed_set_of_sphere_reflection_is_great_circle():
    s = Sphere(2, 1.0)
    F = fixed_point_set(s, builtin_isometries(s)[0])
    rng = np.random.default_rng(0)
    pts = F.sample(rng, 100)
    assert np.all(np.abs(pts[:, 1]) < 1e-12)
    assert F.contains([1.0, 0.0, 0.0]) and not F.contains([0.0, 1.0, 0.0])


def test_fixed_set_of_cone_reflection_is_two_rays():
    c = Cone(math.pi)
    F = fixed_point_set(c, builtin_isometries(c)[0])
    assert F.contains(c.point([1.0, 0.0]))
    assert F.contains(c.point([1.0, math.pi / 2]))
    assert F.contains(c.apex())
    assert not F.contains(c.point([1.0, 0.3]))
    T = F.tangent(c.apex())
    np.testing.assert_allclose(np.sort(T.pts), [0.0, math.pi / 2], atol=1e-12)


def test_fixed_set_of_point_reflection_is_single_point():
    e = Euclidean(2)
    g = [g for g in builtin_isometries(e) if g.name == "point_reflection"][0]
    F = fixed_point_set(e, g)
    assert F.finite_points is not None and len(F.finite_points) == 1
    np.testing.assert_allclose(F.finite_points[0], [1.0, 0.5])


def test_fixed_set_empty_for_translation():
    e = Euclidean(1)
    g = [g for g in builtin_isometries(e) if g.name == "translation"][0]
    assert fixed_point_set(e, g).is_empty
