from __future__ import annotations

import json
import math

import numpy as np
import pytest

from qclab.checks import (
    CHECKERS,
    QC_CRITERIA,
    check_corollaryC,
    check_def01,
    check_extremal,
    check_gradient_invariance,
    check_prop21,
    check_theoremA,
    estimate_join_epsilon,
    run_quasiconvex_checks,
    verify_fixed_point_set,
    verify_intersection,
    verify_suspension_structure,
    witness_margin,
)
from qclab.scene import load_scene
from qclab.spaces import Cone, Euclidean, Sphere, Spindle, builtin_isometries
from qclab.subsets import EmptySet, FinitePoints

BUDGET = 2000


def scene(name, subset=None):
    sc = load_scene(name)
    return sc.space, sc.subset(subset)


def _assert_reproducible_fail(space, F, rep):
    assert rep.verdict == "fail"
    assert rep.witness is not None
    # round-trip through JSON: the recorded witness alone reproduces the violation
    again = type(rep)(**{**rep.__dict__, "witness": json.loads(rep.to_json())["witness"]})
    assert witness_margin(space, F, again) > 1e-6


# --- min-point criterion ----------------------------------------------------

def test_def01_great_circle_passes():
    space, F = scene("sphere_greatcircle")
    assert check_def01(space, F, BUDGET, 1).verdict == "pass"


def test_def01_two_lines_fail_with_witness():
    space, F = scene("plane_two_lines")
    rep = check_def01(space, F, BUDGET, 7)
    _assert_reproducible_fail(space, F, rep)
    w = rep.witness
    assert w["angle"] > math.pi / 2


def test_def01_conventions():
    e = Euclidean(2)
    assert check_def01(e, FinitePoints(e, [[1.0, 2.0]]), BUDGET, 1).verdict == "pass"
    assert check_def01(e, EmptySet(e), BUDGET, 1).verdict == "pass"


# --- direction criterion --------------------------------------------------------

def test_theoremA_great_circle_passes_and_strong_form_holds():
    space, F = scene("sphere_greatcircle")
    rep = check_theoremA(space, F, BUDGET, 1)
    assert rep.verdict == "pass"
    assert rep.details["strong_form_holds"] is True


def test_theoremA_cone_two_rays_passes():
    space, F = scene("cone_two_rays")
    assert check_theoremA(space, F, BUDGET, 1).verdict == "pass"


def test_theoremA_small_circle_fails():
    space, F = scene("sphere_smallcircle")
    _assert_reproducible_fail(space, F, check_theoremA(space, F, BUDGET, 1))


# --- farthest direction -------------------------------------------------------

def test_corollaryC_examples():
    space, F = scene("sphere_greatcircle")
    assert check_corollaryC(space, F, BUDGET, 1).verdict == "pass"
    space, F = scene("spindle_meridians")
    assert check_corollaryC(space, F, BUDGET, 1).verdict == "pass"
    space, F = scene("plane_two_lines")
    _assert_reproducible_fail(space, F, check_corollaryC(space, F, BUDGET, 1))


# --- descent directions ----------------------------------------------------

def test_prop21_examples():
    space, F = scene("plane_line")
    assert check_prop21(space, F, BUDGET, 1).verdict == "pass"
    space, F = scene("sphere_greatcircle")
    assert check_prop21(space, F, BUDGET, 1).verdict == "pass"
    space, F = scene("sphere_smallcircle")
    _assert_reproducible_fail(space, F, check_prop21(space, F, BUDGET, 1))


# --- gradient invariance ---------------------------------------------------

def test_gradient_invariance_examples():
    space, F = scene("spindle_meridians")
    assert check_gradient_invariance(space, F, BUDGET, 1).verdict == "pass"
    space, F = scene("sphere_greatcircle")
    assert check_gradient_invariance(space, F, BUDGET, 1).verdict == "pass"
    space, F = scene("plane_two_lines")
    _assert_reproducible_fail(space, F, check_gradient_invariance(space, F, BUDGET, 1))


def test_gradient_invariance_pole_plus_point_fails():
    sp = Spindle(math.pi)
    F = FinitePoints(sp, [sp.z1(), sp.point([1.0, 0.5])])
    rep = check_gradient_invariance(sp, F, BUDGET, 1)
    _assert_reproducible_fail(sp, F, rep)


# --- the five together ------------------------------------------------------

@pytest.mark.parametrize("name,expected", [
    ("sphere_greatcircle", "pass"), ("sphere_point", "pass"), ("sphere_antipodal", "pass"),
    ("cone_apex", "pass"), ("spindle_equator", "pass"), ("spindle_tilted", "pass"),
    ("sphere_smallcircle", "fail"), ("plane_two_lines", "fail"),
])
def test_checkers_agree(name, expected):
    space, F = scene(name)
    reports = run_quasiconvex_checks(space, F, 600, 2)
    assert [r.criterion for r in reports] == list(QC_CRITERIA)
    assert {r.verdict for r in reports} == {expected}
    for r in reports:
        if r.verdict == "fail":
            assert witness_margin(space, F, r) > 1e-6


def test_reports_are_deterministic():
    space, F = scene("plane_two_lines")
    for name, fn in CHECKERS.items():
        a = fn(space, F, 400, 5).to_json()
        b = fn(space, F, 400, 5).to_json()
        assert a == b, name


def test_report_field_order():
    space, F = scene("sphere_greatcircle")
    rec = json.loads(check_def01(space, F, 100, 1).to_json())
    assert list(rec) == ["criterion", "verdict", "subset", "space", "budget", "seed", "witness", "details"]
    assert rec["budget"] == 100 and rec["seed"] == 1


# --- extremality ------------------------------------------------------------

def test_extremal_apex_diameter_rule():
    for theta, verdict in ((math.pi / 2, "pass"), (1.5 * math.pi, "fail")):
        c = Cone(theta)
        F = FinitePoints(c, [c.apex()])
        rep = check_extremal(c, F, BUDGET, 1)
        assert rep.verdict == verdict
        if verdict == "fail":
            assert witness_margin(c, F, rep) > 1e-6


def test_great_circle_is_quasiconvex_but_not_extremal():
    space, F = scene("sphere_greatcircle")
    rep = check_extremal(space, F, BUDGET, 1)
    _assert_reproducible_fail(space, F, rep)


@pytest.mark.parametrize("name,subset", [("spindle_pi", "whole"), ("fixed_cone", None), ("cone_apex", None)])
def test_extremal_implies_quasiconvex(name, subset):
    space, F = scene(name, subset)
    if check_extremal(space, F, 600, 1).verdict == "pass":
        assert all(r.verdict == "pass" for r in run_quasiconvex_checks(space, F, 600, 1))


# --- intersections ----------------------------------------------------------

def test_two_great_circles_intersect_in_antipodal_pair():
    s = load_scene("sphere_greatcircle").subset()
    sc = load_scene("sphere_greatcircle_b")
    rep = verify_intersection(sc.space, s, sc.subset(), 600, 1)
    assert rep.verdict == "pass"
    pts = np.array(rep.details["intersection"]["points"])
    assert len(pts) == 2 and np.allclose(pts[0], -pts[1])
    assert rep.details["tangent_gap"] == 0.0


def test_intersection_with_itself():
    space, F = scene("sphere_greatcircle")
    rep = verify_intersection(space, F, F, 600, 1)
    assert rep.verdict == "pass"
    assert rep.details["intersection"] == F.describe()


def test_spindle_meridian_pairs_share_only_poles():
    sc = load_scene("spindle_meridians")
    rep = verify_intersection(sc.space, sc.subset("F"), sc.subset("G"), 600, 1)
    assert rep.verdict == "pass"
    pts = np.array(rep.details["intersection"]["points"])
    assert sorted(pts[:, 0].tolist()) == pytest.approx([0.0, math.pi])


# --- suspension structure ---------------------------------------------------

def test_suspension_of_meridian_pair():
    sc = load_scene("spindle_meridians")
    rep = verify_suspension_structure(sc.space, sc.subset(), 600, 1)
    assert rep.verdict == "pass" and rep.details["branch"] == "suspension"
    poles = sorted(p[0] for p in np.asarray(rep.details["poles"]))
    assert poles == pytest.approx([0.0, math.pi])
    mid = np.asarray(rep.details["middle"])
    assert rep.details["middle_count"] == 2
    np.testing.assert_allclose(mid[:, 0], math.pi / 2, atol=1e-12)


def test_suspension_equator_branch():
    sc = load_scene("spindle_equator")
    rep = verify_suspension_structure(sc.space, sc.subset(), 600, 1)
    assert rep.verdict == "pass" and rep.details["branch"] == "equator"


def test_suspension_rotated_poles():
    sc = load_scene("spindle_tilted")
    rep = verify_suspension_structure(sc.space, sc.subset(), 600, 1)
    assert rep.verdict == "pass" and rep.details["branch"] == "suspension"
    a, b = np.asarray(rep.details["poles"])
    assert sc.space.distance(a, b) == pytest.approx(math.pi, abs=1e-6)
    # neither pole is a pole of the spindle
    assert 1e-3 < a[0] < math.pi - 1e-3 and 1e-3 < b[0] < math.pi - 1e-3


def test_suspension_rejects_other_spaces():
    with pytest.raises(TypeError):
        verify_suspension_structure(Sphere(2, 1.0), EmptySet(Sphere(2, 1.0)))


# --- fixed point sets -------------------------------------------------------

@pytest.mark.parametrize("space", [Sphere(2, 1.0), Cone(math.pi), Spindle(math.pi), Euclidean(2)],
                         ids=lambda s: s.kind)
def test_fixed_point_sets_pass(space):
    for g in builtin_isometries(space):
        rep = verify_fixed_point_set(space, g, 400, 1, points=10)
        assert rep.verdict == "pass", (g.name, rep.witness)


# --- joining constant -------------------------------------------------------

def test_join_epsilon_estimates():
    for space in (Sphere(2, 1.0), Euclidean(2)):
        res = estimate_join_epsilon(space, 400, 1)
        assert res["epsilon"] >= 0.9
        assert res["min_best_derivative"] > res["epsilon"]
    assert estimate_join_epsilon(Spindle(math.pi), 400, 1)["epsilon"] > 0
