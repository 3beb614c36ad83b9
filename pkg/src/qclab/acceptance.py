"""The acceptance matrix, shared by ``qclab suite`` and the test suite.

Each criterion is a function ``(seed) -> CriterionResult``.  Results carry
report records; ``suite_text`` renders them deterministically, so two runs
with the same seed can be compared byte for byte.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .checks import (
    QC_CRITERIA,
    check_extremal,
    estimate_join_epsilon,
    run_quasiconvex_checks,
    verify_fixed_point_set,
    verify_intersection,
    verify_suspension_structure,
)
from .directions import DirectionSet, set_distance
from .flow import FlowConfig, gradient_curve, hausdorff_points, join_in_subset, tangent_curve
from .scene import load_scene
from .spaceform import comparison_angle, comparison_angles, side_from_angle
from .spaces import Cone, Euclidean, ModelSpace, Sphere, Spindle, _CircleCone
from .subsets import FinitePoints, GreatSubsphere
from .tangent import dist_derivative, finite_difference, tangent_cone_estimate

EQUIVALENCE_CATALOG = (
    ("sphere_greatcircle", "pass"),
    ("sphere_smallcircle", "fail"),
    ("sphere_point", "pass"),
    ("sphere_antipodal", "pass"),
    ("plane_line", "pass"),
    ("plane_two_lines", "fail"),
    ("cone_two_rays", "pass"),
    ("cone_apex", "pass"),
    ("spindle_meridians", "pass"),
    ("spindle_equator", "pass"),
)
EQUIVALENCE_SEEDS = (1, 2, 3)
BUDGET = 2000

# quasi-convex subsets grouped by space, for intersections and tangent curves
QC_SUBSETS = {
    "sphere": [("sphere_greatcircle", "F"), ("sphere_greatcircle_b", "F"),
               ("sphere_point", "F"), ("sphere_antipodal", "F")],
    "plane": [("plane_line", "F")],
    "cone": [("cone_two_rays", "F"), ("cone_apex", "F")],
    "spindle": [("spindle_meridians", "F"), ("spindle_meridians", "G"), ("spindle_equator", "F")],
}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    summary: str
    records: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.summary}"


def zoo() -> list[ModelSpace]:
    return [Sphere(2, 1.0), Euclidean(2), Cone(math.pi), Spindle(math.pi)]


def _rng(seed, number):
    return np.random.default_rng([int(seed), 1000 + number])


def _fmt(x: float) -> str:
    return f"{x:.3e}"


# ---------------------------------------------------------------------------
# 1. kernel round trip
# ---------------------------------------------------------------------------

def criterion_1(seed: int) -> CriterionResult:
    worst = {}
    for k in (-1.0, 0.0, 1.0):
        top = math.pi if k > 0 else 3.0
        g = (np.arange(50) + 0.5) * top / 50
        A = (np.arange(50) + 0.5) * math.pi / 50
        B, C, AL = (x.ravel() for x in np.meshgrid(g, g, A, indexing="ij"))
        a = np.array([side_from_angle(k, b, c, al) for b, c, al in zip(B, C, AL)])
        ang = comparison_angles(k, B, C, a)
        worst[k] = float(np.max(np.abs(ang - AL)))
    octant = comparison_angle(1.0, math.pi / 2, math.pi / 2, math.pi / 2)
    ok = all(v <= 1e-9 for v in worst.values()) and abs(octant - math.pi / 2) <= 1e-12
    rec = {"max_error": {str(k): v for k, v in worst.items()}, "octant_error": octant - math.pi / 2}
    return CriterionResult(1, "kernel round-trip", ok,
                           f"max error {_fmt(max(worst.values()))}, octant {_fmt(abs(octant - math.pi / 2))}",
                           [rec])


# ---------------------------------------------------------------------------
# 2. angle defect of small triangles
# ---------------------------------------------------------------------------

SINGULAR_CLEARANCE = 1e-2


def _generic_base(space: ModelSpace, rng, count: int) -> np.ndarray:
    """Random points, either exactly singular or at least SINGULAR_CLEARANCE
    from every singular point (the angle defect is a limit at fixed p)."""
    out = []
    special = space.special_points()
    while len(out) < count:
        for x in space.random_points(rng, count):
            if all(space.distance(x, s) >= SINGULAR_CLEARANCE for s in special):
                out.append(x)
    out = out[:count]
    for i, s in enumerate(special):
        out[i] = s
    return np.array(out)


def triangle_defects(space: ModelSpace, rng, count: int = 1000, size: float = 1e-3) -> np.ndarray:
    out = []
    for p in _generic_base(space, rng, count):
        while True:
            q, r = space.random_near(rng, p, 0.5 * size, 2)
            pq, pr, qr = space.distance(p, q), space.distance(p, r), space.distance(q, r)
            if min(pq, pr, qr) > 1e-2 * size:
                break
        sigma = space.direction_space(p)
        ang = set_distance(sigma, space.directions_to(p, q), space.directions_to(p, r))
        out.append(ang - comparison_angle(space.k, pq, pr, qr))
    return np.array(out)


def criterion_2(seed: int) -> CriterionResult:
    rng = _rng(seed, 2)
    recs, ok = [], True
    lo, hi = math.inf, -math.inf
    for space in zoo():
        d = triangle_defects(space, rng)
        recs.append({"space": space.describe(), "min": float(d.min()), "max": float(d.max())})
        ok &= bool(d.min() >= -1e-9 and d.max() <= 1e-4)
        lo, hi = min(lo, d.min()), max(hi, d.max())
    return CriterionResult(2, "small-triangle angle defect", ok, f"defect in [{_fmt(lo)}, {_fmt(hi)}]", recs)


# ---------------------------------------------------------------------------
# 3. first variation vs finite differences
# ---------------------------------------------------------------------------

def tie_clearance(space: ModelSpace, p, q) -> float:
    """Distance from q to the locus where minimal geodesics from p branch
    (and to the singular points); inf when there is no such locus nearby."""
    out = math.inf
    for s in space.special_points():
        out = min(out, space.distance(q, s))
    if isinstance(space, _CircleCone) and not space._full_turn:
        gap = 0.5 * space.angle - abs(space.signed_sep(p[1], q[1]))
        gap = min(max(gap, 0.0), 0.5 * math.pi)
        if isinstance(space, Cone):
            out = min(out, q[0] * math.sin(gap))
        else:
            out = min(out, math.asin(min(1.0, math.sin(q[0]) * math.sin(gap))))
    return out


def variation_errors(space: ModelSpace, rng, h: float, count: int = 1000) -> np.ndarray:
    top = min(space.diameter, 3.5)
    errs = []
    while len(errs) < count:
        p, q = space.random_points(rng, 2)
        d = space.distance(p, q)
        if not 0.3 <= d <= top - 0.3 or tie_clearance(space, p, q) < 20 * h:
            continue
        eta = space.direction_space(q).random(rng, 1)[0]
        errs.append(abs(dist_derivative(space, p, q, eta) - finite_difference(space, p, q, eta, h)))
    return np.array(errs)


def criterion_3(seed: int) -> CriterionResult:
    rng = _rng(seed, 3)
    recs, ok, ratio = [], True, 0.0
    for space in zoo():
        for h in (1e-3, 1e-4):
            e = variation_errors(space, rng, h)
            recs.append({"space": space.describe(), "h": h, "max_error": float(e.max())})
            ok &= bool(e.max() <= 5 * h)
            ratio = max(ratio, float(e.max()) / h)
    return CriterionResult(3, "first variation vs finite differences", ok, f"max error/h {ratio:.3f} (limit 5)", recs)


# ---------------------------------------------------------------------------
# 4. equivalence matrix
# ---------------------------------------------------------------------------

def equivalence_rows(seed_list=EQUIVALENCE_SEEDS, budget: int = BUDGET, catalog=EQUIVALENCE_CATALOG):
    rows = []
    for name, expected in catalog:
        sc = load_scene(name)
        for s in seed_list:
            reps = run_quasiconvex_checks(sc.space, sc.subset(), budget, s)
            rows.append((name, s, expected, reps))
    return rows


def criterion_4(seed: int) -> CriterionResult:
    recs, ok, bad = [], True, []
    for name, s, expected, reps in equivalence_rows():
        binding = {r.verdict for r in reps if r.verdict != "suspect"}
        agree = len(binding) == 1 and binding == {expected}
        ok &= agree
        if not agree:
            bad.append(f"{name}/seed{s}")
        recs.extend(r.to_record() for r in reps)
    n = len(EQUIVALENCE_CATALOG) * len(EQUIVALENCE_SEEDS)
    summary = f"{n - len(bad)}/{n} (subset, seed) rows agree with the expected verdict"
    if bad:
        summary += "; disagree: " + ", ".join(bad)
    return CriterionResult(4, "equivalence matrix", ok, summary, recs)


# ---------------------------------------------------------------------------
# 5. extremality
# ---------------------------------------------------------------------------

APEX_THETAS = (0.5 * math.pi, 0.75 * math.pi, math.pi, math.pi + 9e-4, math.pi + 1.1e-3,
               1.25 * math.pi, 1.5 * math.pi)


def criterion_5(seed: int) -> CriterionResult:
    recs, ok = [], True
    for th in APEX_THETAS:
        sp = Cone(th)
        r = check_extremal(sp, FinitePoints(sp, [[0.0, 0.0]], "apex"), BUDGET, seed)
        want = "pass" if th <= math.pi + 1e-3 else "fail"
        ok &= r.verdict == want
        recs.append(r.to_record())
    sc = load_scene("sphere_greatcircle")
    qc = run_quasiconvex_checks(sc.space, sc.subset(), BUDGET, seed)
    ex = check_extremal(sc.space, sc.subset(), BUDGET, seed)
    ok &= all(r.verdict == "pass" for r in qc) and ex.verdict == "fail"
    recs.extend(r.to_record() for r in qc)
    recs.append(ex.to_record())
    return CriterionResult(5, "extremality", ok,
                           "apex passes iff theta <= pi + 1e-3; great circle quasi-convex, not extremal", recs)


# ---------------------------------------------------------------------------
# 6. gradient flow accuracy on the sphere
# ---------------------------------------------------------------------------

def meridian_error(space: Sphere, p, r, h: float) -> tuple[float, object]:
    """Hausdorff distance between the traced gradient curve of dist_p from r
    and the analytic arc from r to the antipode of p."""
    c = gradient_curve(space, p, r, FlowConfig(step=h, max_steps=int(4 / h)))
    a0 = space.distance(p, r)
    u = r - (r @ p) * p
    u /= np.linalg.norm(u)
    s = np.linspace(a0, math.pi, max(2000, int(20 * (math.pi - a0) / h)))
    arc = np.cos(s)[:, None] * p + np.sin(s)[:, None] * u
    return hausdorff_points(space, c.points, arc), c


def criterion_6(seed: int) -> CriterionResult:
    rng = _rng(seed, 6)
    sp = Sphere(2, 1.0)
    recs, ok = [], True
    errs = {1e-2: 0.0, 1e-3: 0.0}
    for _ in range(3):
        p, r = sp.random_points(rng, 2)
        for h in errs:
            e, c = meridian_error(sp, p, r, h)
            errs[h] = max(errs[h], e)
            ok &= bool(e < 10 * h) and c.terminal_reason == "stationary"
            recs.append({"p": p.tolist(), "r": r.tolist(), "h": h, "hausdorff": e, "samples": len(c)})
    ratio = errs[1e-2] / max(errs[1e-3], 1e-300)
    recs.append({"error_ratio": ratio})
    return CriterionResult(6, "gradient flow accuracy", ok,
                           f"Hausdorff {_fmt(errs[1e-2])} (h=1e-2), {_fmt(errs[1e-3])} (h=1e-3), ratio {ratio:.1f}",
                           recs)


# ---------------------------------------------------------------------------
# 7. gradient curves of dist_z1 on spindles end at z2
# ---------------------------------------------------------------------------

def criterion_7(seed: int, count: int = 100, h: float = 1e-2) -> CriterionResult:
    rng = _rng(seed, 7)
    recs, ok, worst = [], True, 0.0
    for L in (0.5 * math.pi, math.pi, 2 * math.pi):
        sp = Spindle(L)
        cfg = FlowConfig(step=h, max_steps=int(2 * math.pi / h))
        gaps = []
        for x in sp.random_points(rng, count):
            if min(x[0], math.pi - x[0]) < 1e-6:
                continue
            c = gradient_curve(sp, sp.z1(), x, cfg)
            gaps.append(sp.distance(c.end, sp.z2()))
        g = float(max(gaps))
        worst = max(worst, g)
        ok &= g < 10 * h and len(gaps) == count
        recs.append({"length": L, "curves": len(gaps), "max_end_gap": g})
    return CriterionResult(7, "spindle flow to the far pole", ok, f"max end gap {_fmt(worst)} (limit {10 * h})", recs)


# ---------------------------------------------------------------------------
# 8. fixed point sets
# ---------------------------------------------------------------------------

def criterion_8(seed: int) -> CriterionResult:
    recs, ok, n = [], True, 0
    for name in ("fixed_sphere", "fixed_plane", "fixed_cone", "fixed_spindle"):
        sc = load_scene(name)
        for g in sc.isometries.values():
            r = verify_fixed_point_set(sc.space, g, BUDGET, seed, points=50)
            ok &= r.verdict == "pass"
            n += 1
            recs.append(r.to_record())
    return CriterionResult(8, "fixed point sets", ok, f"{sum(r['verdict'] == 'pass' for r in recs)}/{n} isometries pass",
                           recs)


# ---------------------------------------------------------------------------
# 9. intersections
# ---------------------------------------------------------------------------

def intersection_pairs():
    for kind, entries in QC_SUBSETS.items():
        loaded = [(load_scene(s), k) for s, k in entries]
        for (a, ka), (b, kb) in combinations(loaded, 2):
            yield a.space, a.subset(ka), b.subset(kb)
        a, ka = loaded[0]
        yield a.space, a.subset(ka), a.subset(ka)


def criterion_9(seed: int) -> CriterionResult:
    recs, ok = [], True
    for space, F, G in intersection_pairs():
        r = verify_intersection(space, F, G, BUDGET, seed)
        ok &= r.verdict == "pass"
        recs.append(r.to_record())
    return CriterionResult(9, "intersections", ok, f"{sum(r['verdict'] == 'pass' for r in recs)}/{len(recs)} pairs pass",
                           recs)


# ---------------------------------------------------------------------------
# 10. joining curves on the great circle
# ---------------------------------------------------------------------------

def criterion_10(seed: int) -> CriterionResult:
    sc = load_scene("sphere_greatcircle")
    sp, F = sc.space, sc.subset()
    eps = estimate_join_epsilon(sp, BUDGET, seed)["epsilon"]
    rng = _rng(seed, 10)
    recs, ok = [], True
    for a in rng.uniform(0.0, 2 * math.pi, size=3):
        for d in (0.05, 0.1):
            p = np.array([math.cos(a), 0.0, math.sin(a)])
            q = np.array([math.cos(a + d), 0.0, math.sin(a + d)])
            c = join_in_subset(sp, F, p, q, eps)
            length = c.meta["length"]
            good = abs(length - d) <= 1e-3 and length <= d / eps
            ok &= good
            recs.append({"arc": d, "length": length, "bound": d / eps, "epsilon": eps, "ok": good})
    worst = max(abs(r["length"] - r["arc"]) for r in recs)
    return CriterionResult(10, "joining bound", ok, f"epsilon {eps}, max |length - arc| {_fmt(worst)}", recs)


# ---------------------------------------------------------------------------
# 11. tangent curves
# ---------------------------------------------------------------------------

TANGENT_SUBSETS = [e for group in QC_SUBSETS.values() for e in group] + [("spindle_tilted", "F")]


def criterion_11(seed: int, h: float = 1e-3, bases: int = 2) -> CriterionResult:
    rng = _rng(seed, 11)
    cfg = FlowConfig(step=h, max_steps=int(0.12 / h))
    recs, ok, curves = [], True, 0
    for name, key in TANGENT_SUBSETS:
        sc = load_scene(name)
        sp, F = sc.space, sc.subset(key)
        base = [s for s in F.special_points() if F.contains(s)] + list(F.sample(rng, bases))
        for p in base:
            T = tangent_cone_estimate(sp, F, p)
            if T.is_empty or not T.is_finite:
                continue
            for xi in T.pts:
                c = tangent_curve(sp, F, p, xi, cfg, deltas=(0.1, 0.01))
                rungs = c.meta["ladder"]
                good = all(r["ok"] for r in rungs) and c.meta["max_member_distance"] <= 1e-8
                ok &= good
                curves += 1
                recs.append({"subset": F.description, "p": np.asarray(p).tolist(), "xi": np.asarray(xi).tolist(),
                             "ladder": rungs, "max_member_distance": c.meta["max_member_distance"], "ok": good})
    return CriterionResult(11, "tangent curves", ok, f"{sum(r['ok'] for r in recs)}/{curves} curves within the ladder",
                           recs)


# ---------------------------------------------------------------------------
# 12. determinism
# ---------------------------------------------------------------------------

CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}
DETERMINISM_SEEDS = (1, 2, 3)


def suite_text(results) -> str:
    lines = [r.line() for r in results]
    for r in results:
        for rec in r.records:
            lines.append(json.dumps({"criterion": r.number, **rec} if "criterion" not in rec
                                    else {"acceptance": r.number, **rec}))
    return "\n".join(lines) + "\n"


def run_criteria(seed: int, numbers=None, progress=None) -> list[CriterionResult]:
    out = []
    for n in sorted(numbers or CRITERIA):
        res = CRITERIA[n](seed)
        if progress:
            progress(res)
        out.append(res)
    return out


def criterion_12(seed: int, first: list[CriterionResult] | None = None, progress=None) -> CriterionResult:
    """Rerun criteria 1-11 at ``seed`` (byte comparison) and at the other
    seeds of {1, 2, 3} (verdict comparison)."""
    first = first if first is not None else run_criteria(seed)
    again = run_criteria(seed)
    same = suite_text(first) == suite_text(again)
    verdicts = {seed: [r.passed for r in first]}
    for s in DETERMINISM_SEEDS:
        if s not in verdicts:
            verdicts[s] = [r.passed for r in run_criteria(s)]
            if progress:
                progress(s)
    agree = len({tuple(v) for v in verdicts.values()}) == 1
    rec = {"byte_identical": same, "verdicts": {str(k): v for k, v in sorted(verdicts.items())}}
    return CriterionResult(12, "determinism", same and agree,
                           f"byte-identical rerun: {same}; verdicts equal over seeds {sorted(verdicts)}: {agree}", [rec])


def run_suite(seed: int = 1, progress=None) -> list[CriterionResult]:
    first = run_criteria(seed, progress=progress)
    last = criterion_12(seed, first)
    if progress:
        progress(last)
    return first + [last]
