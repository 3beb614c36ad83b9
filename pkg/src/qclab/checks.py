"""Falsification checkers for quasi-convexity, extremality and the
structural statements (intersections, suspensions, fixed point sets).

A ``pass`` verdict means that no violating configuration turned up within
the sampling budget.  ``fail`` carries a witness that re-evaluates to a
violation larger than ``FAIL_MARGIN``; ``suspect`` marks violations that
only appear against a numerically estimated tangent cone.
"""
from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from .directions import HALF_PI, DirectionSet, farthest_direction
from .flow import FlowConfig, gradient_curve
from .spaceform import comparison_angles
from .spaces import Cone, Euclidean, ModelSpace, Spindle
from .subsets import SubsetSpec, intersect
from .tangent import TangentConeConfig, tangent_cone_estimate

FAIL_MARGIN = 1e-6
ANGLE_TOL = 1e-9
EXTREMAL_DIAMETER_TOL = 5e-4
SUSPENSION_TOL = 1e-6
TANGENT_MATCH_TOL = 1e-2
DEFAULT_FLOW = FlowConfig(step=1e-2, max_steps=400)

QC_CRITERIA = ("def01", "theoremA", "corollaryC", "prop21", "gradient")


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class CheckReport:
    criterion: str
    verdict: str
    subset: str
    space: dict
    budget: int
    seed: int
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_record(self) -> dict:
        return {
            "criterion": self.criterion,
            "verdict": self.verdict,
            "subset": self.subset,
            "space": _plain(self.space),
            "budget": self.budget,
            "seed": self.seed,
            "witness": _plain(self.witness),
            "details": _plain(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())


def _rng(seed: int, criterion: str, F: SubsetSpec) -> np.random.Generator:
    tag = json.dumps(_plain(F.describe()), sort_keys=True)
    return np.random.default_rng([int(seed), zlib.crc32(criterion.encode()), zlib.crc32(tag.encode())])


def _report(criterion, verdict, space, F, budget, seed, witness=None, **details):
    return CheckReport(criterion, verdict, F.description, space.describe(), budget, seed, witness, details)


def _too_small(F: SubsetSpec) -> bool:
    pts = F.finite_points
    return F.is_empty or (pts is not None and len(pts) <= 1)


def _member_samples(space: ModelSpace, F: SubsetSpec, rng, count: int) -> np.ndarray:
    """Points of F; a quarter of them at or next to the singular points of F
    (apex, poles, crossings), which carry the interesting geometry."""
    special = [s for s in F.special_points() if F.contains(s)]
    n_sp = count // 4 if special else 0
    out = list(F.sample(rng, count - n_sp))
    for i in range(n_sp):
        c = special[i % len(special)]
        if i % 2 == 0:
            out.append(np.asarray(c, dtype=np.float64))
        else:
            near = F.sample_near(rng, c, 10.0 ** rng.uniform(-3, -0.5), 2)
            out.append(near[int(rng.integers(len(near)))] if len(near) else np.asarray(c, dtype=np.float64))
    return np.array(out)


def _pairs(space, F, rng, count):
    """(p, r) pairs of distinct points of F; half global, half local."""
    P = _member_samples(space, F, rng, count)
    R_glob = _member_samples(space, F, rng, count)
    out = []
    for i, p in enumerate(P):
        r = None
        if i % 2 == 1:
            near = F.sample_near(rng, p, 10.0 ** rng.uniform(-3, 0), 4)
            near = [x for x in near if space.distance(p, x) > 1e-9]
            if near:
                r = near[int(rng.integers(len(near)))]
        if r is None:
            r = R_glob[i]
        if space.distance(p, r) > 1e-9:
            out.append((p, r))
    return out


def _tangent(space, F, p):
    t = tangent_cone_estimate(space, F, p)
    return t, t.estimated


def _probe_dirs(sigma, up: DirectionSet, rng, extra: int = 3):
    dirs = []
    if not up.is_empty and up.kind != "full":
        dirs.append(farthest_direction(sigma, up).direction)
    dirs.extend(list(sigma.random(rng, extra)))
    return sigma.as_array(dirs)


def _set_points(T: DirectionSet):
    return T.discretize(1e-3)


# ---------------------------------------------------------------------------
# min-point criterion
# ---------------------------------------------------------------------------

def def01_margin(space, F, q, p, r) -> float:
    """Excess of the comparison angle at p over pi/2 (p a nearest point to q)."""
    a = comparison_angles(space.k, space.distance(p, q), space.distance(p, r), space.distance(q, r))
    return float(a) - HALF_PI


def check_def01(space: ModelSpace, F: SubsetSpec, budget: int = 2000, seed: int = 0) -> CheckReport:
    crit = "def01"
    if _too_small(F):
        return _report(crit, "pass", space, F, budget, seed, convention="empty or single point")
    rng = _rng(seed, crit, F)
    centers = _member_samples(space, F, rng, budget)
    rmax = min(1.0, 0.45 * space.diameter)
    worst = -math.inf
    tested = 0
    for c in centers:
        q = space.random_near(rng, c, 10.0 ** rng.uniform(-3, math.log10(rmax)), 1)[0]
        dq = F.distance_to(q)
        if dq <= 1e-9:
            continue
        rs = np.concatenate([x for x in (F.sample(rng, 6), *(
            [np.array(F.special_points())] if F.special_points() else [])) if len(x)])
        for p in F.nearest(q):
            near = F.sample_near(rng, p, 10.0 ** rng.uniform(-3, 0), 6)
            R = np.concatenate([rs, near]) if len(near) else rs
            pr = space.distances(R, np.broadcast_to(p, R.shape))
            R, pr = R[pr > 1e-9], pr[pr > 1e-9]
            if len(R) == 0:
                continue
            qr = space.distances(R, np.broadcast_to(q, R.shape))
            pq = space.distance(p, q)
            ang = comparison_angles(space.k, np.full(len(R), pq), pr, qr)
            tested += len(R)
            i = int(np.nanargmax(ang))
            m = float(ang[i]) - HALF_PI
            worst = max(worst, m)
            if m > FAIL_MARGIN:
                w = {"q": q, "p": p, "r": R[i], "angle": float(ang[i]), "margin": m}
                return _report(crit, "fail", space, F, budget, seed, w, triples=tested)
    return _report(crit, "pass", space, F, budget, seed, triples=tested, max_excess=worst)


# ---------------------------------------------------------------------------
# pointwise direction criterion (and its strong form)
# ---------------------------------------------------------------------------

def theoremA_margin(sigma, up: DirectionSet, T: DirectionSet, eta) -> tuple[float, float]:
    """(violation of the right-angle bound, violation of its strong form
    with zeta replaced by the whole set Up_p^r) at eta; a positive value
    means no admissible (zeta, xi) exists."""
    eta = sigma.as_array([eta])
    if up.kind == "full":
        return -1.0, -1.0
    Z = _set_points(up)
    d_ez = sigma.pairwise(eta, Z)[0]
    d_eU = float(d_ez.min())
    if T.is_empty:
        m = -float(np.cos(d_ez).max())
        return m, -math.cos(d_eU)
    X = _set_points(T)
    d_ex = sigma.pairwise(eta, X)[0]
    ok = d_ex <= HALF_PI + ANGLE_TOL
    if not np.any(ok):
        v = float(d_ex.min() - HALF_PI)
        return v, v
    d_zx = sigma.pairwise(Z, X)
    val = np.cos(d_ez)[:, None] - np.cos(d_ex)[None, :] * np.cos(d_zx)
    main = -float(val[:, ok].max())
    d_Ux = d_zx.min(axis=0)
    rem = -float((math.cos(d_eU) - np.cos(d_ex) * np.cos(d_Ux))[ok].max())
    return main, rem


def check_theoremA(space: ModelSpace, F: SubsetSpec, budget: int = 2000, seed: int = 0) -> CheckReport:
    crit = "theoremA"
    if _too_small(F):
        return _report(crit, "pass", space, F, budget, seed, convention="empty or single point")
    rng = _rng(seed, crit, F)
    remark_ok = True
    worst = -math.inf
    n = 0
    for p, r in _pairs(space, F, rng, budget):
        sigma = space.direction_space(p)
        up = space.directions_to(p, r)
        T, est = _tangent(space, F, p)
        for eta in _probe_dirs(sigma, up, rng):
            m, rem = theoremA_margin(sigma, up, T, eta)
            n += 1
            worst = max(worst, m)
            remark_ok &= rem <= FAIL_MARGIN
            if m > FAIL_MARGIN:
                w = {"p": p, "r": r, "eta": eta, "margin": m, "estimated_tangent": est}
                return _report(crit, "suspect" if est else "fail", space, F, budget, seed, w,
                               configurations=n, strong_form_holds=bool(remark_ok))
    return _report(crit, "pass", space, F, budget, seed, configurations=n,
                   max_violation=worst, strong_form_holds=bool(remark_ok))


# ---------------------------------------------------------------------------
# farthest-direction criterion
# ---------------------------------------------------------------------------

def corollaryC_margin(sigma, up: DirectionSet, T: DirectionSet, estimated: bool = False):
    """(margin, farthest) where a positive margin is a violation."""
    if up.kind == "full":
        return -1.0, None
    far = farthest_direction(sigma, up)
    excess = far.value - HALF_PI
    if excess <= ANGLE_TOL:
        return -excess, far
    if T.is_empty:
        return excess, far
    d = float(T.dist_to([far.direction])[0])
    tol = TANGENT_MATCH_TOL if estimated else 0.0
    return d - tol, far


def check_corollaryC(space: ModelSpace, F: SubsetSpec, budget: int = 2000, seed: int = 0) -> CheckReport:
    crit = "corollaryC"
    if _too_small(F):
        return _report(crit, "pass", space, F, budget, seed, convention="empty or single point")
    rng = _rng(seed, crit, F)
    n = 0
    for p, r in _pairs(space, F, rng, budget):
        sigma = space.direction_space(p)
        up = space.directions_to(p, r)
        T, est = _tangent(space, F, p)
        m, far = corollaryC_margin(sigma, up, T, est)
        n += 1
        if m > FAIL_MARGIN:
            w = {"p": p, "r": r, "xi": far.direction, "value": far.value, "margin": m,
                 "estimated_tangent": est}
            return _report(crit, "suspect" if est else "fail", space, F, budget, seed, w, configurations=n)
    return _report(crit, "pass", space, F, budget, seed, configurations=n)


# ---------------------------------------------------------------------------
# descent and ascent directions inside Sigma_p F
# ---------------------------------------------------------------------------

def prop21_margins(sigma, up: DirectionSet, T: DirectionSet, eta) -> dict:
    """Violations (positive = violated) of: some xi in Sigma_p F descends at
    least as fast as eta (``descent``), the same xi also close to eta
    (``descent_close``), and some xi ascends at that rate (``ascent``)."""
    c = -math.cos(float(up.dist_to([eta])[0]))
    if c <= ANGLE_TOL:
        return {"c": c, "descent": -1.0, "descent_close": -1.0, "ascent": -1.0}
    if T.is_empty:
        return {"c": c, "descent": c, "descent_close": c, "ascent": c}
    X = _set_points(T)
    d_Ux = up.dist_to(X)
    d_ex = sigma.pairwise(sigma.as_array([eta]), X)[0]
    e21 = -np.cos(d_Ux) - c
    strong = np.minimum(e21, np.cos(d_ex) - c)
    e22 = np.cos(d_Ux) - c
    return {"c": c, "descent": -float(e21.max()), "descent_close": -float(strong.max()), "ascent": -float(e22.max())}


def check_prop21(space: ModelSpace, F: SubsetSpec, budget: int = 2000, seed: int = 0) -> CheckReport:
    crit = "prop21"
    if _too_small(F):
        return _report(crit, "pass", space, F, budget, seed, convention="empty or single point")
    rng = _rng(seed, crit, F)
    n = active = 0
    for p, r in _pairs(space, F, rng, budget):
        sigma = space.direction_space(p)
        up = space.directions_to(p, r)
        T, est = _tangent(space, F, p)
        for eta in _probe_dirs(sigma, up, rng):
            m = prop21_margins(sigma, up, T, eta)
            n += 1
            active += m["c"] > ANGLE_TOL
            worst = max(m["descent"], m["descent_close"], m["ascent"])
            if worst > FAIL_MARGIN:
                w = {"p": p, "r": r, "eta": eta, "margin": worst, **m, "estimated_tangent": est}
                return _report(crit, "suspect" if est else "fail", space, F, budget, seed, w,
                               configurations=n, active=int(active))
    return _report(crit, "pass", space, F, budget, seed, configurations=n, active=int(active))


# ---------------------------------------------------------------------------
# invariance under gradient flow
# ---------------------------------------------------------------------------

def gradient_escape(space, F, p, r, cfg: FlowConfig):
    """First sample of the gradient curve of dist_p from r that leaves F
    by more than 10 h (plus the fail margin), as (index, point, distance)."""
    c = gradient_curve(space, p, r, cfg)
    tol = 10.0 * cfg.step + FAIL_MARGIN
    for i, x in enumerate(c.points):
        d = F.distance_to(x)
        if d > tol:
            return i, x, d, c
    return None, None, None, c


def check_gradient_invariance(space: ModelSpace, F: SubsetSpec, budget: int = 2000, seed: int = 0,
                              cfg: FlowConfig = DEFAULT_FLOW) -> CheckReport:
    crit = "gradient"
    if _too_small(F):
        return _report(crit, "pass", space, F, budget, seed, convention="needs two points")
    rng = _rng(seed, crit, F)
    count = max(8, budget // 50)
    pairs = _pairs(space, F, rng, count)
    for p, r in pairs:
        i, x, d, c = gradient_escape(space, F, p, r, cfg)
        if i is not None:
            w = {"p": p, "r": r, "sample": i, "point": x, "distance": d,
                 "margin": d - 10.0 * cfg.step, "step": cfg.step, "max_steps": cfg.max_steps}
            return _report(crit, "fail", space, F, budget, seed, w, curves=len(pairs))
    return _report(crit, "pass", space, F, budget, seed, curves=len(pairs), step=cfg.step)


CHECKERS = {
    "def01": check_def01,
    "theoremA": check_theoremA,
    "corollaryC": check_corollaryC,
    "prop21": check_prop21,
    "gradient": check_gradient_invariance,
}


def run_quasiconvex_checks(space, F, budget=2000, seed=0, criteria=QC_CRITERIA) -> list[CheckReport]:
    return [CHECKERS[c](space, F, budget, seed) for c in criteria]


# ---------------------------------------------------------------------------
# extremality
# ---------------------------------------------------------------------------

def extremal_margin(sigma, T: DirectionSet, eta, zeta) -> float:
    E = sigma.as_array([eta])
    Z = sigma.as_array([zeta])
    d_ez = float(sigma.pairwise(E, Z)[0, 0])
    if T.is_empty:
        return -math.cos(d_ez)
    X = _set_points(T)
    d_ex = sigma.pairwise(E, X)[0]
    d_zx = sigma.pairwise(Z, X)[0]
    ok = d_ex <= HALF_PI + ANGLE_TOL
    if not np.any(ok):
        return float(d_ex.min() - HALF_PI)
    return -float((math.cos(d_ez) - np.cos(d_ex) * np.cos(d_zx))[ok].max())


def _extremal_grid(sigma, T, rng, n=24):
    g = list(sigma.grid(n))
    if not T.is_empty and T.is_finite and sigma.kind != "sphere":
        for x in T.pts:
            g.extend([x + HALF_PI, x - HALF_PI, x + math.pi])
    g.extend(list(sigma.random(rng, 8)))
    return sigma.as_array([sigma.canonical(x) for x in g])


def check_extremal(space: ModelSpace, F: SubsetSpec, budget: int = 2000, seed: int = 0) -> CheckReport:
    crit = "extremal"
    if F.is_empty:
        return _report(crit, "pass", space, F, budget, seed, convention="empty set")
    rng = _rng(seed, crit, F)
    base = _member_samples(space, F, rng, max(8, budget // 50))
    for p in base:
        sigma = space.direction_space(p)
        T, est = _tangent(space, F, p)
        if T.is_empty:
            excess = sigma.diameter - HALF_PI
            if excess > EXTREMAL_DIAMETER_TOL:
                E = sigma.as_array(sigma.grid(4096))
                D = sigma.pairwise(E[:1], E)[0]
                j = int(np.argmax(D))
                w = {"p": p, "eta": E[0], "zeta": E[j], "margin": float(-math.cos(D[j])),
                     "diameter": sigma.diameter, "estimated_tangent": est}
                return _report(crit, "suspect" if est else "fail", space, F, budget, seed, w)
            continue
        G = _extremal_grid(sigma, T, rng)
        X = _set_points(T)
        D_gg = sigma.pairwise(G, G)
        D_gx = sigma.pairwise(G, X)
        ok = D_gx <= HALF_PI + ANGLE_TOL
        val = np.cos(D_gg)[:, :, None] - np.cos(D_gx)[:, None, :] * np.cos(D_gx)[None, :, :]
        val = np.where(ok[:, None, :], val, -np.inf)
        best = val.max(axis=2)
        i, j = np.unravel_index(int(np.argmin(best)), best.shape)
        m = -float(best[i, j]) if np.isfinite(best[i, j]) else float(D_gx[i].min() - HALF_PI)
        if m > FAIL_MARGIN:
            w = {"p": p, "eta": G[i], "zeta": G[j], "margin": m, "estimated_tangent": est}
            return _report(crit, "suspect" if est else "fail", space, F, budget, seed, w)
    return _report(crit, "pass", space, F, budget, seed, base_points=len(base))


# ---------------------------------------------------------------------------
# intersections
# ---------------------------------------------------------------------------

def verify_intersection(space: ModelSpace, F: SubsetSpec, G: SubsetSpec, budget: int = 2000,
                        seed: int = 0, points: int = 10) -> CheckReport:
    crit = "intersection"
    H = intersect(F, G)
    name = f"{F.description}&{G.description}"
    base = {"F": F.description, "G": G.description, "intersection": _plain(H.describe())}

    def rep(verdict, witness=None, **kw):
        return CheckReport(crit, verdict, name, space.describe(), budget, seed, witness, {**base, **kw})

    if H.is_empty:
        return rep("pass", convention="empty intersection")
    sub = run_quasiconvex_checks(space, H, budget, seed)
    verdicts = {r.criterion: r.verdict for r in sub}
    for r in sub:
        if not r.passed:
            return rep(r.verdict, r.witness, checks=verdicts, failing=r.criterion)
    rng = _rng(seed, crit, H)
    samples = list(H.special_points()) + list(H.sample(rng, points))
    samples = [s for s in samples if H.contains(s, 1e-8)][:points]
    worst = 0.0
    for p in samples:
        est = tangent_cone_estimate(space, H, p, use_analytic=False,
                                    cfg=TangentConeConfig(seed=int(rng.integers(2 ** 31))))
        both = tangent_cone_estimate(space, F, p).intersect(tangent_cone_estimate(space, G, p))
        gap = est.hausdorff(both)
        worst = max(worst, gap)
        if gap > TANGENT_MATCH_TOL:
            w = {"p": p, "estimate": est.describe(), "expected": both.describe(), "hausdorff": gap}
            return rep("suspect", w, checks=verdicts)
    return rep("pass", checks=verdicts, tangent_points=len(samples), tangent_gap=worst)


# ---------------------------------------------------------------------------
# suspension structure
# ---------------------------------------------------------------------------

def verify_suspension_structure(space: Spindle, F: SubsetSpec, budget: int = 2000, seed: int = 0,
                                cfg: FlowConfig = DEFAULT_FLOW) -> CheckReport:
    crit = "suspension"
    if not isinstance(space, Spindle):
        raise TypeError("suspension structure is checked on spindles")
    rng = _rng(seed, crit, F)
    pts = np.array(list(F.sample(rng, max(32, budget // 10))) + [s for s in F.special_points() if F.contains(s)])
    if np.all(np.abs(pts[:, 0] - HALF_PI) <= SUSPENSION_TOL):
        return _report(crit, "pass", space, F, budget, seed, branch="equator")
    # candidate poles: special points plus endpoints of gradient flows inside F
    cand = [s for s in F.special_points() if F.contains(s)]
    off = [x for x in pts if abs(x[0] - HALF_PI) > SUSPENSION_TOL]
    for i in range(min(8, len(off))):
        x, y = off[i], pts[(i * 7 + 3) % len(pts)]
        if space.distance(x, y) > 1e-9:
            cand.append(x)
            cand.append(gradient_curve(space, x, y, cfg).end)
    pair = None
    for i in range(len(cand)):
        for j in range(i + 1, len(cand)):
            if space.distance(cand[i], cand[j]) >= math.pi - SUSPENSION_TOL:
                pair = (cand[i], cand[j])
                break
        if pair:
            break
    if pair is None:
        return _report(crit, "fail", space, F, budget, seed,
                       {"reason": "no pole pair at distance pi", "margin": 1.0}, branch="suspension")
    a, b = pair
    checked = 0
    middle: list = []
    for x in pts[: max(16, budget // 20)]:
        if min(space.distance(a, x), space.distance(b, x)) <= 1e-9:
            continue
        ds = space.directions_to(a, x)
        for d in (ds.pts if ds.is_finite else ds.discretize(0.5)):
            for t in np.linspace(0.0, math.pi, 33):
                z = space.exp_step(a, d, t)
                dz = F.distance_to(z)
                checked += 1
                if dz > SUSPENSION_TOL:
                    w = {"poles": [a, b], "through": x, "point": z, "distance": dz, "margin": dz}
                    return _report(crit, "fail", space, F, budget, seed, w, branch="suspension")
            m = space.exp_step(a, d, HALF_PI)
            if all(space.distance(m, y) > 1e-6 for y in middle):
                middle.append(m)
    return _report(crit, "pass", space, F, budget, seed, branch="suspension", poles=[a, b],
                   geodesic_samples=checked, middle=middle[:16], middle_count=len(middle))


def verify_fixed_point_set(space: ModelSpace, gamma, budget: int = 2000, seed: int = 0,
                           points: int = 50) -> CheckReport:
    """Fixed point set of ``gamma``: the five checkers, plus the numerical
    tangent cone against the fixed directions of the induced map on Sigma_p."""
    from .subsets import fixed_point_set, induced_fixed_directions

    crit = "fixed"
    F = fixed_point_set(space, gamma)
    sub = run_quasiconvex_checks(space, F, budget, seed)
    verdicts = {r.criterion: r.verdict for r in sub}
    for r in sub:
        if not r.passed:
            return _report(crit, r.verdict, space, F, budget, seed, r.witness,
                           isometry=gamma.name, checks=verdicts, failing=r.criterion)
    if F.is_empty:
        return _report(crit, "pass", space, F, budget, seed, isometry=gamma.name, checks=verdicts)
    rng = _rng(seed, crit, F)
    base = _member_samples(space, F, rng, points)
    worst = 0.0
    for p in base:
        est = tangent_cone_estimate(space, F, p, use_analytic=False,
                                    cfg=TangentConeConfig(seed=int(rng.integers(2 ** 31))))
        fixed = induced_fixed_directions(space, gamma, p)
        gap = est.hausdorff(fixed)
        worst = max(worst, gap)
        if gap > TANGENT_MATCH_TOL:
            w = {"p": p, "estimate": est.describe(), "expected": fixed.describe(), "hausdorff": gap}
            return _report(crit, "suspect", space, F, budget, seed, w, isometry=gamma.name, checks=verdicts)
    return _report(crit, "pass", space, F, budget, seed, isometry=gamma.name, checks=verdicts,
                   base_points=len(base), tangent_gap=worst)


# ---------------------------------------------------------------------------
# the joining constant
# ---------------------------------------------------------------------------

EPS_LADDER = (0.99, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01)


def _max_derivative(space, base, at) -> float:
    far = farthest_direction(space.direction_space(at), space.directions_to(at, base))
    return -math.cos(far.value)


def _eps_anchor(space: ModelSpace, rng, count: int) -> np.ndarray:
    if isinstance(space, Cone):
        r = rng.uniform(0.5, 2.0, size=count)
        phi = rng.uniform(0.0, space.theta, size=count)
        return np.stack([r, phi], axis=1)
    if isinstance(space, Euclidean):
        v = rng.normal(size=(count, space.dim))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return v * rng.uniform(0.0, 1.0, size=(count, 1))
    pts = list(space.random_points(rng, count))
    for i, s in enumerate(space.special_points()):
        if i < count:
            pts[i] = s
    return np.array(pts)


def estimate_join_epsilon(space: ModelSpace, budget: int = 2000, seed: int = 0) -> dict:
    """Largest ladder value eps such that every sampled pair with |pq| < eps^2
    has max dist_p'|_q > eps or max dist_q'|_p > eps."""
    rng = np.random.default_rng([int(seed), zlib.crc32(b"join_epsilon")])
    count = max(50, budget // 10)
    for eps in EPS_LADDER:
        anchors = _eps_anchor(space, rng, count)
        ok = True
        worst = math.inf
        for p in anchors:
            p = space.point(p)
            q = space.random_near(rng, p, eps * eps, 1)[0]
            if space.distance(p, q) <= 1e-12:
                continue
            a = _max_derivative(space, p, q)
            b = _max_derivative(space, q, p)
            worst = min(worst, max(a, b))
            if max(a, b) <= eps:
                ok = False
                break
        if ok:
            return {"epsilon": eps, "pairs": count, "min_best_derivative": worst}
    raise RuntimeError("no trial epsilon survived; raise the budget")


# ---------------------------------------------------------------------------
# witness re-evaluation
# ---------------------------------------------------------------------------

def witness_margin(space: ModelSpace, F: SubsetSpec, report: CheckReport) -> float:
    """Recompute the violation recorded in a fail witness from scratch."""
    w = {k: (np.asarray(v) if isinstance(v, list) else v) for k, v in report.witness.items()}
    c = report.criterion
    if c == "def01":
        q, p, r = w["q"], w["p"], w["r"]
        if abs(space.distance(q, p) - F.distance_to(q)) > 1e-9 or not F.contains(r):
            return -math.inf
        return def01_margin(space, F, q, p, r)
    if c in ("theoremA", "corollaryC", "prop21"):
        p, r = w["p"], w["r"]
        sigma = space.direction_space(p)
        up = space.directions_to(p, r)
        T, est = _tangent(space, F, p)
        if c == "theoremA":
            return theoremA_margin(sigma, up, T, w["eta"])[0]
        if c == "corollaryC":
            return corollaryC_margin(sigma, up, T, est)[0]
        m = prop21_margins(sigma, up, T, w["eta"])
        return max(m["descent"], m["descent_close"], m["ascent"])
    if c == "gradient":
        cfg = FlowConfig(step=float(w["step"]), max_steps=int(w["max_steps"]))
        i, x, d, _ = gradient_escape(space, F, w["p"], w["r"], cfg)
        return -math.inf if i is None else d - 10.0 * cfg.step
    if c == "extremal":
        p = w["p"]
        T, _ = _tangent(space, F, p)
        return extremal_margin(space.direction_space(p), T, w["eta"], w["zeta"])
    raise ValueError(f"no re-evaluation for {c}")
