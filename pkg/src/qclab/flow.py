"""Gradient and radial curves of distance functions, joining curves inside a
subset, and tangent curves of a subset."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .directions import HALF_PI, DirectionSet, farthest_direction, set_distance
from .spaces import ModelSpace
from .subsets import SubsetSpec
from .tangent import tangent_cone_estimate

STATIONARY_TOL = 1e-6


class FlowError(RuntimeError):
    pass


class JoinFailure(FlowError):
    """No endpoint admits a direction of Sigma F with derivative < -epsilon."""


class MembershipViolation(FlowError):
    pass


class NonConvergent(FlowError):
    pass


@dataclass(frozen=True)
class FlowConfig:
    step: float = 1e-2
    angle_tol: float = STATIONARY_TOL
    max_steps: int = 10000
    radial_eps: float = 1e-2
    join_tol: float = 1e-9

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class Curve:
    t: np.ndarray
    points: np.ndarray
    step_size: float
    terminal_reason: str
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def length(self, space: ModelSpace) -> float:
        if len(self.points) < 2:
            return 0.0
        return float(np.sum(space.distances(self.points[:-1], self.points[1:])))

    def at(self, t: float) -> np.ndarray:
        """Sample with the largest parameter <= t (constant past the end)."""
        i = int(np.searchsorted(self.t, t, side="right")) - 1
        return self.points[max(i, 0)]

    def to_table(self, sep: str = ",", labels=None) -> str:
        d = self.points.shape[1]
        labels = labels or [f"x{i}" for i in range(d)]
        buf = io.StringIO()
        buf.write(sep.join(["t", *labels]) + "\n")
        for t, x in zip(self.t, self.points):
            buf.write(sep.join(repr(float(v)) for v in (t, *x)) + "\n")
        return buf.getvalue()


def hausdorff_points(space: ModelSpace, A, B, chunk: int = 512) -> float:
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)

    def directed(X, Y):
        worst = 0.0
        for i in range(0, len(X), chunk):
            D = space.distances(X[i:i + chunk, None, :], Y[None, :, :])
            worst = max(worst, float(D.min(axis=1).max()))
        return worst

    return max(directed(A, B), directed(B, A))


def _golden_max(f, lo, hi, tol=1e-13, iters=200):
    g = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    best = max([(f(a), a), (fc, c), (fd, d), (f(b), b)])
    return best[1], best[0]


def gradient_direction(space: ModelSpace, p, x, tol: float = STATIONARY_TOL):
    """(xi, value, stationary) for the gradient of dist_p at x."""
    sigma = space.direction_space(x)
    far = farthest_direction(sigma, space.directions_to(x, p))
    return far.direction, far.value, far.value <= HALF_PI + tol


def _gradient_step(space, p, x, h, tol):
    xi, value, stationary = gradient_direction(space, p, x, tol)
    if stationary:
        return None, value
    speed = -math.cos(value)
    ell = min(h * speed, space.injectivity_bound(x, xi))
    d0 = space.distance(x, p)
    y = space.exp_step(x, xi, ell)
    gain = space.distance(y, p) - d0
    if gain < 0.5 * ell * speed:
        # the step overshoots a maximum of dist_p along the geodesic
        s, best = _golden_max(lambda s: space.distance(space.exp_step(x, xi, s), p), 0.0, ell)
        y = space.exp_step(x, xi, s)
        gain = best - d0
    if gain <= 1e-14:
        return None, value
    return y, value


def gradient_curve(space: ModelSpace, p, r, cfg: FlowConfig = FlowConfig()) -> Curve:
    """Discrete gradient curve of dist_p starting from r."""
    p = space.point(p)
    x = space.point(r)
    if space.distance(p, x) <= 0.0:
        raise ValueError("gradient curve of dist_p needs a start different from p")
    ts, pts, values = [0.0], [x], []
    reason = "budget"
    for i in range(cfg.max_steps):
        y, value = _gradient_step(space, p, x, cfg.step, cfg.angle_tol)
        values.append(value)
        if y is None:
            reason = "stationary"
            break
        x = y
        ts.append(ts[-1] + cfg.step)
        pts.append(x)
    return Curve(np.array(ts), np.array(pts), cfg.step, reason,
                 {"base": p.tolist(), "final_value": float(values[-1])})


def radial_curve(space: ModelSpace, p, xi, cfg: FlowConfig = FlowConfig()) -> Curve:
    """Radial curve from p in direction xi: the limit of gradient curves of
    dist_p started at exp(p, xi, eps) as eps shrinks."""
    p = space.point(p)
    bound = space.injectivity_bound(p, xi)
    curves, eps_used = [], []
    for e in (cfg.radial_eps, 0.5 * cfg.radial_eps, 0.25 * cfg.radial_eps):
        e = min(e, 0.5 * bound)
        eps_used.append(e)
        curves.append(gradient_curve(space, p, space.exp_step(p, xi, e), cfg))
    gaps = []
    for a in range(3):
        for b in range(a + 1, 3):
            A = curves[a].points[:: max(1, len(curves[a]) // 1500)]
            B = curves[b].points[:: max(1, len(curves[b]) // 1500)]
            gaps.append(hausdorff_points(space, A, B))
    limit = 10.0 * cfg.radial_eps + 2.0 * cfg.step
    if max(gaps) > limit:
        raise NonConvergent(f"radial family spread {max(gaps)} exceeds {limit}")
    fine = curves[-1]
    t = np.concatenate([[0.0], fine.t + eps_used[-1]])
    pts = np.concatenate([p[None, :], fine.points])
    sigma = space.direction_space(p)
    start_dir = space.directions_to(p, pts[1])
    dev = set_distance(sigma, start_dir, DirectionSet.finite(sigma, [xi]))
    return Curve(t, pts, cfg.step, fine.terminal_reason,
                 {"family_spread": float(max(gaps)), "initial_direction_error": float(dev),
                  "eps": eps_used[-1]})


def _tangent_dirs(space, F, x):
    t = tangent_cone_estimate(space, F, x)
    if t.is_empty:
        return t, np.empty(0)
    return t, t.discretize(1e-3)


def _project(space, F, x_raw, h):
    y = F.nearest(x_raw)[0]
    return y, space.distance(x_raw, y)


def join_in_subset(space: ModelSpace, F: SubsetSpec, p, q, epsilon: float,
                   cfg: FlowConfig = FlowConfig()) -> Curve:
    """Join p and q inside F by moving the endpoints toward each other along
    directions of Sigma F that decrease their distance at rate > epsilon."""
    a, b = space.point(p), space.point(q)
    if not (F.contains(a, 1e-8) and F.contains(b, 1e-8)):
        raise MembershipViolation("both endpoints must lie in F")
    if space.distance(a, b) <= 0:
        raise ValueError("join needs two distinct points")
    side = {0: [a], 1: [b]}
    ends = [a, b]
    turn, checks = 0, 0
    for _ in range(cfg.max_steps):
        gap = space.distance(ends[0], ends[1])
        if gap < cfg.join_tol:
            break
        moved = False
        for j in (turn, 1 - turn):
            x, other = ends[j], ends[1 - j]
            tdirs, cand = _tangent_dirs(space, F, x)
            if len(cand) == 0:
                continue
            up = space.directions_to(x, other)
            der = -np.cos(up.dist_to(cand))
            i = int(np.argmin(der))
            if der[i] >= -epsilon:
                continue
            xi = cand[i]
            ell = min(cfg.step, gap, space.injectivity_bound(x, xi))
            for _retry in range(30):
                y, disp = _project(space, F, space.exp_step(x, xi, ell), ell)
                if disp <= 10.0 * ell * ell:
                    break
                ell *= 0.5
            else:
                raise MembershipViolation("projection to F keeps distorting the step")
            moved_by = space.distance(x, y)
            decrease = gap - space.distance(y, other)
            if moved_by <= 0 or decrease <= epsilon * moved_by:
                continue
            checks += 1
            ends[j] = y
            side[j].append(y)
            moved = True
            turn = 1 - j
            break
        if not moved:
            raise JoinFailure(f"no admissible direction at either endpoint (gap {gap})")
    else:
        raise FlowError("join did not converge within max_steps")
    tail = side[1][::-1]
    if space.distance(side[0][-1], tail[0]) == 0.0:
        tail = tail[1:]
    pts = np.array(side[0] + tail)
    seg = space.distances(pts[:-1], pts[1:])
    t = np.concatenate([[0.0], np.cumsum(seg)])
    d0 = space.distance(space.point(p), space.point(q))
    length = float(t[-1])
    return Curve(t, pts, cfg.step, "joined",
                 {"length": length, "epsilon": epsilon, "bound": d0 / epsilon,
                  "steps": checks, "start_gap": d0})


def tangent_curve(space: ModelSpace, F: SubsetSpec, p, xi, cfg: FlowConfig = FlowConfig(),
                  deltas=(0.1, 0.01, 0.001)) -> Curve:
    """Curve in F leaving p tangent to xi in Sigma_p F: the radial curve from
    p in direction xi, projected to F after every step."""
    p = space.point(p)
    sigma = space.direction_space(p)
    tcone = tangent_cone_estimate(space, F, p)
    tol = 1e-2 if tcone.estimated else 1e-6
    if tcone.is_empty or tcone.dist_to([xi])[0] > tol:
        raise MembershipViolation("xi is not a direction of Sigma_p F")
    h = cfg.step
    limit = 10.0 * h * h
    x_raw = space.exp_step(p, xi, min(h, 0.5 * space.injectivity_bound(p, xi)))
    x, disp = _project(space, F, x_raw, h)
    if disp > limit:
        raise MembershipViolation(f"first projection moved {disp} > {limit}")
    ts, pts = [0.0, space.distance(p, x)], [p, x]
    worst_disp = disp
    reason = "budget"
    for _ in range(cfg.max_steps):
        y, _value = _gradient_step(space, p, x, h, cfg.angle_tol)
        if y is None:
            reason = "stationary"
            break
        y, disp = _project(space, F, y, h)
        if disp > limit:
            raise MembershipViolation(f"projection moved {disp} > {limit}")
        worst_disp = max(worst_disp, disp)
        x = y
        ts.append(ts[-1] + h)
        pts.append(x)
    pts_arr = np.array(pts)
    ang = [set_distance(sigma, space.directions_to(p, z), DirectionSet.finite(sigma, [xi]))
           for z in pts_arr[1:]]
    ladder = []
    for d in deltas:
        mask = np.array(ts[1:]) <= d
        worst = float(max((a for a, m in zip(ang, mask) if m), default=0.0))
        ladder.append({"delta": d, "horizon": d, "max_angle": worst, "ok": worst < d})
    member = max(F.distance_to(z) for z in pts_arr)
    return Curve(np.array(ts), pts_arr, h, reason,
                 {"ladder": ladder, "max_member_distance": float(member),
                  "max_projection": float(worst_disp),
                  "step_constant": _step_constant(space, p, pts_arr)})


def _step_constant(space, p, pts) -> float:
    """Empirical C in  angle(z2 p p0) < angle(z1 p p0) + C |z1 z2| / |p p0|,
    with p0 the last curve sample."""
    from .spaceform import comparison_angle

    if len(pts) < 3:
        return 0.0
    p0 = pts[-1]
    dpp0 = space.distance(p, p0)
    worst = 0.0
    prev = None
    for z in pts[1:-1]:
        dz = space.distance(p, z)
        if dz <= 0:
            continue
        try:
            a = comparison_angle(space.k, dz, dpp0, space.distance(z, p0))
        except ValueError:
            continue
        if prev is not None:
            step = space.distance(prev[0], z)
            if step > 0:
                worst = max(worst, (a - prev[1]) * dpp0 / step)
        prev = (z, a)
    return float(worst)
