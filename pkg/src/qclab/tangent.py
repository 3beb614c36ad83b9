"""First variation of distance and numerical tangent cones."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .directions import DirectionSet, set_distance
from .spaces import ModelSpace
from .subsets import SubsetSpec


class NotInSubset(ValueError):
    pass


def dist_derivative(space: ModelSpace, p, q, eta) -> float:
    """Right derivative at q, in direction eta, of the distance to p:
    -cos |Up_q^p eta|."""
    sigma = space.direction_space(q)
    up = space.directions_to(q, p)
    return -math.cos(set_distance(sigma, up, DirectionSet.finite(sigma, [eta])))


def dist_derivatives(space: ModelSpace, p, q, etas) -> np.ndarray:
    sigma = space.direction_space(q)
    up = space.directions_to(q, p)
    return -np.cos(up.dist_to(etas))


def finite_difference(space: ModelSpace, p, q, eta, h: float) -> float:
    x = space.exp_step(q, eta, h)
    return (space.distance(x, p) - space.distance(q, p)) / h


@dataclass(frozen=True)
class TangentConeConfig:
    r0: float = 1e-2
    scales: int = 10
    persist: int = 4
    merge: float = 1e-3
    per_scale: int = 48
    seed: int = 0


def _merge(sigma, pts, radius):
    reps: list = []
    for d in pts:
        if not reps or sigma.min_dist(np.asarray([d]), np.asarray(reps)).min() > radius:
            reps.append(d)
    return reps


def tangent_cone_estimate(space: ModelSpace, F: SubsetSpec, p, use_analytic: bool = True,
                          cfg: TangentConeConfig = TangentConeConfig()) -> DirectionSet:
    """Sigma_p F: the analytic answer when F provides one, otherwise the set
    of directions to points of F that persist over the finest ``persist``
    of ``scales`` annuli r_m = r0 * 2^-m (merged at radius ``merge``).
    r0 shrinks to half the distance from p to the nearest other singular point."""
    p = space.point(p)
    if not F.contains(p, 1e-8):
        raise NotInSubset(f"{p} is not a point of {F.description}")
    if use_analytic:
        t = F.tangent(p)
        if t is not None:
            return t
    sigma = space.direction_space(p)
    rng = np.random.default_rng(cfg.seed)
    # keep the annuli inside the gap to the nearest other singular point
    r0 = cfg.r0
    for s in list(F.special_points()) + list(space.special_points()):
        d = space.distance(p, s)
        if d > 1e-12:
            r0 = min(r0, 0.5 * d)
    clouds = []
    for m in range(cfg.scales):
        r = r0 * 0.5 ** m
        pts = F.sample_near(rng, p, r, cfg.per_scale)
        dirs = []
        for x in pts:
            d = space.distance(p, x)
            if 0.5 * r < d <= r:
                ds = space.directions_to(p, x)
                dirs.extend(ds.discretize(cfg.merge) if not ds.is_finite else ds.pts)
        clouds.append(sigma.as_array(dirs))
    tail = clouds[-cfg.persist:]
    if any(len(c) == 0 for c in tail):
        return DirectionSet.empty(sigma, estimated=True)
    cand = np.concatenate(tail)
    keep = np.ones(len(cand), dtype=bool)
    for c in tail:
        keep &= sigma.min_dist(cand, c) <= 10 * cfg.merge
    reps = _merge(sigma, cand[keep], cfg.merge)
    return DirectionSet.finite(sigma, reps, estimated=True)
