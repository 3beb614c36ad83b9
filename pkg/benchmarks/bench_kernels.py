"""Compare the numba and numpy kernel backends.

Usage:  python3 benchmarks/bench_kernels.py [--sizes 1000,100000] [--repeat 5]

Both variants are called directly, so the QCLAB_NUMBA flag does not matter
here.  The numba column excludes compilation (one warm-up call first).
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from qclab import _kernels as K


def _cases(n: int, rng: np.random.Generator):
    b = rng.uniform(0.1, 1.5, n)
    c = rng.uniform(0.1, 1.5, n)
    a = np.abs(b - c) + rng.uniform(0.0, 1.0, n) * (b + c - np.abs(b - c))
    U = rng.normal(size=(n, 3))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    V = rng.normal(size=(n, 3))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    r1, r2 = rng.uniform(0, math.pi, n), rng.uniform(0, math.pi, n)
    f1, f2 = rng.uniform(0, math.pi, n), rng.uniform(0, math.pi, n)
    x = rng.uniform(0, 2 * math.pi, n)
    pts = rng.uniform(0, 2 * math.pi, 16)
    return {
        "half_angle": (K.half_angle_np, getattr(K, "half_angle_nb", None), (1.0, b, c, a, 1e-12)),
        "sphere_dist": (K.sphere_dist_np, getattr(K, "sphere_dist_nb", None), (U, V)),
        "sphere_min_dist": (K.sphere_min_dist_np, getattr(K, "sphere_min_dist_nb", None), (U, V[:16])),
        "circle_min_dist": (K.circle_min_dist_np, getattr(K, "circle_min_dist_nb", None), (x, pts, 2 * math.pi)),
        "circle_cone_dist": (K.circle_cone_dist_np, getattr(K, "circle_cone_dist_nb", None),
                             (1.0, math.pi, r1, f1, r2, f2)),
    }


def _best(fn, args, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,100000,1000000")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"numba available: {K.HAVE_NUMBA}; active backend: {K.BACKEND}")
    print(f"{'kernel':18s} {'n':>9s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, (f_np, f_nb, call) in _cases(n, rng).items():
            t_np = _best(f_np, call, args.repeat)
            if f_nb is None:
                print(f"{name:18s} {n:9d} {1e3 * t_np:11.3f} {'-':>11s} {'-':>8s}")
                continue
            out_np, out_nb = f_np(*call), f_nb(*call)
            for u, v in zip(np.atleast_1d(out_np) if not isinstance(out_np, tuple) else out_np,
                            np.atleast_1d(out_nb) if not isinstance(out_nb, tuple) else out_nb):
                assert np.allclose(u, v, atol=1e-12, equal_nan=True), name
            t_nb = _best(f_nb, call, args.repeat)
            print(f"{name:18s} {n:9d} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} {t_np / t_nb:8.2f}")


if __name__ == "__main__":
    main()
