"""Numba vs numpy timings for the two hot paths.

    python benchmarks/bench_kernels.py [--batch 5000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from liesym import _accel, kernels
from liesym import algebra as alg


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def curvature_batch(n, rng):
    out = np.empty((n, 3, 3, 3))
    for i in range(n):
        if i % 2:
            out[i] = alg.unimodular_milnor(*rng.uniform(-3, 3, 3)).c
        else:
            a, d = rng.uniform(0, 3, 2)
            s = rng.uniform(-1, 1)
            out[i] = alg.nonunimodular_milnor(a, s * a, -s * d, d).c
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=5000)
    ap.add_argument("--geodesics", type=int, default=50)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    cs = curvature_batch(args.batch, rng)
    nus = rng.uniform(0.2, 5, args.geodesics)
    a0 = rng.uniform(-1, 1, (args.geodesics, 3))

    cases = {
        f"nabla R max over {args.batch} frames": lambda: kernels.nabla_riemann_maxabs(cs),
        f"RK4, {args.geodesics} geodesics x 10k steps": lambda: kernels.rk4_e0(nus, a0, 1e-3, 10_000, 100),
    }
    prev = _accel.set_numba(True)
    try:
        for fn in cases.values():
            fn()  # compile
        print(f"{'kernel':45s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
        for name, fn in cases.items():
            _accel.set_numba(False)
            t_np = _best(fn, args.repeat)
            ref = fn()
            _accel.set_numba(True)
            t_nb = _best(fn, args.repeat)
            assert np.allclose(ref, fn(), atol=1e-10)
            print(f"{name:45s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x")
    finally:
        _accel.set_numba(prev)


if __name__ == "__main__":
    main()
