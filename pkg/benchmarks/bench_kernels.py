"""Compare the numba and numpy kernel backends on representative sizes.

    python benchmarks/bench_kernels.py [--repeat 3]

Prints one line per kernel and size with the best wall time of each backend
and the speedup. Numba compile time is excluded by a warm-up call.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from curvebound import _accel


def _circle(n, r=1.0, phase=0.0):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False) + phase
    return np.ascontiguousarray(np.c_[r * np.cos(t), r * np.sin(t)])


def cases():
    for n in (512, 2048, 8192):
        A = _circle(n)
        B = _circle(n, 1.1, 0.01)
        s = np.linspace(0, 2 * np.pi, n, endpoint=False)
        yield "directed_hausdorff", n, (_accel.PLANE, 0.0, A, B)
        yield "min_tameness", n, (_accel.PLANE, 0.0, A, s, 2 * np.pi, True, 4 * 2 * np.pi / n)
        yield "first_crossing", n, (A, np.roll(A, -1, axis=0), True, 0.0, 1e-9)
        Q = np.random.default_rng(0).uniform(-1, 1, (4096, 2))
        yield "even_odd", n, (Q, A)
        yield "seg_dist", n, (Q, A, True)


def best_time(fn, args, repeat):
    fn(*args)  # warm-up / compile
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    if _accel.numba_impl is None:
        print("numba is not installed; nothing to compare")
        return
    print(f"{'kernel':<20}{'n':>7}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>9}")
    for name, n, args in cases():
        tn = best_time(getattr(_accel.numba_impl, name), args, a.repeat)
        tp = best_time(getattr(_accel.numpy_impl, name), args, a.repeat)
        print(f"{name:<20}{n:>7}{tn:>12.4g}{tp:>12.4g}{tp / tn:>9.1f}")


if __name__ == "__main__":
    main()
