"""Compare the compiled kernels against the pure numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from metricgraph._native import _pure

try:
    from metricgraph._native import _kernels
except ImportError:
    _kernels = None


def _metric(rng, n):
    pts = rng.standard_normal((n, 3))
    D = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(D, 0.0)
    return D


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    if _kernels is None:
        print("compiled kernels not built; timing the fallback only")

    print(f"{'kernel':<22} {'n':>5} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8}")
    for n in (30, 60, 120, 240):
        D = _metric(rng, n)
        tp = _time(_pure.four_point_delta, D)
        row = f"{'four_point_delta':<22} {n:>5} {tp * 1e3:>10.2f}"
        if _kernels is not None:
            tc = _time(_kernels.four_point_delta, D)
            assert abs(_pure.four_point_delta(D)
                       - _kernels.four_point_delta(D)) <= 1e-12
            row += f" {tc * 1e3:>14.2f} {tp / tc:>8.1f}x"
        print(row)

    for n in (100, 300, 1000):
        DX = _metric(rng, n)
        DY = _metric(rng, n)
        k = 4 * n
        pairs = np.stack([rng.integers(0, n, size=k),
                          rng.integers(0, n, size=k)], axis=1)
        tp = _time(_pure.relation_distortion, DX, DY, pairs)
        row = f"{'relation_distortion':<22} {k:>5} {tp * 1e3:>10.2f}"
        if _kernels is not None:
            tc = _time(_kernels.relation_distortion, DX, DY, pairs)
            assert abs(_pure.relation_distortion(DX, DY, pairs)
                       - _kernels.relation_distortion(DX, DY, pairs)) <= 1e-12
            row += f" {tc * 1e3:>14.2f} {tp / tc:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
