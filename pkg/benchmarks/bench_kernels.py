"""Compare the compiled and pure-Python orbit kernels on a diagonal slice.

    python3 benchmarks/bench_kernels.py --size 200 --repeat 3
"""

import argparse
import time

import numpy as np

from secantpot import find_roots, parse_function
from secantpot.kernels import available_backends, run_orbits


def time_backend(f, roots, u, backend, workers, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = run_orbits(f, roots, u, u.copy(), 200, workers=workers, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fn", default="z^3-1")
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    f = parse_function(args.fn)
    roots = find_roots(f)
    axis = np.linspace(-1.0, 1.0, args.size)
    u = axis[None, :] + 1j * axis[:, None]
    pixels = u.size

    results = {}
    for backend in available_backends():
        seconds, out = time_backend(f, roots, u, backend, args.workers, args.repeat)
        results[backend] = (seconds, out)
        print(f"{backend:>7}: {seconds:8.3f} s  {pixels / seconds / 1e3:8.1f} kpix/s")

    if len(results) == 2:
        (ta, (ba, _, la)), (tb, (bb, _, lb)) = results["cython"], results["python"]
        same = float(np.mean(ba == bb))
        both = (ba >= 0) & np.isfinite(la) & np.isfinite(lb)
        diff = float(np.max(np.abs(la[both] - lb[both]))) if both.any() else 0.0
        print(f"speedup {tb / ta:.1f}x, basin agreement {same:.4%}, max |dlog h| {diff:.2e}")


if __name__ == "__main__":
    main()
