"""Backend selection and parallel dispatch for the per-pixel orbit kernel.

The compiled Cython kernel is used when it imports; otherwise the numpy
implementation is used. Setting ``SECANTPOT_BACKEND=python`` forces the numpy
path. ``SECANTPOT_WORKERS`` sets the thread count (default: logical cores).
"""

from __future__ import annotations

import importlib
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernel_py
from .dynamics import BUDGET, CONV_TOL, ESCAPE
from .polyform import pad_square

BACKEND_ENV = "SECANTPOT_BACKEND"
WORKERS_ENV = "SECANTPOT_WORKERS"
CHUNK = 4096
# potentials are evaluated from the first orbit point within this distance
# (scaled by 1/|G(z0, z0)|) of the root, then pulled back
NEAR_FRACTION = 0.01


def _load(name):
    if name == "python":
        return _kernel_py
    if name == "cython":
        return importlib.import_module("secantpot._kernel")
    raise ValueError(f"unknown backend {name!r}")


def _select():
    if os.environ.get(BACKEND_ENV, "").strip().lower() == "python":
        return "python", _kernel_py
    try:
        return "cython", _load("cython")
    except ImportError:
        return "python", _kernel_py


BACKEND, _impl = _select()


def available_backends():
    names = ["python"]
    try:
        _load("cython")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def default_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def pack(f, roots):
    """Arrays consumed by ``compute_chunk`` for function ``f`` and its roots."""
    m = max([r.g_den.shape[0] for r in roots] + [1])
    return dict(
        step_num=np.ascontiguousarray(f.step_num, dtype=complex),
        step_den=np.ascontiguousarray(f.step_den, dtype=complex),
        den=np.ascontiguousarray(f.den, dtype=complex),
        zr=np.array([r.z0 for r in roots], dtype=complex).reshape(-1),
        g_num=np.ascontiguousarray(
            np.array([pad_square(r.g_num, m) for r in roots], dtype=complex).reshape(len(roots), m, m)),
        g_den=np.ascontiguousarray(
            np.array([pad_square(r.g_den, m) for r in roots], dtype=complex).reshape(len(roots), m, m)),
        g0=np.array([r.g0 for r in roots], dtype=complex).reshape(-1),
        series_ok=np.array([not r.exceptional for r in roots], dtype=np.uint8).reshape(-1),
        near=np.array([NEAR_FRACTION * min(1.0, 1.0 / max(abs(r.g0), 1e-300)) for r in roots],
                      dtype=float).reshape(-1),
    )


def run_orbits(f, roots, x0, y0, budget=BUDGET, conv_tol=CONV_TOL, workers=None, backend=None):
    """Classify every starting point and compute log h for converged ones.

    Returns ``(basin, steps, logh)`` flat arrays. Output does not depend on
    ``workers``: chunks are fixed-size and written back by index.
    """
    impl = _impl if backend is None else _load(backend)
    x0 = np.ascontiguousarray(np.ravel(x0), dtype=complex)
    y0 = np.ascontiguousarray(np.ravel(y0), dtype=complex)
    n = x0.shape[0]
    packed = pack(f, roots)
    basin = np.empty(n, dtype=np.int32)
    steps = np.empty(n, dtype=np.int32)
    logh = np.empty(n)
    spans = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]

    def work(span):
        a, b = span
        out = impl.compute_chunk(x0[a:b], y0[a:b], packed["step_num"], packed["step_den"],
                                 packed["den"], packed["zr"], packed["g_num"], packed["g_den"],
                                 packed["g0"], packed["series_ok"], packed["near"], int(budget), float(conv_tol),
                                 float(ESCAPE))
        basin[a:b], steps[a:b], logh[a:b] = out

    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(spans) <= 1:
        for span in spans:
            work(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, spans))
    return basin, steps, logh
