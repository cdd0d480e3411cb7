"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``CRITERION n: PASS|FAIL`` line (visible with ``pytest -v``)
before asserting.
"""

import math
import time

import mpmath
import numpy as np
import pytest

from secantpot import find_roots, germ_H, germ_jacobian_at_fixed, make_context, parse_function
from secantpot.dynamics import PHI
from secantpot.render import RenderConfig, SliceSpec, colorize, compute_field, ppm_bytes, render
from secantpot import verify as V

FUNCTIONS = ("z^3-1", "(z^2-1)*(z-1/2)")


@pytest.fixture(scope="module")
def systems():
    out = {}
    for text in FUNCTIONS:
        f = parse_function(text)
        out[text] = (f, find_roots(f))
    return out


@pytest.fixture
def report(capsys):
    def emit(number, results, extra=""):
        ok = all(r.passed for r in results)
        worst = {}
        for r in results:
            if r.name not in worst or not r.max_error <= worst[r.name].max_error:
                worst[r.name] = r
        detail = "; ".join(f"{'ok' if r.passed else 'VIOLATED'} {name} err={r.max_error:.2e} tol={r.tolerance:.0e}"
                           for name, r in worst.items())
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'}  {extra}{detail}")
        return ok

    return emit


def every_root(systems):
    for text, (f, roots) in systems.items():
        for k in range(len(roots)):
            yield text, f, roots, k


def timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


def runtime_check(name, seconds, limit):
    return V.CheckResult(name, seconds < limit, seconds, limit, 1)


def test_criterion_1_constants(report):
    results, seconds = timed(V.check_constants)
    results = results + [runtime_check("runtime (s)", seconds, 1.0)]
    assert report(1, results, f"({seconds:.3f} s) ")


def test_criterion_2_factorization(systems, report):
    def run():
        return [V.check_factorization(f, roots, k, count=500, radius=0.5) for _, f, roots, k in every_root(systems)]

    results, seconds = timed(run)
    results.append(runtime_check("runtime (s)", seconds, 1.0))
    assert report(2, results, f"({seconds:.3f} s) ")


def test_criterion_3_jacobian(systems, report):
    results = []
    for text, (f, roots) in systems.items():
        k = min(range(len(roots)), key=lambda j: abs(roots[j].z0 - 1))
        checks = V.check_jacobian(f, roots, k, off_diagonal=50, diagonal=20)
        assert checks[0].samples == 70
        results += checks
    assert report(3, results)


def test_criterion_4_iterate_identity(systems, report):
    results = [V.check_iterate_identity(f, roots, k, count=50, max_n=8) for _, f, roots, k in every_root(systems)]
    assert report(4, results)


def test_criterion_5_functional_equations(systems, report):
    results = []
    slowest = 0.0
    for text, (f, roots) in systems.items():
        t0 = time.perf_counter()
        for k in range(len(roots)):
            ctx = make_context(f, roots[k])
            results.append(V.check_germ_equation(f, roots, k, ctx, count=200))
            results.append(V.check_hhat_equation(f, roots, k, ctx, count=200))
            results += V.check_potential(f, roots, k, ctx, count=200)
            results += V.check_estimators(f, roots, k, ctx, count=100)
            results.append(V.check_branches(f, roots, k, ctx, count=50))
        slowest = max(slowest, time.perf_counter() - t0)
    results.append(runtime_check("runtime per function (s)", slowest, 30.0))
    assert report(5, results, f"({slowest:.1f} s) ")


def test_criterion_6_fixed_point_values(systems, report):
    results = [V.check_fixed_point_values(f, roots, k, make_context(f, roots[k])) for _, f, roots, k in every_root(systems)]
    f, roots = systems["z^3-1"]
    assert roots[2].z0 == 1
    w = V._Worst("germ value 1 for z^3-1 at 1", 1e-10)
    w.add(abs(germ_H(make_context(f, roots[2]), f, (1, 1)) - 1), 1)
    results.append(w.result())
    f, roots = systems["(z^2-1)*(z-1/2)"]
    with mpmath.workdps(60):
        exact = mpmath.power(mpmath.mpf(5) / 2, (5 + 3 * mpmath.sqrt(5)) / 10)
    w = V._Worst("germ value (5/2)^index-sum", 1e-9)
    value = germ_H(make_context(f, roots[2]), f, (1, 1))
    w.add(abs(value - float(exact)) / float(exact), f"{float(exact)!r}")
    results.append(w.result())
    assert report(6, results, f"(extended-precision value {mpmath.nstr(exact, 17)}) ")


def test_criterion_7_germ_gradient(systems, report):
    results = [V.check_germ_gradient(f, roots, k, make_context(f, roots[k])) for _, f, roots, k in every_root(systems)]
    f, roots = systems["z^3-1"]
    ctx = make_context(f, roots[2])
    assert roots[2].z0 == 1
    expected = np.array([-2 * PHI / (3 * math.sqrt(5)), -2 / (3 * math.sqrt(5))])
    w = V._Worst("closed-form gradient for z^3-1 at 1", 1e-10)
    w.add(float(np.max(np.abs(germ_jacobian_at_fixed(ctx, f) - expected))), (1, 1))
    results.append(w.result())
    assert report(7, results)


def test_criterion_8_convergence_order(systems, report):
    results = [V.check_convergence_order(f, roots, k, count=50, radius=0.05) for _, f, roots, k in every_root(systems)]
    assert report(8, results)


def test_criterion_9_zero_equipotential(systems, report):
    results = []
    for _, f, roots, k in every_root(systems):
        results += V.check_zero_set(f, roots, k, make_context(f, roots[k]), count=50)
    assert report(9, results)


def pixel_of(config, u):
    w, h = config.resolution
    re0, re1, im0, im1 = config.slice.window
    col = min(w - 1, int((u.real - re0) / (re1 - re0) * w))
    row = min(h - 1, int((im1 - u.imag) / (im1 - im0) * h))
    return row, col


def test_criterion_10_figures(systems, report, tmp_path):
    f, roots = systems["z^3-1"]
    results = []

    fig1 = RenderConfig("z^3-1", SliceSpec("Diagonal", (-1, 1, -1, 1)), (400, 400), budget=200,
                        out_path=str(tmp_path / "fig1.ppm"))
    grid, seconds = timed(lambda: compute_field(f, roots, fig1, workers=1))
    results.append(runtime_check("single-threaded 400x400 (s)", seconds, 120.0))
    present = sorted(set(grid.basin[grid.basin >= 0].tolist()))
    w = V._Worst("exactly three basins", 0.0)
    w.add(0.0 if present == [0, 1, 2] else 1.0, present)
    results.append(w.result())

    w = V._Worst("cube roots in distinct basins", 0.0)
    seen = set()
    for k, r in enumerate(roots):
        b = int(grid.basin[pixel_of(fig1, r.z0)])
        w.add(0.0 if b == k else 1.0, (r.z0, b))
        seen.add(b)
    w.add(0.0 if len(seen) == 3 else 1.0, seen)
    results.append(w.result())

    u = V._Worst("white pixel within 0.15 of the centre", 0.0)
    wd, ht = fig1.resolution
    re = -1 + (np.arange(wd) + 0.5) * (2 / wd)
    im = 1 - (np.arange(ht) + 0.5) * (2 / ht)
    near = np.abs(re[None, :] + 1j * im[:, None]) <= 0.15
    u.add(0.0 if np.any(near & (grid.basin < 0)) else 1.0, int(np.sum(grid.basin < 0)))
    results.append(u.result())

    rgb = ppm_bytes(colorize(grid, fig1))
    render(fig1, workers=4)
    w = V._Worst("parallel render byte-identical", 0.0)
    w.add(0.0 if (tmp_path / "fig1.ppm").read_bytes() == rgb else 1.0, "workers=4")
    results.append(w.result())

    fig4 = RenderConfig("z^3-1", SliceSpec("RealPlane", (-3, 3, -3, 3)), (400, 400), budget=200)
    grid4 = compute_field(f, roots, fig4, workers=1)
    real = min(range(3), key=lambda k: abs(roots[k].z0 - 1))
    w = V._Worst("real plane converges only to the real root", 0.0)
    others = set(grid4.basin[grid4.basin >= 0].tolist()) - {real}
    w.add(0.0 if not others else 1.0, sorted(others))
    w.add(0.0 if np.any(grid4.basin < 0) else 1.0, "white region")
    results.append(w.result())

    assert report(10, results, f"(400x400 in {seconds:.2f} s) ")
