import numpy as np
import pytest

from secantpot import find_roots, make_context, orbit, parse_function, potential_h
from secantpot.kernels import available_backends, default_workers, run_orbits

needs_both = pytest.mark.skipif(len(available_backends()) < 2, reason="compiled kernel not built")


def grid(n, lo=-1.5, hi=1.5):
    a = np.linspace(lo, hi, n)
    return a[None, :] + 1j * a[:, None]


@pytest.mark.parametrize("text", ["z^3-1", "(z^2-1)*(z-1/2)", "(z^3-1)/(z+3)"])
@pytest.mark.parametrize("backend", available_backends())
def test_kernel_matches_reference(text, backend):
    """Per-pixel results against the scalar orbit and potential routines."""
    f = parse_function(text)
    roots = find_roots(f)
    ctxs = [make_context(f, r) for r in roots]
    rng = np.random.default_rng(5)
    x = rng.uniform(-1.5, 1.5, 120) + 1j * rng.uniform(-1.5, 1.5, 120)
    y = rng.uniform(-1.5, 1.5, 120) + 1j * rng.uniform(-1.5, 1.5, 120)
    basin, steps, logh = run_orbits(f, roots, x, y, workers=1, backend=backend)
    for i in range(x.size):
        out = orbit(f, roots, (x[i], y[i]))
        assert basin[i] == (out.root_index if out.converged else (-2 if out.tag == "Indeterminate" else -1))
        if out.converged:
            # vectorized evaluation rounds differently, which can shift the stopping step
            assert abs(int(steps[i]) - out.steps) <= 1
            ref = potential_h(ctxs[out.root_index], f, roots, (x[i], y[i])).log_h
            assert abs(logh[i] - ref) <= 1e-9 * max(1.0, abs(ref))


@needs_both
@pytest.mark.parametrize("text", ["z^3-1", "(z^2-1)*(z-1/2)"])
def test_backends_agree(text):
    f = parse_function(text)
    roots = find_roots(f)
    u = grid(160)
    a = run_orbits(f, roots, u, u.copy(), workers=1, backend="cython")
    b = run_orbits(f, roots, u, u.copy(), workers=1, backend="python")
    assert np.mean(a[0] == b[0]) >= 0.995
    both = (a[0] >= 0) & (a[0] == b[0]) & np.isfinite(a[2]) & np.isfinite(b[2])
    assert np.max(np.abs(a[2][both] - b[2][both])) <= 1e-8
    assert np.array_equal(np.isneginf(a[2]), np.isneginf(b[2]))


def test_exact_root_coordinate_gives_zero_potential(cubic):
    f, roots = cubic
    for backend in available_backends():
        _, _, logh = run_orbits(f, roots, np.array([1.0 + 0j]), np.array([0.3 + 0j]), backend=backend)
        assert logh[0] == -np.inf


def test_workers_env(monkeypatch):
    monkeypatch.setenv("SECANTPOT_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("SECANTPOT_WORKERS", "zero")
    assert default_workers() >= 1


def test_unknown_backend(cubic):
    f, roots = cubic
    with pytest.raises(ValueError):
        run_orbits(f, roots, np.zeros(1, complex), np.zeros(1, complex), backend="fortran")


def test_backend_env_forces_fallback():
    import subprocess
    import sys

    code = "from secantpot import kernels; print(kernels.BACKEND)"
    env = {"SECANTPOT_BACKEND": "python", "PATH": "/usr/bin:/bin"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
