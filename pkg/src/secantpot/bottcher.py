"""Bottcher-type coordinates, the extended modulus and the potential of a root.

Everything with golden-ratio exponents is carried in the log domain; orbits are
followed in coordinates centered at the root so that deviations far below
machine epsilon keep full relative accuracy.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    BUDGET,
    GOLDEN,
    INV_SQRT5,
    PHI,
    PSI,
    PlanePoint,
    g_centered,
    g_factor_array,
    orbit,
)
from .errors import (
    EstimatorStalled,
    ExceptionalRoot,
    Indeterminate,
    NoSeriesConvergence,
    NotInBasin,
    OutsideBranchDisk,
    OutsideTrap,
    PoleAt,
    RadiusNotFound,
)

SERIES_TOL = 1e-12
MAX_SERIES_N = 200
MIN_RADIUS = 1e-8
# limit of sum_k F_(n-k) / phi^n
INDEX_SUM_LIMIT = (5.0 + 3.0 * math.sqrt(5.0)) / 10.0
# sampled |G - G0| must stay below this fraction of |G0| (the proof needs < 1/2)
DEVIATION_MARGIN = 0.45
UNDERFLOW_FLOOR = 1e-280
ESTIMATOR_TOL = 1e-9

_SHELLS = 8
_ANGLES = 64


@dataclass(frozen=True)
class BottcherContext:
    root: object
    w0: complex
    r: float
    rho: float
    branch_index: int = 0
    series_tol: float = SERIES_TOL
    max_series_n: int = MAX_SERIES_N

    @property
    def anchor(self):
        return cmath.exp(self.w0)

    def in_trap(self, u, v):
        return abs(u) < self.r and abs(v) < self.r


@dataclass(frozen=True)
class PotentialSample:
    h: float
    hhat: float
    basin: int
    n_used: int
    log_h: float = float("nan")


def _sample_disk():
    """Center plus ``_SHELLS`` circles of ``_ANGLES`` points, unit radius."""
    ang = np.exp(2j * np.pi * np.arange(_ANGLES) / _ANGLES)
    radii = np.arange(1, _SHELLS + 1) / _SHELLS
    return np.concatenate([[0j], (radii[:, None] * ang[None, :]).ravel()])


def _max_deviation(root, rho, disk):
    s = disk * rho
    g = g_factor_array(root, s[:, None], s[None, :])
    if not np.all(np.isfinite(g)):
        return math.inf
    return float(np.max(np.abs(g - root.g0)))


def make_context(f, root, branch_index=0, series_tol=SERIES_TOL, max_series_n=MAX_SERIES_N):
    """Choose the logarithm branch and a trap bi-disk radius for ``root``."""
    if root.exceptional:
        raise ExceptionalRoot(f"f''(z0) vanishes at z0 = {root.z0}")
    g0 = root.g0
    w0 = cmath.log(g0) + 2j * math.pi * branch_index
    bound = (2.0 / 3.0) / abs(g0)
    rho = bound
    poles = f.poles()
    if len(poles):
        rho = min(rho, 0.5 * float(np.min(np.abs(poles - root.z0))))
    disk = _sample_disk()
    while rho >= MIN_RADIUS:
        if _max_deviation(root, rho, disk) <= DEVIATION_MARGIN * abs(g0):
            break
        rho /= 2.0
    else:
        raise RadiusNotFound(f"no radius >= {MIN_RADIUS} keeps G near G(z0, z0)")
    return BottcherContext(root, w0, min(rho, bound), rho, branch_index, series_tol, max_series_n)


def anchored_log(ctx, w):
    """The logarithm branch on the disk around ``exp(w0)`` that sends it to ``w0``."""
    a = ctx.anchor
    if not abs(w - a) < abs(a) / 2.0:
        raise OutsideBranchDisk(f"{w} is outside the disk |w - {a}| < {abs(a) / 2}")
    return ctx.w0 + cmath.log(w / a)


_WEIGHTS = {}


def _weights(n):
    """``F_(n-k) / phi^n`` for ``k = 0..n-1``."""
    w = _WEIGHTS.get(n)
    if w is None:
        w = np.array([GOLDEN.fib_ratio(n - k, n) for k in range(n)])
        _WEIGHTS[n] = w
    return w


def _centered(ctx, p):
    x, y = p if not isinstance(p, PlanePoint) else (p.x, p.y)
    return complex(x) - ctx.root.z0, complex(y) - ctx.root.z0


def _trap_logs(ctx, u, v, n):
    """Anchored logs of G along the first ``n`` points of the centered orbit."""
    logs = []
    for _ in range(n):
        g = g_centered(ctx.root, u, v)
        logs.append(anchored_log(ctx, g))
        u, v = u * v * g, u
    return np.array(logs, dtype=complex)


def partial_product_Hn(ctx, f, p, n):
    """The n-th partial product ``exp(sum_k F_(n-k)/phi^n L(G(S^k p)))``."""
    u, v = _centered(ctx, p)
    if not ctx.in_trap(u, v):
        raise OutsideTrap(f"{p} is outside the trap bi-disk of radius {ctx.r}")
    if n == 0:
        return 1.0 + 0j
    return cmath.exp(complex(np.dot(_weights(n), _trap_logs(ctx, u, v, n))))


def _germ_centered(ctx, u, v):
    logs = []
    prev = None
    for n in range(1, ctx.max_series_n + 1):
        g = g_centered(ctx.root, u, v)
        logs.append(anchored_log(ctx, g))
        u, v = u * v * g, u
        h = cmath.exp(complex(np.dot(_weights(n), np.array(logs))))
        if prev is not None and abs(h - prev) <= ctx.series_tol * abs(prev):
            return h
        prev = h
    raise NoSeriesConvergence(f"no convergence within {ctx.max_series_n} terms")


def germ_H(ctx, f, p):
    """The germ H on the trap bi-disk, as the limit of the partial products."""
    u, v = _centered(ctx, p)
    if not ctx.in_trap(u, v):
        raise OutsideTrap(f"{p} is outside the trap bi-disk of radius {ctx.r}")
    return _germ_centered(ctx, u, v)


def root_index(roots, root):
    best = -1
    for k, r in enumerate(roots):
        if abs(r.z0 - root.z0) <= 1e-8 * max(1.0, abs(root.z0)):
            best = k
            break
    return best


def _require_basin(ctx, f, roots, p):
    out = orbit(f, roots, p)
    k = root_index(roots, ctx.root)
    if not out.converged or out.root_index != k:
        raise NotInBasin(f"{p} does not converge to {ctx.root.z0} ({out.tag})")
    return k


def _pull_to_trap(ctx, u, v, n_index=None):
    """Follow the orbit into the trap.

    Returns ``(log Hhat, N, u_N, v_N, log|H(S^N p)|)``; ``log Hhat`` is
    ``-inf`` (and the rest ``None``) when some G factor vanishes.
    """
    total = 0.0
    n = 0
    while not ctx.in_trap(u, v) or (n_index is not None and n < n_index):
        g = g_centered(ctx.root, u, v)
        if g == 0:
            return -math.inf, n, None, None, None
        total += INV_SQRT5 * PHI ** (-n) * math.log(abs(g))
        u, v = u * v * g, u
        n += 1
        if n > BUDGET:
            raise NotInBasin("orbit never entered the trap bi-disk")
    log_germ = math.log(abs(_germ_centered(ctx, u, v)))
    return PHI ** (-n) * log_germ + total, n, u, v, log_germ


def modulus_Hhat(ctx, f, roots, p, n_index=None):
    """Extended modulus of H on the whole basin, pulled back from the trap.

    ``n_index`` forces a later entry index; the result does not depend on it.
    """
    _require_basin(ctx, f, roots, p)
    u, v = _centered(ctx, p)
    log_hat, n, _, _, _ = _pull_to_trap(ctx, u, v, n_index)
    return math.exp(log_hat), n


def exp_below_one(logh):
    """``exp(logh)`` rounded down when a negative ``logh`` would round up to 1."""
    h = np.exp(logh)
    below = np.nextafter(1.0, 0.0)
    with np.errstate(invalid="ignore"):
        out = np.where((h >= 1.0) & (logh < 0.0), below, h)
    return float(out) if np.ndim(out) == 0 else out


def potential_h(ctx, f, roots, p):
    """The potential ``h = Hhat^(1/phi) |x - z0|^(1/sqrt5) |y - z0|^(1/(phi sqrt5))``.

    Evaluated at the trap entry point ``q = S^N p`` and pulled back with
    ``h(p) = h(q)^(phi^-N)``; this keeps full relative accuracy in ``log h``
    even where h is within rounding of 1.
    """
    k = _require_basin(ctx, f, roots, p)
    u, v = _centered(ctx, p)
    log_hat, n, un, vn, log_germ = _pull_to_trap(ctx, u, v)
    if u == 0 or v == 0 or log_hat == -math.inf:
        logh = -math.inf
    else:
        at_trap = log_germ / PHI + INV_SQRT5 * (math.log(abs(un)) + math.log(abs(vn)) / PHI)
        logh = PHI ** (-n) * at_trap
    h = exp_below_one(logh) if logh > -math.inf else 0.0
    assert 0.0 <= h < 1.0, f"potential {h} out of range at {p}"
    return PotentialSample(h, math.exp(log_hat), k, n, logh)


def green(ctx, f, roots, p):
    """``(1/phi) log Hhat + (1/sqrt5) log|x - z0| + (1/(phi sqrt5)) log|y - z0|``.

    Equals ``log h``; ``-inf`` exactly on the zero set.
    """
    _require_basin(ctx, f, roots, p)
    u, v = _centered(ctx, p)
    log_hat, _, _, _, _ = _pull_to_trap(ctx, u, v)
    if u == 0 or v == 0 or log_hat == -math.inf:
        return -math.inf
    return log_hat / PHI + INV_SQRT5 * math.log(abs(u)) + INV_SQRT5 / PHI * math.log(abs(v))


def _norm(u, v, kind):
    if kind == "linf":
        return max(abs(u), abs(v))
    if kind == "l2":
        return math.hypot(abs(u), abs(v))
    raise ValueError(f"unknown norm {kind!r}")


def direct_limit_h(f, roots, p, norm="linf"):
    """Estimate ``lim ||S^n p - (z0, z0)||^(phi^-n)`` directly from the orbit.

    With ``l_n = log||S^n p - (z0, z0)||`` behaving like
    ``a phi^n + b psi^n + c``, the combination
    ``(d_n - psi d_(n-1)) / (phi^(n-2) (phi - 1) sqrt5)`` of the differences
    ``d_n = l_n - l_(n-1)`` isolates ``a = log h``.
    """
    out = orbit(f, roots, p)
    if not out.converged:
        raise NotInBasin(f"{p} does not converge ({out.tag})")
    root = roots[out.root_index]
    x, y = p if not isinstance(p, PlanePoint) else (p.x, p.y)
    u, v = complex(x) - root.z0, complex(y) - root.z0
    if u == 0 or v == 0:
        return 0.0
    scale = (PHI - 1.0) * math.sqrt(5.0)
    ells = []
    estimates = []
    for n in range(10 * BUDGET):
        nrm = _norm(u, v, norm)
        if nrm < UNDERFLOW_FLOOR:
            break
        ells.append(math.log(nrm))
        if n >= 2:
            d1 = ells[n] - ells[n - 1]
            d0 = ells[n - 1] - ells[n - 2]
            estimates.append((d1 - PSI * d0) / (PHI ** (n - 2) * scale))
        try:
            g = g_centered(root, u, v)
        except (Indeterminate, PoleAt):
            raise NotInBasin(f"orbit of {p} is indeterminate") from None
        if g == 0:
            return 0.0
        u, v = u * v * g, u
    if len(estimates) < 2 or abs(estimates[-1] - estimates[-2]) > ESTIMATOR_TOL:
        raise EstimatorStalled(f"estimates did not stabilize for {p}: {estimates[-3:]}")
    return math.exp(estimates[-1])


def germ_jacobian_at_fixed(ctx, f):
    """Closed-form gradient of H at (z0, z0) as a length-2 complex array."""
    r = ctx.root
    scalar = INV_SQRT5 * (2.0 * r.d1 * r.d3 - 3.0 * r.d2 * r.d2) / (6.0 * r.d1 * r.d2)
    h0 = cmath.exp(INDEX_SUM_LIMIT * ctx.w0)
    return scalar * h0 * np.array([PHI, 1.0], dtype=complex)
