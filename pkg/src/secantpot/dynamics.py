"""The secant map on C^2, its Jacobian, the factor G and orbit classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import Indeterminate, PoleAt, ZeroFactor
from .jet import POLE_TOL
from .polyform import bivariate_eval, bivariate_partials, poly_eval

CONV_TOL = 1e-13
BUDGET = 200
ESCAPE = 1e60
POLE_MAP_TOL = 1e-300


def _fibonacci(n):
    fib = [0, 1]
    while len(fib) <= n:
        fib.append(fib[-1] + fib[-2])
    return tuple(fib)


@dataclass(frozen=True)
class GoldenConstants:
    phi: float = (1.0 + math.sqrt(5.0)) / 2.0
    inv_sqrt5: float = 1.0 / math.sqrt(5.0)
    fib: tuple = field(default=_fibonacci(92), repr=False)

    @property
    def psi(self):
        return -1.0 / self.phi

    def fib_ratio(self, m, n):
        """``F_m / phi^n`` without overflow, for ``0 <= m``."""
        if m <= 92 and n <= 1000:
            return self.fib[m] / self.phi ** n
        # F_m = (phi^m - psi^m)/sqrt5
        sign = -1.0 if m % 2 else 1.0
        return (self.phi ** (m - n) - sign * self.phi ** (-m - n)) * self.inv_sqrt5


GOLDEN = GoldenConstants()
PHI = GOLDEN.phi
PSI = GOLDEN.psi
INV_SQRT5 = GOLDEN.inv_sqrt5
FIB = GOLDEN.fib


@dataclass(frozen=True)
class PlanePoint:
    x: complex
    y: complex

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "y", complex(self.y))

    def __iter__(self):
        yield self.x
        yield self.y

    def dist_inf(self, z0):
        return max(abs(self.x - z0), abs(self.y - z0))


CONVERGED = "Converged"
NON_CONVERGENT = "NonConvergent"
INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class OrbitOutcome:
    tag: str
    root_index: int
    steps: int
    trace: Optional[List[PlanePoint]] = None

    @property
    def converged(self):
        return self.tag == CONVERGED


def _as_point(p):
    return p if isinstance(p, PlanePoint) else PlanePoint(*p)


def _check_poles(f, x, y):
    if not f.is_polynomial:
        if abs(poly_eval(f.den, x)) <= POLE_TOL:
            raise PoleAt(x)
        if abs(poly_eval(f.den, y)) <= POLE_TOL:
            raise PoleAt(y)


def secant_step(f, p):
    """One step ``(x, y) -> (x', x)``; the Newton step on the diagonal."""
    x, y = _as_point(p)
    _check_poles(f, x, y)
    q = bivariate_eval(f.step_den, x, y)
    if not abs(q) > POLE_MAP_TOL:
        raise Indeterminate(f"horizontal secant line at ({x}, {y})")
    return PlanePoint(bivariate_eval(f.step_num, x, y) / q, x)


def jacobian(f, p):
    """Complex Jacobian of the secant map as a 2x2 array."""
    x, y = _as_point(p)
    _check_poles(f, x, y)
    P, Px, Py = bivariate_partials(f.step_num, x, y)
    Q, Qx, Qy = bivariate_partials(f.step_den, x, y)
    if not abs(Q) > POLE_MAP_TOL:
        raise Indeterminate(f"horizontal secant line at ({x}, {y})")
    q2 = Q * Q
    return np.array([[(Px * Q - P * Qx) / q2, (Py * Q - P * Qy) / q2], [1.0, 0.0]], dtype=complex)


def _check_centered_poles(root, u, v):
    cd = root.shifted_den
    if len(cd) > 1:
        if abs(poly_eval(cd, u)) <= POLE_TOL:
            raise PoleAt(root.z0 + u)
        if abs(poly_eval(cd, v)) <= POLE_TOL:
            raise PoleAt(root.z0 + v)


def g_centered(root, u, v):
    """G at ``(z0 + u, z0 + v)``; accurate relative to |G| for all small u, v."""
    _check_centered_poles(root, u, v)
    a = bivariate_eval(root.g_den, u, v)
    if not abs(a) > POLE_MAP_TOL:
        raise Indeterminate(f"horizontal secant line at ({root.z0 + u}, {root.z0 + v})")
    return complex(bivariate_eval(root.g_num, u, v) / a)


def g_factor(f, root, p):
    """The factor G with ``S1(x, y) = z0 + G(x, y)(x - z0)(y - z0)``."""
    x, y = _as_point(p)
    _check_poles(f, x, y)
    return g_centered(root, x - root.z0, y - root.z0)


def g_factor_array(root, u, v):
    """Vectorized G over arrays of centered coordinates; NaN where undefined."""
    a = bivariate_eval(root.g_den, u, v)
    b = bivariate_eval(root.g_num, u, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(a) > POLE_MAP_TOL, b / np.where(a == 0, 1, a), np.nan)


def centered_step(root, u, v):
    """The secant step in coordinates centered at the root: ``(u v G, u)``."""
    return u * v * g_centered(root, u, v), u


def g_second_derivative(root):
    """g''(z0) = (2 f' f''' - 3 f''^2) / (6 f'^2)."""
    d1, d2, d3 = root.d1, root.d2, root.d3
    return (2.0 * d1 * d3 - 3.0 * d2 * d2) / (6.0 * d1 * d1)


def g_gradient_at_fixed(root):
    """Gradient of G at (z0, z0); both partials equal g''(z0)/2."""
    g = g_second_derivative(root) / 2.0
    return np.array([g, g], dtype=complex)


def classify(roots, x, y, conv_tol=CONV_TOL):
    for k, r in enumerate(roots):
        tol = conv_tol * max(1.0, abs(r.z0))
        if abs(x - r.z0) <= tol and abs(y - r.z0) <= tol:
            return k
    return -1


def orbit(f, roots, p, budget=BUDGET, conv_tol=CONV_TOL, keep_trace=False):
    """Iterate until the orbit settles at some ``(z0, z0)`` or the budget runs out."""
    x, y = _as_point(p)
    trace = [PlanePoint(x, y)] if keep_trace else None
    for n in range(budget + 1):
        k = classify(roots, x, y, conv_tol)
        if k >= 0:
            return OrbitOutcome(CONVERGED, k, n, trace)
        if n == budget:
            break
        if not (abs(x) <= ESCAPE and abs(y) <= ESCAPE):
            return OrbitOutcome(NON_CONVERGENT, -1, n, trace)
        try:
            x, y = secant_step(f, (x, y))
        except (Indeterminate, PoleAt):
            return OrbitOutcome(INDETERMINATE, -1, n, trace)
        if keep_trace:
            trace.append(PlanePoint(x, y))
    return OrbitOutcome(NON_CONVERGENT, -1, budget, trace)


def g_n_log_product(f, root, p, n):
    """``log|G_n(p)| = sum_k F_(n-k) log|G(S^k p)|``, summed in the log domain."""
    x, y = _as_point(p)
    total = 0.0
    for k in range(n):
        g = g_factor(f, root, (x, y))
        if abs(g) == 0.0:
            raise ZeroFactor(f"G vanishes at step {k}")
        weight = FIB[n - k] if n - k <= 92 else GOLDEN.fib_ratio(n - k, 0)
        total += weight * math.log(abs(g))
        if k + 1 < n:
            x, y = secant_step(f, (x, y))
    return total
