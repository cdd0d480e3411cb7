"""Numerical checks of the identities behind the secant dynamics and its potential.

Each check returns a :class:`CheckResult` holding the worst error seen, the
tolerance and the point where the worst error occurred. The checks compare
against independent oracles: finite differences, extended-precision orbits,
closed forms and alternative evaluation routes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from typing import Optional

import mpmath
import numpy as np

from .bottcher import (
    INDEX_SUM_LIMIT,
    direct_limit_h,
    germ_H,
    germ_jacobian_at_fixed,
    make_context,
    modulus_Hhat,
    potential_h,
)
from .dynamics import (
    FIB,
    GOLDEN,
    INV_SQRT5,
    PHI,
    g_factor,
    g_n_log_product,
    jacobian,
    orbit,
    secant_step,
)
from .errors import Indeterminate, PoleAt, SecantError, ZeroFactor
from .mero import eval_jet

DEFAULT_SEED = 42


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    samples: int
    witness: Optional[str] = None

    def as_dict(self):
        return asdict(self)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<34} max_err={self.max_error:.3e} tol={self.tolerance:.1e} n={self.samples}"
        if not self.passed and self.witness:
            text += f"  at {self.witness}"
        return text


class _Worst:
    def __init__(self, name, tol):
        self.name = name
        self.tol = tol
        self.err = 0.0
        self.where = None
        self.n = 0
        self.failed = False

    def add(self, err, where):
        self.n += 1
        if not err <= self.tol:
            self.failed = True
        if not err <= self.err:
            self.err = err if err == err else math.inf
            self.where = where
        elif self.where is None:
            self.where = where

    def fail(self, where):
        self.n += 1
        self.failed = True
        self.err = math.inf
        self.where = where

    def result(self):
        return CheckResult(self.name, not self.failed and self.n > 0, self.err, self.tol, self.n,
                           None if self.where is None else str(self.where))


def _rel(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    scale = max(float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(a - b))) / scale


def _disk(rng, n, radius):
    r = radius * np.sqrt(rng.random(n))
    t = 2 * np.pi * rng.random(n)
    return r * np.exp(1j * t)


class Sampler:
    """Seeded random points around a root."""

    def __init__(self, f, roots, root_index, seed=DEFAULT_SEED):
        self.f = f
        self.roots = roots
        self.k = root_index
        self.root = roots[root_index]
        self.rng = np.random.default_rng(seed)
        others = [abs(r.z0 - self.root.z0) for j, r in enumerate(roots) if j != root_index]
        self.reach = min([1.0] + [0.75 * d for d in others])

    def bidisk(self, n, radius):
        z0 = self.root.z0
        return [(z0 + a, z0 + b) for a, b in zip(_disk(self.rng, n, radius), _disk(self.rng, n, radius))]

    def basin(self, n, radius=None, min_radius=0.0):
        """``n`` points whose orbits converge to this root."""
        radius = self.reach if radius is None else radius
        out = []
        tries = 0
        while len(out) < n:
            tries += 1
            if tries > 200 * n:
                raise RuntimeError("could not sample enough basin points")
            (p,) = self.bidisk(1, radius)
            if max(abs(p[0] - self.root.z0), abs(p[1] - self.root.z0)) < min_radius:
                continue
            o = orbit(self.f, self.roots, p)
            if o.converged and o.root_index == self.k and o.steps >= 1:
                out.append(p)
        return out


# ---------------------------------------------------------------- constants

def check_constants():
    out = []
    w = _Worst("golden identity (j<=40)", 1e-12)
    for j in range(41):
        lhs = (PHI * FIB[j + 1] + FIB[j]) * INV_SQRT5
        rhs = PHI ** (j + 1) * INV_SQRT5
        w.add(abs(lhs - rhs) / abs(rhs), j)
    out.append(w.result())
    w = _Worst("index-sum limit (n=40)", 1e-10)
    n = 40
    s = sum(FIB[n - k] for k in range(n)) / PHI ** n
    w.add(abs(s - INDEX_SUM_LIMIT), n)
    out.append(w.result())
    w = _Worst("tail series limit (J=60)", 1e-9)
    total = 0.0
    for j in range(1, 61):
        total += FIB[1] / PHI ** (j + 1)
        total += sum(abs(FIB[j + 1 - k] / PHI ** (j + 1) - FIB[j - k] / PHI ** j) for k in range(j))
    w.add(abs(total - 2.0), 60)
    out.append(w.result())
    w = _Worst("Fibonacci ratio limits (n=40)", 1e-10)
    w.add(abs(FIB[41] / PHI ** 40 - PHI * INV_SQRT5), "F_(n+1)/phi^n")
    w.add(abs(FIB[40] / PHI ** 40 - INV_SQRT5), "F_n/phi^n")
    out.append(w.result())
    return out


# ----------------------------------------------------------------- dynamics

def check_factorization(f, roots, k, seed=DEFAULT_SEED, count=500, radius=0.5):
    w = _Worst("factorization S1 = z0 + G uv", 1e-12)
    root = roots[k]
    for p in Sampler(f, roots, k, seed).bidisk(count, radius):
        try:
            s1 = secant_step(f, p).x
            g = g_factor(f, root, p)
        except (Indeterminate, PoleAt):
            continue
        resid = abs(s1 - root.z0 - g * (p[0] - root.z0) * (p[1] - root.z0))
        w.add(resid / (1.0 + abs(s1)), p)
    return w.result()


def _fd_jacobian(f, p, step):
    x, y = p
    cols = []
    for dx, dy in ((step, 0), (0, step)):
        a = secant_step(f, (x + dx, y + dy))
        b = secant_step(f, (x - dx, y - dy))
        cols.append(((a.x - b.x) / (2 * step), (a.y - b.y) / (2 * step)))
    return np.array([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]], dtype=complex)


def check_jacobian(f, roots, k, seed=DEFAULT_SEED, off_diagonal=50, diagonal=20, step=1e-6):
    """Jacobian against central differences; errors are relative to max(1, |row one|)."""
    w = _Worst("Jacobian vs finite differences", 1e-6)
    s = Sampler(f, roots, k, seed)
    z0 = roots[k].z0
    pts = s.bidisk(off_diagonal, 1.0)
    pts += [(z0 + a, z0 + a) for a in _disk(s.rng, diagonal, 1.0)]
    for p in pts:
        try:
            J = jacobian(f, p)
            fd = _fd_jacobian(f, p, step)
        except (Indeterminate, PoleAt):
            continue
        scale = max(1.0, float(np.max(np.abs(J[0]))))
        w.add(float(np.max(np.abs(J - fd))) / scale, p)
    out = [w.result()]
    w = _Worst("Jacobian at fixed point", 1e-12)
    J = jacobian(f, (z0, z0))
    w.add(float(np.max(np.abs(J - np.array([[0, 0], [1, 0]])))), (z0, z0))
    out.append(w.result())
    return out


def check_collapse(f, roots, k, seed=DEFAULT_SEED, count=50):
    w = _Worst("collapse onto the fixed point", 1e-12)
    z0 = roots[k].z0
    for (a, b) in Sampler(f, roots, k, seed).bidisk(count, 1.0):
        try:
            p1 = secant_step(f, (z0, b))
            p2 = secant_step(f, (a, z0))
        except (Indeterminate, PoleAt):
            continue
        w.add(max(abs(p1.x - z0), abs(p1.y - z0)), (z0, b))
        w.add(max(abs(p2.x - z0), abs(p2.y - a)), (a, z0))
    return w.result()


def _mp_orbit_deviation(f, z0, p, n, dps):
    """``log|pi_1 S^n(p) - z0|`` with the root and orbit in extended precision."""
    with mpmath.workdps(dps):
        fm = lambda z: f.expr.evaluate(z)  # noqa: E731
        root = mpmath.findroot(fm, mpmath.mpc(z0))
        x, y = mpmath.mpc(p[0]), mpmath.mpc(p[1])
        for _ in range(n):
            fx, fy = fm(x), fm(y)
            x, y = (fx * y - fy * x) / (fx - fy), x
        return float(mpmath.log(abs(x - root)))


def check_iterate_identity(f, roots, k, seed=DEFAULT_SEED, count=50, max_n=8, dps=400):
    w = _Worst("Fibonacci-exponent iterate identity", 1e-8)
    root = roots[k]
    s = Sampler(f, roots, k, seed)
    for p in s.basin(count, radius=min(s.reach, 0.5)):
        u, v = p[0] - root.z0, p[1] - root.z0
        for n in range(1, max_n + 1):
            try:
                rhs = g_n_log_product(f, root, p, n) + FIB[n + 1] * math.log(abs(u)) + FIB[n] * math.log(abs(v))
            except ZeroFactor:
                continue
            lhs = _mp_orbit_deviation(f, root.z0, p, n, dps)
            w.add(abs(lhs - rhs), (p, n))
    return w.result()


def check_convergence_order(f, roots, k, seed=DEFAULT_SEED, count=50, radius=0.05):
    w = _Worst("order-phi convergence (max/median)", 10.0)
    z0 = roots[k].z0
    for p in Sampler(f, roots, k, seed).bidisk(count, radius):
        errs = [abs(p[0] - z0)]
        x, y = p
        for _ in range(60):
            try:
                x, y = secant_step(f, (x, y))
            except (Indeterminate, PoleAt):
                break
            e = abs(x - z0)
            errs.append(e)
            if e < 1e-10:
                break
        ratios = [errs[i + 1] / errs[i] ** PHI for i in range(len(errs) - 1)
                  if errs[i] >= 1e-10 and errs[i + 1] >= 1e-10]
        if len(ratios) < 2:
            continue
        w.add(max(ratios) / float(np.median(ratios)), p)
    return w.result()


# ----------------------------------------------------------------- bottcher

def check_germ_equation(f, roots, k, ctx, seed=DEFAULT_SEED, count=200):
    w = _Worst("germ functional equation", 1e-9)
    root = roots[k]
    for p in Sampler(f, roots, k, seed).bidisk(count, 0.999 * ctx.r):
        try:
            lhs = abs(germ_H(ctx, f, p))
            rhs = abs(germ_H(ctx, f, secant_step(f, p))) ** (1 / PHI) * abs(g_factor(f, root, p)) ** INV_SQRT5
        except (Indeterminate, PoleAt, SecantError) as exc:
            w.fail((p, type(exc).__name__))
            continue
        w.add(abs(lhs - rhs) / abs(rhs), p)
    return w.result()


def check_hhat_equation(f, roots, k, ctx, seed=DEFAULT_SEED, count=200):
    w = _Worst("extended modulus functional equation", 1e-8)
    root = roots[k]
    for p in Sampler(f, roots, k, seed).basin(count):
        lhs, _ = modulus_Hhat(ctx, f, roots, p)
        rhs = modulus_Hhat(ctx, f, roots, secant_step(f, p))[0] ** (1 / PHI) * abs(g_factor(f, root, p)) ** INV_SQRT5
        w.add(abs(lhs - rhs) / abs(rhs) if rhs else abs(lhs), p)
    return w.result()


def check_hhat_index(f, roots, k, ctx, seed=DEFAULT_SEED, count=50, extra=3):
    w = _Worst("extended modulus independent of N", 1e-9)
    for p in Sampler(f, roots, k, seed).basin(count):
        a, n = modulus_Hhat(ctx, f, roots, p)
        b, _ = modulus_Hhat(ctx, f, roots, p, n_index=n + extra)
        w.add(abs(a - b) / abs(b), p)
    return w.result()


def check_potential(f, roots, k, ctx, seed=DEFAULT_SEED, count=200):
    """Potential functional equation and the range 0 <= h < 1."""
    eq = _Worst("potential functional equation", 1e-8)
    rng = _Worst("potential range 0 <= h < 1", 0.0)
    for p in Sampler(f, roots, k, seed).basin(count):
        h0 = potential_h(ctx, f, roots, p).h
        h1 = potential_h(ctx, f, roots, secant_step(f, p)).h
        for h in (h0, h1):
            rng.add(0.0 if 0.0 <= h < 1.0 else 1.0, p)
        if h0 > 1e-30:
            expected = h0 ** PHI
            eq.add(abs(h1 - expected) / expected, p)
    return [eq.result(), rng.result()]


def check_estimators(f, roots, k, ctx, seed=DEFAULT_SEED, count=100):
    out = []
    pts = Sampler(f, roots, k, seed).basin(count)
    for norm in ("linf", "l2"):
        w = _Worst(f"potential vs direct limit ({norm})", 1e-7)
        for p in pts:
            h = potential_h(ctx, f, roots, p).h
            try:
                d = direct_limit_h(f, roots, p, norm)
            except SecantError as exc:
                w.fail((p, type(exc).__name__))
                continue
            w.add(abs(h - d) / h if h else abs(d), p)
        out.append(w.result())
    return out


def check_branches(f, roots, k, ctx, seed=DEFAULT_SEED, count=50):
    w = _Worst("modulus independent of branch", 1e-10)
    other = make_context(f, roots[k], branch_index=1)
    r = min(ctx.r, other.r)
    for p in Sampler(f, roots, k, seed).bidisk(count, 0.999 * r):
        a = abs(germ_H(ctx, f, p))
        b = abs(germ_H(other, f, p))
        w.add(abs(a - b) / abs(a), p)
    return w.result()


def check_fixed_point_values(f, roots, k, ctx):
    z0 = roots[k].z0
    w = _Worst("germ value at the fixed point", 1e-10)
    h = germ_H(ctx, f, (z0, z0))
    w.add(abs(h - cmath.exp(INDEX_SUM_LIMIT * ctx.w0)) / abs(h), (z0, z0))
    return w.result()


def check_germ_gradient(f, roots, k, ctx, step=1e-5):
    w = _Worst("germ gradient vs finite differences", 1e-5)
    z0 = roots[k].z0
    dh = germ_jacobian_at_fixed(ctx, f)
    step = min(step, 0.25 * ctx.r)
    fd = np.array([
        (germ_H(ctx, f, (z0 + step, z0)) - germ_H(ctx, f, (z0 - step, z0))) / (2 * step),
        (germ_H(ctx, f, (z0, z0 + step)) - germ_H(ctx, f, (z0, z0 - step))) / (2 * step),
    ])
    scale = max(float(np.max(np.abs(dh))), 1e-300)
    for i in range(2):
        w.add(abs(fd[i] - dh[i]) / scale, ("dH", i))
    return w.result()


def check_zero_set(f, roots, k, ctx, seed=DEFAULT_SEED, count=50):
    w = _Worst("zero equipotential", 0.0)
    z0 = roots[k].z0
    s = Sampler(f, roots, k, seed)
    w.add(potential_h(ctx, f, roots, (z0, z0)).h, (z0, z0))
    for (a, b) in s.bidisk(10, s.reach):
        for p, other in (((z0, b), b), ((a, z0), a)):
            try:
                if f.value(other) == 0:
                    continue
                out = orbit(f, roots, p)
            except PoleAt:
                continue
            if out.converged and out.root_index == k:
                w.add(potential_h(ctx, f, roots, p).h, p)
    pos = _Worst("positive potential off the zero set", 0.0)
    for p in s.basin(count):
        h = potential_h(ctx, f, roots, p).h
        pos.add(0.0 if h > 0 else 1.0, p)
    return [w.result(), pos.result()]


def check_jets(f, seed=DEFAULT_SEED, count=100, dps=50):
    """Jets against extended-precision central differences at step 1e-5 (1 + |z|)."""
    w = _Worst("jets vs central differences", 1e-6)
    rng = np.random.default_rng(seed)
    pts = _disk(rng, count, 2.0)
    with mpmath.workdps(dps):
        fm = lambda z: f.expr.evaluate(z)  # noqa: E731
        for z in pts:
            try:
                jet = eval_jet(f, z)
            except PoleAt:
                continue
            h = mpmath.mpf(1e-5 * (1 + abs(z)))
            zm = mpmath.mpc(z)
            try:
                vals = {j: fm(zm + j * h) for j in (-2, -1, 0, 1, 2)}
            except ZeroDivisionError:
                continue
            fd = [
                (vals[1] - vals[-1]) / (2 * h),
                (vals[1] - 2 * vals[0] + vals[-1]) / h ** 2,
                (vals[2] - 2 * vals[1] + 2 * vals[-1] - vals[-2]) / (2 * h ** 3),
            ]
            for order in range(3):
                ref = complex(fd[order])
                scale = max(abs(ref), abs(jet[0]), 1.0)
                w.add(abs(jet[order + 1] - ref) / scale, (z, order + 1))
    return w.result()


def run_suite(f, roots, k, seed=DEFAULT_SEED, scale=1.0):
    """All checks for root ``k``; ``scale`` shrinks the sample counts."""
    c = lambda n: max(2, int(round(n * scale)))  # noqa: E731
    results = []
    results += check_constants()
    results.append(check_jets(f, seed, c(100)))
    results.append(check_factorization(f, roots, k, seed, c(500)))
    results += check_jacobian(f, roots, k, seed, c(50), c(20))
    results.append(check_collapse(f, roots, k, seed, c(50)))
    results.append(check_iterate_identity(f, roots, k, seed, c(50)))
    results.append(check_convergence_order(f, roots, k, seed, c(50)))
    ctx = make_context(f, roots[k])
    results.append(check_fixed_point_values(f, roots, k, ctx))
    results.append(check_germ_gradient(f, roots, k, ctx))
    results.append(check_germ_equation(f, roots, k, ctx, seed, c(200)))
    results.append(check_hhat_equation(f, roots, k, ctx, seed, c(200)))
    results.append(check_hhat_index(f, roots, k, ctx, seed, c(50)))
    results += check_potential(f, roots, k, ctx, seed, c(200))
    results += check_estimators(f, roots, k, ctx, seed, c(100))
    results.append(check_branches(f, roots, k, ctx, seed, c(50)))
    results += check_zero_set(f, roots, k, ctx, seed, c(50))
    return results
