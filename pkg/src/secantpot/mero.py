"""Rational functions of one complex variable with exact low-order jets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as _expr
from .errors import NoConvergence, NotSimpleRoot, PoleAt, UnsupportedOperation
from .jet import POLE_TOL, Jet
from .polyform import RatPoly, bezoutian, bivariate_eval, pad_square, poly_eval, taylor_shift, trim

ROOT_TOL = 1e-12
SIMPLE_TOL = 1e-8
EXC_TOL = 1e-8
NEWTON_STEPS = 64


@dataclass(frozen=True, eq=False)
class MeroFn:
    """A rational function ``num/den`` built from an expression tree.

    ``step_num`` and ``step_den`` hold the bivariate polynomials whose ratio is
    the first coordinate of the secant map; they share the common factor
    ``den(x) den(y)`` with the divided differences.
    """

    text: str
    expr: _expr.Node
    num: np.ndarray
    den: np.ndarray
    step_num: np.ndarray = field(repr=False)
    step_den: np.ndarray = field(repr=False)

    @classmethod
    def from_expr(cls, node, text=None):
        try:
            rp = node.evaluate(RatPoly([0.0, 1.0]))
        except ZeroDivisionError:
            raise UnsupportedOperation("expression divides by zero identically") from None
        rp = RatPoly.coerce(rp)
        if len(rp.num) == 1 and len(rp.den) == 1:
            raise UnsupportedOperation("constant functions have no secant dynamics")
        num, den = rp.num, rp.den
        zden = np.concatenate([[0.0], den])
        step_num = bezoutian(num, zden)
        step_den = pad_square(bezoutian(num, den), step_num.shape[0])
        return cls(text if text is not None else _expr.to_text(node), node, num, den, step_num, step_den)

    @property
    def is_polynomial(self):
        return len(self.den) == 1

    @property
    def degree(self):
        return max(len(self.num), len(self.den)) - 1

    def value(self, z):
        """Value at ``z`` via the canonical form; raises PoleAt at poles."""
        d = poly_eval(self.den, z)
        if abs(d) <= POLE_TOL:
            raise PoleAt(z)
        return complex(poly_eval(self.num, z) / d)

    def den_value(self, z):
        return poly_eval(self.den, z)

    def poles(self):
        if self.is_polynomial:
            return np.zeros(0, dtype=complex)
        return np.roots(self.den[::-1])

    def to_text(self):
        return _expr.to_text(self.expr)


def parse_function(text):
    """Parse text such as ``"(z^2-1)*(z-1/2)"`` into a :class:`MeroFn`."""
    return MeroFn.from_expr(_expr.parse(text), text)


def eval_jet(f, z):
    """Return ``(f, f', f'', f''')`` at ``z`` by truncated Taylor propagation."""
    z = complex(z)
    try:
        out = f.expr.evaluate(Jet.variable(z))
    except ZeroDivisionError:
        raise PoleAt(z) from None
    if not isinstance(out, Jet):
        out = Jet.constant(out, z)
    return out.derivatives()


@dataclass(frozen=True, eq=False)
class RootInfo:
    z0: complex
    d1: complex
    d2: complex
    d3: complex
    exceptional: bool
    # Centered data: with u = x - z0, v = y - z0 the factor G of the secant map
    # is g_num(u, v) / g_den(u, v); g_den(0, 0) = d1 * den(z0)^2 != 0.
    g_num: np.ndarray = field(repr=False, default=None)
    g_den: np.ndarray = field(repr=False, default=None)
    shifted_den: np.ndarray = field(repr=False, default=None)

    @property
    def g0(self):
        return self.d2 / (2.0 * self.d1)

    @classmethod
    def build(cls, f, z0):
        z0 = complex(z0)
        f0, f1, f2, f3 = eval_jet(f, z0)
        cn = taylor_shift(f.num, z0)
        cn[0] = 0.0
        cd = taylor_shift(f.den, z0)
        g_den = bezoutian(cn, cd)
        g_num = pad_square(bezoutian(trim(cn[1:]), cd), g_den.shape[0])
        return cls(
            z0, f1, f2, f3, bool(abs(f2) <= EXC_TOL * abs(f1)), g_num, g_den, cd
        )


def certify_root(f, guess):
    """Polish ``guess`` by Newton's method and validate it as a simple root."""
    z = complex(guess)
    converged = False
    try:
        for _ in range(NEWTON_STEPS):
            f0, f1, _, _ = eval_jet(f, z)
            if f0 == 0:
                converged = True
                break
            if f1 == 0:
                break
            step = f0 / f1
            z = z - step
            if not math.isfinite(abs(z)):
                break
            if abs(step) <= 1e-15 * max(1.0, abs(z)):
                converged = True
                break
        f0, f1, _, _ = eval_jet(f, z)
    except PoleAt:
        raise NoConvergence(f"Newton iteration from {guess} ran into a pole") from None
    if abs(f1) <= SIMPLE_TOL:
        raise NotSimpleRoot(f"|f'| = {abs(f1):.3g} at z = {z}")
    scale = max(1.0, abs(z) * abs(f1))
    if not converged or abs(f0) > ROOT_TOL * scale:
        raise NoConvergence(f"Newton iteration from {guess} did not converge")
    # drop roundoff-sized real or imaginary parts when that costs no accuracy
    for snapped in (complex(z.real, 0.0), complex(0.0, z.imag)):
        if snapped != z and abs(z - snapped) <= 1e-14 * abs(z):
            try:
                if abs(f.value(snapped)) <= abs(f0):
                    z = snapped
            except PoleAt:
                pass
    return RootInfo.build(f, z)


def _same_root(a, b):
    return abs(a - b) <= 1e-8 * max(1.0, abs(a))


def find_roots(f, window=None, grid=16):
    """Certified simple roots from Newton seeds, sorted by real then imaginary part.

    Seeds are the numerator's companion-matrix roots plus, when ``window``
    ``(re_min, re_max, im_min, im_max)`` is given, a ``grid x grid`` lattice;
    only roots inside the window are kept in that case.
    """
    seeds = list(np.roots(f.num[::-1])) if len(f.num) > 1 else []
    if window is not None:
        re0, re1, im0, im1 = window
        for a in np.linspace(re0, re1, grid):
            for b in np.linspace(im0, im1, grid):
                seeds.append(complex(a, b))
    found = []
    for s in seeds:
        try:
            r = certify_root(f, s)
        except (NoConvergence, NotSimpleRoot):
            continue
        if window is not None:
            re0, re1, im0, im1 = window
            if not (re0 <= r.z0.real <= re1 and im0 <= r.z0.imag <= im1):
                continue
        if not any(_same_root(r.z0, q.z0) for q in found):
            found.append(r)
    found.sort(key=lambda r: (round(r.z0.real, 9), round(r.z0.imag, 9)))
    return found


def divided_difference(f, x, y):
    """Return the divided differences ``(T_fid, T_f1)`` of f at ``(x, y)``.

    ``T_fid = (f(x) y - f(y) x)/(x - y)`` and ``T_f1 = (f(x) - f(y))/(x - y)``,
    continued analytically to ``x = y``. Both are exact polynomial ratios, so
    there is no cancellation as ``y`` approaches ``x``.
    """
    x = complex(x)
    y = complex(y)
    dx = poly_eval(f.den, x)
    dy = poly_eval(f.den, y)
    if abs(dx) <= POLE_TOL:
        raise PoleAt(x)
    if abs(dy) <= POLE_TOL:
        raise PoleAt(y)
    scale = dx * dy
    return (
        complex(bivariate_eval(f.step_num, x, y) / scale),
        complex(bivariate_eval(f.step_den, x, y) / scale),
    )
