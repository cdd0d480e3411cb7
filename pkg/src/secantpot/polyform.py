"""Polynomial helpers: canonical rational form, Taylor shifts and Bezoutian matrices.

Coefficient lists are ascending: ``c[k]`` multiplies ``z**k``. Bivariate
polynomials are square matrices with ``M[i, j]`` multiplying ``x**i * y**j``.
All evaluators use Horner's rule and work on scalars or numpy arrays alike.
"""

from __future__ import annotations

import numpy as np


def trim(c):
    c = np.asarray(c, dtype=complex)
    n = len(c)
    while n > 1 and c[n - 1] == 0:
        n -= 1
    return c[:max(n, 1)].copy()


def degree(c):
    return len(trim(c)) - 1


def poly_add(a, b):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=complex)
    out[:len(a)] += a
    out[:len(b)] += b
    return trim(out)


def poly_mul(a, b):
    return trim(np.convolve(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)))


def poly_eval(c, z):
    acc = 0 * z + c[-1]
    for k in range(len(c) - 2, -1, -1):
        acc = acc * z + c[k]
    return acc


def poly_deriv(c):
    if len(c) == 1:
        return np.zeros(1, dtype=complex)
    return trim(np.asarray(c[1:], dtype=complex) * np.arange(1, len(c)))


def taylor_shift(c, z0):
    """Coefficients of ``t -> p(z0 + t)``, by repeated synthetic division."""
    out = np.array(c, dtype=complex)
    n = len(out)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            out[k] += z0 * out[k + 1]
    return out


class RatPoly:
    """Rational function ``num/den`` with polynomial arithmetic.

    A constant denominator is folded into the numerator; otherwise the
    denominator is made monic. Common factors are not cancelled.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1.0,)):
        num = trim(num)
        den = trim(den)
        if len(den) == 1 and den[0] == 0:
            raise ZeroDivisionError("zero denominator")
        lead = den[-1]
        self.num = trim(num / lead)
        self.den = trim(den / lead)

    @classmethod
    def coerce(cls, v):
        if isinstance(v, RatPoly):
            return v
        return cls([complex(v)])

    @property
    def is_polynomial(self):
        return len(self.den) == 1

    def __add__(self, other):
        o = RatPoly.coerce(other)
        if self.is_polynomial and o.is_polynomial:
            return RatPoly(poly_add(self.num, o.num))
        return RatPoly(
            poly_add(poly_mul(self.num, o.den), poly_mul(o.num, self.den)),
            poly_mul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatPoly.coerce(other))

    def __rsub__(self, other):
        return RatPoly.coerce(other) - self

    def __mul__(self, other):
        o = RatPoly.coerce(other)
        return RatPoly(poly_mul(self.num, o.num), poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatPoly.coerce(other)
        if len(o.num) == 1 and o.num[0] == 0:
            raise ZeroDivisionError("division by the zero polynomial")
        return RatPoly(poly_mul(self.num, o.den), poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        return RatPoly.coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return RatPoly([1.0]) / (self ** (-n))
        result = RatPoly([1.0])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"RatPoly(num={self.num.tolist()}, den={self.den.tolist()})"


def bezoutian(a, b):
    """Matrix of ``(a(x)b(y) - a(y)b(x)) / (x - y)`` as a polynomial in x and y.

    On the diagonal this reduces to ``a'(x)b(x) - a(x)b'(x)`` with no special case.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = max(len(a), len(b)) - 1
    m = max(n, 1)
    M = np.zeros((m, m), dtype=complex)
    for j in range(len(a)):
        for k in range(len(b)):
            if j == k:
                continue
            c = a[j] * b[k]
            if c == 0:
                continue
            lo, hi, sign = (k, j, 1.0) if j > k else (j, k, -1.0)
            # x^hi y^lo - y^hi x^lo = (x - y) * sum_i x^(lo+i) y^(hi-1-i)
            for i in range(hi - lo):
                M[lo + i, hi - 1 - i] += sign * c
    return M


def bivariate_eval(M, x, y):
    """Evaluate ``sum M[i, j] x^i y^j``; ``M`` may be rectangular."""
    acc = 0 * x + poly_eval(M[-1], y)
    for i in range(M.shape[0] - 2, -1, -1):
        acc = acc * x + poly_eval(M[i], y)
    return acc


def bivariate_partials(M, x, y):
    """Return the value and the two first partial derivatives."""
    m = M.shape[0]
    dx = M[1:, :] * np.arange(1, m)[:, None] if m > 1 else np.zeros((1, 1), complex)
    dy = M[:, 1:] * np.arange(1, m)[None, :] if m > 1 else np.zeros((1, 1), complex)
    val = bivariate_eval(M, x, y)
    if m == 1:
        return val, 0 * x, 0 * x
    return val, bivariate_eval(dx, x, y), bivariate_eval(dy, x, y)


def pad_square(M, m):
    out = np.zeros((m, m), dtype=complex)
    out[:M.shape[0], :M.shape[1]] = M
    return out
