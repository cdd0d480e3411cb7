"""Truncated Taylor (degree 3) arithmetic over the complex numbers.

A :class:`Jet` ``J`` at a point ``z`` stores the coefficients ``c0..c3`` of
``f(z + t) = c0 + c1 t + c2 t^2 + c3 t^3 + O(t^4)``, so ``f^(k)(z) = k! * ck``.
"""

from __future__ import annotations

from .errors import PoleAt

POLE_TOL = 1e-300


class Jet:
    __slots__ = ("c", "at")

    def __init__(self, c, at=None):
        self.c = tuple(complex(v) for v in c)
        self.at = at

    @classmethod
    def variable(cls, z):
        z = complex(z)
        return cls((z, 1.0, 0.0, 0.0), at=z)

    @classmethod
    def constant(cls, value, at=None):
        return cls((value, 0.0, 0.0, 0.0), at=at)

    def derivatives(self):
        """Return ``(f, f', f'', f''')``."""
        c0, c1, c2, c3 = self.c
        return c0, c1, 2.0 * c2, 6.0 * c3

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.at)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(tuple(a + b for a, b in zip(self.c, o.c)), self.at)

    __radd__ = __add__

    def __neg__(self):
        return Jet(tuple(-a for a in self.c), self.at)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            w = complex(other)
            return Jet(tuple(a * w for a in self.c), self.at)
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = other.c
        return Jet(
            (
                a0 * b0,
                a0 * b1 + a1 * b0,
                a0 * b2 + a1 * b1 + a2 * b0,
                a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
            ),
            self.at,
        )

    __rmul__ = __mul__

    def reciprocal(self):
        b0, b1, b2, b3 = self.c
        if abs(b0) <= POLE_TOL:
            raise PoleAt(self.at)
        r0 = 1.0 / b0
        r1 = -b1 * r0 * r0
        r2 = -(b1 * r1 + b2 * r0) * r0
        r3 = -(b1 * r2 + b2 * r1 + b3 * r0) * r0
        return Jet((r0, r1, r2, r3), self.at)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("jets support integer powers only")
        if n < 0:
            return self.reciprocal() ** (-n)
        result = Jet.constant(1.0, self.at)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"Jet({', '.join(repr(v) for v in self.c)})"
