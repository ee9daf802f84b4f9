"""The imaginary quadratic field Q(sqrt(-d)) and its binary form (a, b, c).

The Bessel data is a half-integral matrix S = [[a, b/2], [b/2, c]] with
b^2 - 4ac = -d.  Its companion xi = [[b/2, c], [-a, -b/2]] satisfies
xi^2 = -d/4, so x + y*xi corresponds to x + y*sqrt(-d)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactring import QuadElement
from .symplectic import GMat


class ConfigError(ValueError):
    pass


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_inert(d, p):
    """True iff the odd prime p is inert in Q(sqrt(-d))."""
    return p % 2 == 1 and d % p != 0 and legendre(-d, p) == -1


@dataclass(frozen=True)
class DiscParams:
    d: int
    a: int
    b: int
    c: int

    @property
    def alpha(self):
        """(b + sqrt(-d)) / (2c)."""
        return QuadElement(Fraction(self.b, 2 * self.c), Fraction(1, 2 * self.c), self.d)

    def sqrt_minus_d(self):
        return QuadElement(0, 1, self.d)

    def xi(self):
        return GMat([[Fraction(self.b, 2), self.c], [-self.a, Fraction(-self.b, 2)]])

    def torus(self, x, y):
        """The 2x2 matrix x + y*xi."""
        x, y = Fraction(x), Fraction(y)
        return GMat([[x + y * Fraction(self.b, 2), y * self.c],
                     [-y * self.a, x - y * Fraction(self.b, 2)]])

    def as_dict(self):
        return {"d": self.d, "a": self.a, "b": self.b, "c": self.c}


def derive_params(d, p):
    """Choose (a, b, c) with c = 1 and a, c units at p, the smallest b of the right parity.

    Raises ConfigError when -d is not a discriminant, when p is not inert,
    or when no admissible form exists.
    """
    if d <= 0:
        raise ConfigError(f"d must be positive, got {d}")
    if d % 4 not in (0, 3):
        raise ConfigError(f"-{d} is not a discriminant (need d = 0 or 3 mod 4)")
    if not is_inert(d, p):
        raise ConfigError(f"p={p} is not inert in Q(sqrt(-{d}))")
    c = 1
    for b in range(1 if d % 2 else 2, 2 * p + 3, 2):
        a = (b * b + d) // (4 * c)
        if a % p:
            return DiscParams(d, a, b, c)
    raise ConfigError(f"no form with a unit at p={p}")
