"""Arithmetic in the quadratic etale algebra K = Q[z]/(z^2 - k).

Elements are ``x + y*tau`` with ``tau^2 = k``.  When k is a perfect square
``s^2`` the algebra splits and ``tau`` maps to ``(s, -s)``; ``components()``
gives that pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import is_square, rational_cube_root

__all__ = ["KElem", "kelem_mul", "kelem_norm", "kelem_inv", "kelem_div", "is_cube_in_K"]


@dataclass(frozen=True)
class KElem:
    k: int
    x: Fraction
    y: Fraction

    def __init__(self, k, x, y=0):
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))

    @property
    def split(self) -> bool:
        return is_square(self.k)

    def components(self) -> tuple[Fraction, Fraction]:
        if not self.split:
            raise ValueError("components only exist for square k")
        s = isqrt(self.k)
        return (self.x + self.y * s, self.x - self.y * s)

    @classmethod
    def from_components(cls, k: int, c1, c2) -> KElem:
        if not is_square(k):
            raise ValueError("from_components needs square k")
        s = isqrt(k)
        c1, c2 = Fraction(c1), Fraction(c2)
        return cls(k, (c1 + c2) / 2, (c1 - c2) / (2 * s))

    def is_zero_divisor(self) -> bool:
        return kelem_norm(self) == 0

    def __mul__(self, other: KElem) -> KElem:
        return kelem_mul(self, other)

    def __truediv__(self, other: KElem) -> KElem:
        return kelem_div(self, other)

    def __pow__(self, n: int) -> KElem:
        if n < 0:
            return kelem_inv(self) ** (-n)
        out = KElem(self.k, 1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_json(self) -> dict:
        return {"k": self.k, "x": _q(self.x), "y": _q(self.y)}


def _q(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _same(a: KElem, b: KElem):
    if a.k != b.k:
        raise ValueError(f"mismatched algebras: k={a.k} and k={b.k}")


def kelem_mul(a: KElem, b: KElem) -> KElem:
    _same(a, b)
    return KElem(a.k, a.x * b.x + a.k * a.y * b.y, a.x * b.y + a.y * b.x)


def kelem_norm(a: KElem) -> Fraction:
    return a.x * a.x - a.k * a.y * a.y


def kelem_inv(a: KElem) -> KElem:
    n = kelem_norm(a)
    if n == 0:
        raise ZeroDivisionError("not invertible in K")
    return KElem(a.k, a.x / n, -a.y / n)


def kelem_div(a: KElem, b: KElem) -> KElem:
    return kelem_mul(a, kelem_inv(b))


def _integer_roots_depressed(p: int, q: int) -> list[int]:
    """Integer roots of X^3 + pX + q, by exact bisection on monotone ranges."""

    def g(X):
        return X * X * X + p * X + q

    B = 1 + max(abs(p), abs(q))
    found = set()

    def bisect(lo, hi, increasing):
        if lo > hi:
            return
        glo, ghi = g(lo), g(hi)
        if not increasing:
            glo, ghi = -glo, -ghi
        if glo > 0 or ghi < 0:
            return
        while lo < hi:
            mid = (lo + hi) // 2
            gm = g(mid) if increasing else -g(mid)
            if gm < 0:
                lo = mid + 1
            else:
                hi = mid
        if g(lo) == 0:
            found.add(lo)

    if p >= 0:
        bisect(-B, B, True)
    else:
        m = isqrt(-p // 3)
        bisect(-B, -m - 1, True)
        bisect(-m, m, False)
        bisect(m + 1, B, True)
    return sorted(found)


def _rational_roots_cubic(A3: Fraction, A1: Fraction, A0: Fraction) -> list[Fraction]:
    """Rational roots of A3 s^3 + A1 s + A0 (A3 != 0)."""
    den = 1
    for c in (A3, A1, A0):
        den = den * c.denominator // _gcd(den, c.denominator)
    a3, a1, a0 = (int(c * den) for c in (A3, A1, A0))
    # s = X / a3 turns this into the monic X^3 + a1 a3 X + a0 a3^2
    return [Fraction(X, a3) for X in _integer_roots_depressed(a1 * a3, a0 * a3 * a3)]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def cube_root_in_K(alpha: KElem) -> KElem | None:
    """Some beta with beta^3 == alpha, or None."""
    if alpha.is_zero_divisor():
        raise ValueError("cube test needs an invertible element")
    if alpha.split:
        c1, c2 = alpha.components()
        r1, r2 = rational_cube_root(c1), rational_cube_root(c2)
        if r1 is None or r2 is None:
            return None
        return KElem.from_components(alpha.k, r1, r2)
    n = rational_cube_root(kelem_norm(alpha))
    if n is None:
        return None
    k = alpha.k
    for s in _rational_roots_cubic(Fraction(4), Fraction(-3) * n, -alpha.x):
        t2 = (s * s - n) / k
        t = _rational_sqrt(t2)
        if t is None:
            continue
        for tt in {t, -t}:
            beta = KElem(k, s, tt)
            if beta * beta * beta == alpha:
                return beta
    return None


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def is_cube_in_K(alpha: KElem) -> bool:
    return cube_root_in_K(alpha) is not None
