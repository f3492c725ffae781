"""Exact integer helpers: valuations, sixth-power-free parts, quadratic characters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from sympy import factorint, isprime, primerange

__all__ = [
    "SixthPowerFreeDecomposition",
    "valuation",
    "sixth_power_free_part",
    "quadratic_character",
    "legendre",
    "is_square",
    "is_rational_square",
    "integer_cube_root",
    "rational_cube_root",
    "prime_factors",
    "primes_up_to",
    "isprime",
]


@dataclass(frozen=True)
class SixthPowerFreeDecomposition:
    """``k = k0 * m**6`` with ``k0`` sixth-power-free and ``m >= 1``."""

    k0: int
    m: int


def valuation(n: int | Fraction, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero integer (or rational) ``n``."""
    if n == 0:
        raise ValueError("valuation undefined for 0")
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_factors(n: int) -> list[int]:
    """Sorted distinct primes dividing ``n`` (n != 0)."""
    if n == 0:
        raise ValueError("prime_factors undefined for 0")
    return sorted(factorint(abs(n)))


def primes_up_to(n: int) -> list[int]:
    return list(primerange(2, n + 1))


def sixth_power_free_part(k: int) -> SixthPowerFreeDecomposition:
    if k == 0:
        raise ValueError("k must be nonzero")
    k0, m = k, 1
    for p, e in factorint(abs(k)).items():
        q = e // 6
        if q:
            k0 //= p ** (6 * q)
            m *= p**q
    return SixthPowerFreeDecomposition(k0, m)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_rational_square(x: Fraction | int) -> bool:
    x = Fraction(x)
    return is_square(x.numerator) and is_square(x.denominator)


def integer_cube_root(n: int) -> int | None:
    """Exact integer cube root of ``n`` or None."""
    s = -1 if n < 0 else 1
    n = abs(n)
    r = round(n ** (1.0 / 3)) if n < 1 << 150 else _icbrt(n)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**3 == n:
            return s * c
    r = _icbrt(n)
    return s * r if r**3 == n else None


def _icbrt(n: int) -> int:
    # floor cube root by Newton iteration
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


def rational_cube_root(x: Fraction | int) -> Fraction | None:
    x = Fraction(x)
    a = integer_cube_root(x.numerator)
    b = integer_cube_root(x.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def quadratic_character(k: int, p: int) -> int:
    """Value at ``p`` of the character of the etale algebra Q[z]/(z^2 - k).

    0 if p ramifies in Q(sqrt k), +1 if split, -1 if inert; +1 for every p
    when k is a perfect square (split algebra).
    """
    if k == 0:
        raise ValueError("k must be nonzero")
    if is_square(k):
        return 1
    # reduce to the squarefree kernel at p: strip even powers of p
    v = valuation(k, p)
    if v % 2:
        return 0
    u = k // p**v
    if p == 2:
        if u % 4 == 3:
            return 0
        return 1 if u % 8 == 1 else -1
    return legendre(u, p)
