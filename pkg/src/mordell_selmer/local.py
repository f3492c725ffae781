"""Local data at a place p <= infinity: Selmer ratios of phi_k, solubility of
z^3 = f(u, v) over Q_p, kernel sizes and soluble-class counts."""

from __future__ import annotations

from dataclasses import dataclass

from .arith import legendre, prime_factors, quadratic_character, sixth_power_free_part, valuation
from .cubic_forms import BinaryCubicForm, disc
from .curves import reduction_type, tate_local_data

__all__ = [
    "INFINITY",
    "LocalRatioExponent",
    "local_ratio_closed",
    "local_ratio_tamagawa",
    "is_locally_soluble",
    "is_locally_soluble_everywhere",
    "bad_primes",
    "local_kernel_size",
    "count_soluble_classes_local",
    "is_square_Qp",
]

INFINITY = "inf"


@dataclass(frozen=True)
class LocalRatioExponent:
    """c_p(phi_k) = 3**e."""

    p: int | str
    e: int

    @property
    def value(self):
        from fractions import Fraction

        return Fraction(3) ** self.e


def _canon(k: int) -> int:
    if k == 0:
        raise ValueError("k must be nonzero")
    return sixth_power_free_part(k).k0


def _exponent_at_3(k: int) -> int:
    v = valuation(k, 3)
    k3 = k // 3**v
    if v == 5 and k3 % 3 == 2:
        return 2
    if v == 0 and k3 % 9 in (5, 7):
        return 1
    if v in (1, 4) and k3 % 3 == 2:
        return 1
    if v == 3 and k3 % 9 not in (2, 4):
        return 1
    if v == 5 and k3 % 3 == 1:
        return 1
    if v == 2 and k3 % 3 == 1:
        return -1
    return 0


def local_ratio_closed(k: int, p) -> LocalRatioExponent:
    """Exponent of c_p(phi_k) from the congruence tables (p prime or INFINITY)."""
    k = _canon(k)
    if p == INFINITY:
        return LocalRatioExponent(p, -1 if k > 0 else 0)
    if p == 3:
        return LocalRatioExponent(p, _exponent_at_3(k))
    if p % 3 == 2 and valuation(4 * k, p) in (2, 4):
        return LocalRatioExponent(p, -quadratic_character(k, p))
    return LocalRatioExponent(p, 0)


def local_ratio_tamagawa(k: int, p: int) -> LocalRatioExponent:
    """Exponent of c_p(phi_k) = c_p(E_{-27k}) / c_p(E_k), times 3 when p = 3 and 27 | k."""
    k = _canon(k)
    num = tate_local_data(-27 * k, p).tamagawa
    den = tate_local_data(k, p).tamagawa
    if p == 3 and k % 27 == 0:
        num *= 3
    e = 0
    while num % 3 == 0 and num > den:
        num //= 3
        e += 1
    while den % 3 == 0 and den > num:
        den //= 3
        e -= 1
    if num != den:
        raise ArithmeticError(f"Tamagawa ratio for k={k}, p={p} is not a power of 3")
    return LocalRatioExponent(p, e)


# --- solubility of z^3 = f(u, v) over Q_p -------------------------------------


def _unit_is_cube(u: int, p: int) -> bool | None:
    """Whether a p-adic unit known modulo p (p != 3) or 9 (p = 3) is a cube."""
    if p == 2 or p % 3 == 2:
        return True
    if p == 3:
        return u % 9 in (1, 8)
    return pow(u % p, (p - 1) // 3, p) == 1


def _val(n: int, p: int) -> int:
    return 10**9 if n == 0 else valuation(n, p)


def _chart_soluble(coeffs, p: int) -> bool:
    """Is there t in Z_p with g(t) a cube in Q_p, g = c3 t^3 + c2 t^2 + c1 t + c0?"""
    c3, c2, c1, c0 = coeffs
    stack = [(0, 1)]  # classes t0 + s Z_p
    while stack:
        t0, s = stack.pop()
        g0 = ((c3 * t0 + c2) * t0 + c1) * t0 + c0
        if g0 == 0:
            return True
        g1 = (3 * c3 * t0 + 2 * c2) * t0 + c1
        g2 = 3 * c3 * t0 + c2
        # G(x) = g(t0 + s x) = g0 + g1 s x + g2 s^2 x^2 + c3 s^3 x^3
        v0 = valuation(g0, p)
        v1 = _val(g1 * s, p)
        m = min(v1, _val(g2 * s * s, p), _val(c3 * s**3, p))
        if v0 < m:
            if v0 % 3:
                continue
            need = 2 if p == 3 else 1
            if m - v0 >= need:
                if _unit_is_cube(g0 // p**v0, p):
                    return True
                continue
        elif v0 > 2 * _val(g1, p):
            # Hensel at t0: g has a root in Z_p
            return True
        for j in range(p):
            stack.append((t0 + s * j, s * p))
    return False


def is_locally_soluble(f: BinaryCubicForm, p: int) -> bool:
    """Does z^3 = f(u, v) have a nonzero Q_p-point?

    Points of P^1(Q_p) are covered by (t : 1) and (1 : p t) with t in Z_p;
    each chart is searched by residue-class refinement with Hensel and
    unit-cube certificates, so the answer is exact.
    """
    a, b3, c3, d = f.coefficients()
    if disc(f) == 0:
        raise ValueError("form must have nonzero discriminant")
    # f(t, 1) = a t^3 + 3b t^2 + 3c t + d
    if _chart_soluble((a, b3, c3, d), p):
        return True
    # f(1, p t) = d p^3 t^3 + 3c p^2 t^2 + 3b p t + a
    return _chart_soluble((d * p**3, c3 * p * p, b3 * p, a), p)


def bad_primes(f: BinaryCubicForm) -> list[int]:
    """Primes where z^3 = f may fail to have points: 3 and the primes dividing disc(f)."""
    return sorted(set([3] + prime_factors(disc(f))))


def is_locally_soluble_everywhere(f: BinaryCubicForm, primes=None) -> bool:
    """Solubility at every place; the real place always has points."""
    for p in primes if primes is not None else bad_primes(f):
        if not is_locally_soluble(f, p):
            return False
    return True


# --- kernels and local class counts --------------------------------------------


def is_square_Qp(n: int, p: int) -> bool:
    if n == 0:
        return True
    v = valuation(n, p)
    if v % 2:
        return False
    u = n // p**v
    if p == 2:
        return u % 8 == 1
    return legendre(u, p) == 1


def local_kernel_size(k: int, p, which: str = "phi") -> int:
    """|E_k[phi](Q_p)| (which='phi') or |E_{-27k}[phihat](Q_p)| (which='phihat')."""
    if k == 0:
        raise ValueError("k must be nonzero")
    n = k if which == "phi" else -3 * k
    if which not in ("phi", "phihat"):
        raise ValueError("which must be 'phi' or 'phihat'")
    if p == INFINITY:
        return 3 if n > 0 else 1
    return 3 if is_square_Qp(n, p) else 1


def count_soluble_classes_local(k: int, p: int) -> int:
    """Number of soluble SL2(Q_p)-orbits of disc 4k (p != 3)."""
    if p == 3:
        raise ValueError("no closed form for the soluble-class count at p = 3")
    k = _canon(k)
    if reduction_type(k, p) == "good":
        return local_kernel_size(k, p, "phihat")
    return local_kernel_size(k, p, "phi")
