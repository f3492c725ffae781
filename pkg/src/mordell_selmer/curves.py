"""Mordell curves E_k: y^2 = x^3 + k, the 3-isogenies between E_k and E_{-27k},
local reduction data via Tate's algorithm, torsion kernels and the Kummer map."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .algebra import KElem
from .arith import integer_cube_root, is_square, sixth_power_free_part, valuation

__all__ = [
    "MordellCurve",
    "CurvePoint",
    "INF",
    "LocalCurveData",
    "on_curve",
    "add",
    "neg",
    "mul",
    "phi_eval",
    "phihat_eval",
    "reduction_type",
    "tate",
    "tate_local_data",
    "torsion_kernel_sizes",
    "kummer_delta",
]


@dataclass(frozen=True)
class MordellCurve:
    k: int

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("E_0 is singular")

    def contains(self, P: CurvePoint) -> bool:
        return on_curve(self.k, P)


@dataclass(frozen=True)
class CurvePoint:
    """Affine point (x, y), or the point at infinity when ``x is None``."""

    x: Fraction | None = None
    y: Fraction | None = None

    @classmethod
    def affine(cls, x, y) -> CurvePoint:
        return cls(Fraction(x), Fraction(y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_json(self):
        if self.is_infinity:
            return "inf"
        return {"x": f"{self.x.numerator}/{self.x.denominator}", "y": f"{self.y.numerator}/{self.y.denominator}"}

    @classmethod
    def from_json(cls, data) -> CurvePoint:
        if data == "inf":
            return INF
        return cls.affine(Fraction(data["x"]), Fraction(data["y"]))


INF = CurvePoint()


def on_curve(k: int, P: CurvePoint) -> bool:
    return P.is_infinity or P.y * P.y == P.x**3 + k


def _check(k, P):
    if not on_curve(k, P):
        raise ValueError(f"{P} is not on y^2 = x^3 + {k}")


def neg(k: int, P: CurvePoint) -> CurvePoint:
    _check(k, P)
    return P if P.is_infinity else CurvePoint(P.x, -P.y)


def add(k: int, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    _check(k, P)
    _check(k, Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y + Q.y == 0:
            return INF
        lam = 3 * P.x * P.x / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    return CurvePoint(x3, lam * (P.x - x3) - P.y)


def mul(k: int, n: int, P: CurvePoint) -> CurvePoint:
    _check(k, P)
    if n < 0:
        return mul(k, -n, neg(k, P))
    out, base = INF, P
    while n:
        if n & 1:
            out = add(k, out, base)
        base = add(k, base, base)
        n >>= 1
    return out


def phi_eval(k: int, P: CurvePoint) -> CurvePoint:
    """The 3-isogeny E_k -> E_{-27k}; kernel {O, (0, +-sqrt k)}."""
    _check(k, P)
    if P.is_infinity or P.x == 0:
        return INF
    x, y = P.x, P.y
    return CurvePoint((x**3 + 4 * k) / (x * x), y * (x**3 - 8 * k) / x**3)


def phihat_eval(k: int, Q: CurvePoint) -> CurvePoint:
    """The dual isogeny E_{-27k} -> E_k."""
    _check(-27 * k, Q)
    if Q.is_infinity or Q.x == 0:
        return INF
    x, y = Q.x, Q.y
    return CurvePoint((x**3 - 108 * k) / (9 * x * x), y * (x**3 + 216 * k) / (27 * x**3))


def reduction_type(k: int, p: int) -> str:
    """'good' or 'bad' for E_k at p, k sixth-power-free."""
    if p == 3:
        return "bad"
    if p == 2:
        return "good" if k % 64 == 16 else "bad"
    return "bad" if k % p == 0 else "good"


# --- Tate's algorithm ----------------------------------------------------------


@dataclass(frozen=True)
class LocalCurveData:
    p: int
    kodaira_type: str
    tamagawa: int
    minimal_model_tag: str = "standard"
    disc_valuation: int = 0
    conductor_exponent: int = 0
    minimal_model: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "kodaira": self.kodaira_type,
            "tamagawa": self.tamagawa,
            "model": self.minimal_model_tag,
        }


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def _disc(a):
    b2, b4, b6, b8 = _b_invariants(*a)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def _c4(a):
    b2, b4, _, _ = _b_invariants(*a)
    return b2 * b2 - 24 * b4


def _rst(a, r, s, t):
    """Coordinate change x = x' + r, y = y' + s x' + t."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _v(n, p):
    return 10**9 if n == 0 else valuation(n, p)


def _nroots(coeffs, p):
    """Number of roots mod p of the polynomial with integer coefficients (highest first)."""
    cnt = 0
    for x in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * x + c) % p
        cnt += acc == 0
    return cnt


def _root(coeffs, p):
    for x in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * x + c) % p
        if acc == 0:
            return x
    raise ArithmeticError("expected a root mod p")


def _singular_point(a, p):
    """(x0, y0) mod p of the singular point of the reduction (p | disc)."""
    a1, a2, a3, a4, a6 = a
    if p <= 3:
        for x in range(p):
            for y in range(p):
                F = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6
                Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
                Fy = 2 * y + a1 * x + a3
                if F % p == 0 and Fx % p == 0 and Fy % p == 0:
                    return x, y
        raise ArithmeticError("no singular point found")
    b2, b4, b6, _ = _b_invariants(*a)
    inv = lambda z: pow(z % p, -1, p)  # noqa: E731
    # double root of x^3 + (b2/4) x^2 + (b4/2) x + b6/4
    bb, cc, dd = b2 * inv(4), b4 * inv(2), b6 * inv(4)
    xx = (3 * cc - bb * bb) % p
    if xx == 0:
        x0 = (-bb * inv(3)) % p
    else:
        x0 = ((bb * cc - 9 * dd) * inv(2 * xx)) % p
    y0 = (-(a1 * x0 + a3) * inv(2)) % p
    return x0, y0


def _normalise_step6(a, p):
    def ok(m):
        return m[0] % p == 0 and m[1] % p == 0 and m[2] % p**2 == 0 and m[3] % p**2 == 0 and m[4] % p**3 == 0

    if p == 2:
        for s in range(2):
            for t in range(4):
                m = _rst(a, 0, s, t)
                if ok(m):
                    return m
        raise ArithmeticError("Tate step 6 normalisation failed")
    h = pow(2, -1, p)
    s = (-a[0] * h) % p
    t = p * ((-(a[2] // p) * h) % p)
    m = _rst(a, 0, s, t)
    if not ok(m):
        raise ArithmeticError("Tate step 6 normalisation failed")
    return m


def tate(ainvs, p: int):
    """Tate's algorithm at p for an integral Weierstrass model.

    Returns (kodaira symbol, tamagawa number, conductor exponent, minimal model).
    Non-minimal input models are rescaled until minimal.
    """
    a = tuple(int(x) for x in ainvs)
    while True:
        D = _disc(a)
        if D == 0:
            raise ValueError("singular model")
        n = _v(D, p)
        if n == 0:
            return "I0", 1, 0, a
        x0, y0 = _singular_point(a, p)
        a = _rst(a, x0, 0, y0)
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8 = _b_invariants(*a)
        if b2 % p:
            # multiplicative reduction I_n
            split = _nroots([1, a1, -a2], p) > 0
            c = n if split else (2 if n % 2 == 0 else 1)
            return f"I{n}", c, 1, a
        if _v(a6, p) < 2:
            return "II", 1, n, a
        if _v(b8, p) < 3:
            return "III", 2, n - 1, a
        if _v(b6, p) < 3:
            c = 3 if _nroots([1, a3 // p, -(a6 // p**2)], p) else 1
            return "IV", c, n - 2, a
        # make p | a1, a2; p^2 | a3, a4; p^3 | a6
        a = _normalise_step6(a, p)
        a1, a2, a3, a4, a6 = a
        b, c, d = a2 // p, a4 // p**2, a6 // p**3
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x3 = 3 * c - b * b
        if w % p:
            return "I0*", 1 + _nroots([1, b, c, d], p), n - 4, a
        if x3 % p:
            # one double root: move it to 0
            if p == 2:
                r = c
            elif p == 3:
                r = b * c
            else:
                r = (b * c - 9 * d) * pow(2 * x3, -1, p)
            r = p * (r % p)
            a = _rst(a, r, 0, 0)
            a1, a2, a3, a4, a6 = a
            m = 1
            mx, my = p * p, p * p
            while True:
                xa2 = a2 // p
                xa3 = a3 // my
                xa4 = a4 // (p * mx)
                xa6 = a6 // (mx * my)
                if (xa3 * xa3 + 4 * xa6) % p:
                    c = 4 if _nroots([1, xa3, -xa6], p) else 2
                    return f"I{m}*", c, n - m - 4, a
                t = my * (xa6 % 2 if p == 2 else (-xa3 * pow(2, -1, p)) % p)
                a = _rst(a, 0, 0, t)
                a1, a2, a3, a4, a6 = a
                my *= p
                m += 1
                xa2 = a2 // p
                xa3 = a3 // my
                xa4 = a4 // (p * mx)
                xa6 = a6 // (mx * my)
                if (xa4 * xa4 - 4 * xa2 * xa6) % p:
                    c = 4 if _nroots([xa2, xa4, xa6], p) else 2
                    return f"I{m}*", c, n - m - 4, a
                if p == 2:
                    r = mx * ((xa6 * xa2) % 2)
                else:
                    r = mx * ((-xa4 * pow(2 * xa2, -1, p)) % p)
                a = _rst(a, r, 0, 0)
                a1, a2, a3, a4, a6 = a
                mx *= p
                m += 1
        # triple root: move it to 0
        if p == 2:
            r = b
        elif p == 3:
            r = _root([1, b, c, d], 3)
        else:
            r = (-b * pow(3, -1, p)) % p
        r = p * (r % p)
        a = _rst(a, r, 0, 0)
        a1, a2, a3, a4, a6 = a
        x3, x6 = a3 // (p * p), a6 // p**4
        if (x3 * x3 + 4 * x6) % p:
            c = 3 if _nroots([1, x3, -x6], p) else 1
            return "IV*", c, n - 6, a
        t = p * p * (x6 % 2 if p == 2 else (-x3 * pow(2, -1, p)) % p)
        a = _rst(a, 0, 0, t)
        a1, a2, a3, a4, a6 = a
        if a4 % p**4:
            return "III*", 2, n - 7, a
        if a6 % p**6:
            return "II*", 1, n - 8, a
        # not minimal: divide through by p
        a = (a1 // p, a2 // p**2, a3 // p**3, a4 // p**4, a6 // p**6)


def tate_local_data(k: int, p: int) -> LocalCurveData:
    """Kodaira type and Tamagawa number of E_k at p (k is reduced to its sixth-power-free part)."""
    k = sixth_power_free_part(k).k0
    tag = "standard"
    model = (0, 0, 0, 0, k)
    if p == 2 and k % 64 == 16:
        # y = 8y' + 4, x = 4x' gives y'^2 + y' = x'^3 + (k - 16)/64
        tag = "shifted_2adic"
        model = (0, 0, 1, 0, (k - 16) // 64)
    kod, c, f, minimal = tate(model, p)
    return LocalCurveData(p, kod, c, tag, _v(_disc(minimal), p), f, minimal)


# --- torsion and Kummer map ------------------------------------------------------


def torsion_kernel_sizes(k: int) -> tuple[int, int, int, int]:
    """(|E_k[phi](Q)|, |E_{-27k}[phihat](Q)|, |E_k[3](Q)|, |E_{-27k}[3](Q)|)."""
    ker_phi = 3 if is_square(k) else 1
    ker_phihat = 3 if is_square(-3 * k) else 1

    def three_torsion(kk, base):
        # extra 3-torsion (x, y) with x^3 = -4kk, y^2 = -3kk
        x = integer_cube_root(-4 * kk)
        if x is not None and is_square(-3 * kk) and x != 0:
            return base * 3
        return base

    return ker_phi, ker_phihat, three_torsion(k, ker_phi), three_torsion(-27 * k, ker_phihat)


def kummer_delta(k: int, P: CurvePoint) -> KElem:
    """Image of P under E_k(Q) -> (K*/K*^3)_{N=1}, K = Q[z]/(z^2 - k).

    Non-kernel points go to y - tau.  For kernel points (0, +-s), k = s^2,
    y - tau has a zero component; it is replaced by the inverse of the other
    component so that the result has cube norm (the class of +-1/(2 tau)).
    """
    _check(k, P)
    if P.is_infinity:
        raise ValueError("the point at infinity has trivial image")
    if P.x == 0:
        s = isqrt(k)
        c1, c2 = P.y - s, P.y + s
        if c1 == 0:
            c1 = 1 / c2
        else:
            c2 = 1 / c1
        return KElem.from_components(k, c1, c2)
    return KElem(k, P.y, -1)
