"""Integer-matrix binary cubic forms.

A form is stored as the quarter coefficients ``(a, b, c, d)`` and stands for

    f(u, v) = a u^3 + 3b u^2 v + 3c u v^2 + d v^3,

so the middle coefficients are always multiplied by 3.  JSON serialisation
keeps the quarter coefficients; do not feed it expanded coefficients.

SL2(Z) acts by substitution: ``(M.f)(u, v) = f(m11 u + m12 v, m21 u + m22 v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels

__all__ = [
    "BinaryCubicForm",
    "UnimodularMatrix",
    "RawCubic",
    "HessianForm",
    "disc",
    "hessian",
    "covariant_g",
    "syzygy_check",
    "act",
    "canonical_form",
    "is_irreducible",
    "enumerate_classes",
    "count_classes",
]

# int64 kernels are safe below these discriminant sizes (see _kernels)
_KERNEL_POS_LIMIT = 10**9
_KERNEL_NEG_LIMIT = 10**11
_KERNEL_COUNT_LIMIT = 10**8


@dataclass(frozen=True, order=True)
class BinaryCubicForm:
    a: int
    b: int
    c: int
    d: int

    def __call__(self, u, v):
        return self.a * u**3 + 3 * self.b * u * u * v + 3 * self.c * u * v * v + self.d * v**3

    def coefficients(self) -> tuple[int, int, int, int]:
        """Expanded coefficients (a, 3b, 3c, d)."""
        return (self.a, 3 * self.b, 3 * self.c, self.d)

    def __neg__(self) -> BinaryCubicForm:
        return BinaryCubicForm(-self.a, -self.b, -self.c, -self.d)

    def to_json(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    @classmethod
    def from_json(cls, data) -> BinaryCubicForm:
        a, b, c, d = (int(x) for x in data)
        return cls(a, b, c, d)


@dataclass(frozen=True)
class UnimodularMatrix:
    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        if self.p * self.s - self.q * self.r != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: UnimodularMatrix) -> UnimodularMatrix:
        return UnimodularMatrix(
            self.p * o.p + self.q * o.r,
            self.p * o.q + self.q * o.s,
            self.r * o.p + self.s * o.r,
            self.r * o.q + self.s * o.s,
        )

    @classmethod
    def from_rows(cls, rows) -> UnimodularMatrix:
        (p, q), (r, s) = rows
        return cls(p, q, r, s)


IDENTITY = UnimodularMatrix(1, 0, 0, 1)


@dataclass(frozen=True)
class RawCubic:
    """c0 x^3 + c1 x^2 y + c2 x y^2 + c3 y^3 with arbitrary integer coefficients."""

    c0: int
    c1: int
    c2: int
    c3: int

    def __call__(self, x, y):
        return self.c0 * x**3 + self.c1 * x * x * y + self.c2 * x * y * y + self.c3 * y**3

    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)


@dataclass(frozen=True)
class HessianForm:
    """P x^2 + Q x y + R y^2."""

    P: int
    Q: int
    R: int

    def __call__(self, x, y):
        return self.P * x * x + self.Q * x * y + self.R * y * y

    def coefficients(self) -> tuple[int, int, int]:
        return (self.P, self.Q, self.R)


def disc(f: BinaryCubicForm) -> int:
    a, b, c, d = f.a, f.b, f.c, f.d
    return a * a * d * d + 4 * a * c**3 + 4 * b**3 * d - 3 * b * b * c * c - 6 * a * b * c * d


def hessian(f: BinaryCubicForm) -> HessianForm:
    a, b, c, d = f.a, f.b, f.c, f.d
    return HessianForm(a * c - b * b, a * d - b * c, b * d - c * c)


def covariant_g(f: BinaryCubicForm) -> RawCubic:
    """The Jacobian f_x h_y - f_y h_x."""
    a, b, c, d = f.a, f.b, f.c, f.d
    return RawCubic(
        3 * (a * a * d - 3 * a * b * c + 2 * b**3),
        9 * (a * b * d - 2 * a * c * c + b * b * c),
        -9 * (a * c * d - 2 * b * b * d + b * c * c),
        -3 * (a * d * d - 3 * b * c * d + 2 * c**3),
    )


def _pmul(x, y):
    out = [0] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                out[i + j] += xi * yj
    return out


def syzygy_check(f: BinaryCubicForm) -> bool:
    """Exact check of (g/3)^2 - disc(f) f^2 + 4 h^3 == 0, coefficient by coefficient."""
    g = covariant_g(f).coefficients()
    if any(x % 3 for x in g):
        return False
    g3 = [x // 3 for x in g]
    fc = list(f.coefficients())
    hc = list(hessian(f).coefficients())
    D = disc(f)
    lhs = _pmul(g3, g3)
    ff = _pmul(fc, fc)
    hhh = _pmul(_pmul(hc, hc), hc)
    return all(x - D * y + 4 * z == 0 for x, y, z in zip(lhs, ff, hhh))


def act(M: UnimodularMatrix, f: BinaryCubicForm) -> BinaryCubicForm:
    """(M.f)(u, v) = f(p u + q v, r u + s v)."""
    if not isinstance(M, UnimodularMatrix):
        M = UnimodularMatrix.from_rows(M)
    p, q, r, s = M.p, M.q, M.r, M.s
    a, b, c, d = f.a, f.b, f.c, f.d
    return BinaryCubicForm(
        f(p, r),
        a * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (2 * p * r * s + q * r * r) + d * r * r * s,
        a * p * q * q + b * (2 * p * q * s + q * q * r) + c * (p * s * s + 2 * q * r * s) + d * r * s * s,
        f(q, s),
    )


# --- reduction ---------------------------------------------------------------

_T = UnimodularMatrix(1, 1, 0, 1)
_S = UnimodularMatrix(0, -1, 1, 0)


@lru_cache(maxsize=1)
def _small_matrices() -> tuple[UnimodularMatrix, ...]:
    out = []
    for p, q, r, s in product((-1, 0, 1), repeat=4):
        if p * s - q * r == 1:
            out.append(UnimodularMatrix(p, q, r, s))
    return tuple(out)


def _covariant_quadratic(f: BinaryCubicForm):
    """Positive definite quadratic attached to f: -h if disc < 0, else the real-root covariant."""
    if disc(f) < 0:
        h = hessian(f)
        return (-h.P, -h.Q, -h.R)
    return _kernels._phi(f.a, f.b, f.c, f.d)


def _reduced_status(f: BinaryCubicForm) -> int:
    """0 not reduced, 1 strictly reduced, 2 on (or within float slack of) the boundary."""
    if disc(f) < 0:
        P, Q, R = _covariant_quadratic(f)
        if abs(Q) > P or P > R:
            return 0
        return 1 if abs(Q) < P and P < R else 2
    return int(_kernels._phi_status(f.a, f.b, f.c, f.d))


def _reduce(f: BinaryCubicForm) -> BinaryCubicForm:
    """Move f to a form whose covariant quadratic is (nearly) reduced."""
    for _ in range(10_000):
        P, Q, R = _covariant_quadratic(f)
        if abs(Q) > P * (1 + _kernels.EPS):
            t = -math.floor(Q / (2 * P) + 0.5)
            if t == 0:
                t = -1 if Q > 0 else 1
            f = act(UnimodularMatrix(1, t, 0, 1), f)
        elif P > R * (1 + _kernels.EPS):
            f = act(_S, f)
        else:
            return f
    raise RuntimeError(f"reduction did not terminate for {f}")


def _positive(f: BinaryCubicForm) -> bool:
    return f.a > 0 or (f.a == 0 and f.b > 0)


def canonical_form(f: BinaryCubicForm) -> BinaryCubicForm:
    """Deterministic representative of the SL2(Z)-class of f (disc != 0).

    The lexicographically least form with positive leading part among the
    reduced forms of the class.
    """
    if disc(f) == 0:
        raise ValueError("canonical_form needs a nonzero discriminant")
    start = _reduce(f)
    seen = {start}
    stack = [start]
    while stack:
        g = stack.pop()
        for M in _small_matrices():
            h = act(M, g)
            if h not in seen and _reduced_status(h):
                seen.add(h)
                stack.append(h)
    return min(g for g in seen if _positive(g))


def _rational_root(f: BinaryCubicForm):
    if f.a == 0:
        return (1, 0)
    a, d = f.a, f.d
    if d == 0:
        return (0, 1)
    roots = np.roots([a, 3 * f.b, 3 * f.c, d])
    for r in roots:
        if abs(r.imag) > 1e-6 * (1 + abs(r.real)):
            continue
        for y in range(1, abs(a) + 1):
            if a % y:
                continue
            x0 = round(r.real * y)
            for x in (x0 - 1, x0, x0 + 1):
                if math.gcd(x, y) == 1 and f(x, y) == 0:
                    return (x, y)
    return None


def is_irreducible(f: BinaryCubicForm) -> bool:
    """True iff f has no linear factor over Q (rational root search on f(u,1) and f(1,0))."""
    if f == BinaryCubicForm(0, 0, 0, 0):
        return False
    return _rational_root(f) is None


# --- enumeration -------------------------------------------------------------


def _candidates(D: int) -> list[BinaryCubicForm]:
    if D < 0:
        if -D <= _KERNEL_NEG_LIMIT:
            rows = _kernels.neg_disc_forms(np.int64(-D))
            return [BinaryCubicForm(*map(int, r[:4])) for r in rows]
        return _neg_candidates_py(-D)
    if D <= _KERNEL_POS_LIMIT:
        rows = _kernels.pos_disc_forms(np.int64(D))
        return [BinaryCubicForm(*map(int, r[:4])) for r in rows]
    return _pos_candidates_py(D)


def _neg_candidates_py(N: int) -> list[BinaryCubicForm]:
    out = []
    for P in range(1, math.isqrt(N // 3) + 1):
        for Q in range(-P, P + 1):
            t = Q * Q + N
            if t % (4 * P):
                continue
            R = t // (4 * P)
            if R < P:
                continue
            amax = math.isqrt(4 * P**3 // N)
            for a in range(-amax, amax + 1):
                w = 4 * P**3 - N * a * a
                s = math.isqrt(w)
                if s * s != w:
                    continue
                for num in {Q * a + s, Q * a - s}:
                    if num % (2 * P):
                        continue
                    b = num // (2 * P)
                    if (b * Q - a * R) % P:
                        continue
                    c = (b * Q - a * R) // P
                    if (c * Q - b * R) % P:
                        continue
                    f = BinaryCubicForm(a, b, c, (c * Q - b * R) // P)
                    if hessian(f) == HessianForm(-P, -Q, -R):
                        out.append(f)
    return out


def _pos_candidates_py(D: int) -> list[BinaryCubicForm]:
    # same box as the compiled kernel, arbitrary precision
    pmax = 3 * math.sqrt(D)
    amax = int(2 * D**0.25) + 1
    bmax = int(2 / 3 * math.sqrt(pmax)) + 1
    out = []
    for a in range(amax + 1):
        if a:
            cmax = int(_kernels._c_bound(a, float(D), pmax))
            if cmax < 0:
                continue
        for b in range(-bmax, bmax + 1):
            if a == 0:
                if b <= 0:
                    continue
                cmax = b
            for c in range(-cmax, cmax + 1):
                if a == 0:
                    num, den = D + 3 * b * b * c * c, 4 * b**3
                    ds = [num // den] if num % den == 0 else []
                else:
                    A, B = a * a, 4 * b**3 - 6 * a * b * c
                    C = 4 * a * c**3 - 3 * b * b * c * c - D
                    w = B * B - 4 * A * C
                    if w < 0:
                        continue
                    s = math.isqrt(w)
                    if s * s != w:
                        continue
                    ds = [(x // (2 * A)) for x in {s - B, -s - B} if x % (2 * A) == 0]
                for d in ds:
                    f = BinaryCubicForm(a, b, c, d)
                    if disc(f) == D and _reduced_status(f):
                        out.append(f)
    return out


def enumerate_classes(D: int) -> list[BinaryCubicForm]:
    """One canonical representative per SL2(Z)-class of forms with disc == D."""
    if D == 0:
        raise ValueError("enumerate_classes requires D != 0")
    reps = {canonical_form(f) for f in _candidates(D)}
    return sorted(reps)


def count_classes(X: int, sign: str = "+", irreducible_only: bool = False) -> int:
    """Number of SL2(Z)-classes with 0 < sign*disc <= X."""
    if X < 1:
        raise ValueError("X must be >= 1")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if X > _KERNEL_COUNT_LIMIT:
        raise ValueError(f"count_classes supports X <= {_KERNEL_COUNT_LIMIT}")
    kernel = _kernels.count_pos if sign == "+" else _kernels.count_neg
    strict, boundary = kernel(np.int64(X), bool(irreducible_only))
    extra = {canonical_form(BinaryCubicForm(*map(int, r[:4]))) for r in boundary}
    return int(strict) + len(extra)
