"""Global 3-isogeny descent for E_k: y^2 = x^3 + k.

Forms of discriminant 4*kappa parametrize Sel of the dual isogeny into
E_kappa.  Sel_phi(E_k) uses kappa = -27k and Sel_phihat(E_{-27k}) uses
kappa = 729k (a sixth-power twist of k that is divisible by 3).  Integral
SL2(Z)-classes are filtered by local solubility and merged into SL2(Q)-classes
through their delta invariants in K = Q(sqrt(kappa)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import KElem, is_cube_in_K, kelem_mul, kelem_norm
from .arith import prime_factors, sixth_power_free_part
from .cubic_forms import BinaryCubicForm, covariant_g, disc, enumerate_classes, hessian
from .curves import torsion_kernel_sizes
from .local import INFINITY, is_locally_soluble_everywhere, local_ratio_closed

__all__ = [
    "KElem",
    "kelem_mul",
    "kelem_norm",
    "is_cube_in_K",
    "SelmerReport",
    "PHI",
    "PHIHAT",
    "admissible_points",
    "delta_invariant",
    "form_from_delta",
    "rationally_equivalent",
    "descent_kappa",
    "selmer_group",
    "selmer_size",
    "cassels_check",
    "classify_Tm",
    "place_exponents",
]

PHI = "phi"
PHIHAT = "phihat"


def _isogeny(name: str) -> str:
    aliases = {"phi": PHI, "φ": PHI, "phihat": PHIHAT, "φ̂": PHIHAT, "phi_hat": PHIHAT}
    if name not in aliases:
        raise ValueError(f"unknown isogeny {name!r}")
    return aliases[name]


# --- delta invariants -----------------------------------------------------------


def _spiral():
    """(u, v) ordered by max(|u|, |v|), then lexicographically; never (0, 0)."""
    r = 1
    while True:
        ring = [(u, v) for u in range(-r, r + 1) for v in range(-r, r + 1) if max(abs(u), abs(v)) == r]
        yield from sorted(ring, key=lambda t: (abs(t[0]) + abs(t[1]), t))
        r += 1


def admissible_points(f: BinaryCubicForm, n: int = 1) -> list[tuple[int, int]]:
    """First n spiral points with f(u, v) != 0 and h(u, v) != 0."""
    h = hessian(f)
    out = []
    for u, v in _spiral():
        if f(u, v) != 0 and h(u, v) != 0:
            out.append((u, v))
            if len(out) == n:
                return out


def delta_invariant(f: BinaryCubicForm, point: tuple[int, int] | None = None) -> KElem:
    """delta(f) = g(u,v)/6 + f(u,v) tau in Q[tau]/(tau^2 - kappa), disc(f) = 4 kappa.

    Its norm is (-h(u,v))^3, and its class modulo cubes does not depend on
    (u, v) or on the SL2(Z)-representative of f.
    """
    D = disc(f)
    if D == 0 or D % 4:
        raise ValueError("form must have disc = 4*kappa != 0")
    u, v = point if point is not None else admissible_points(f)[0]
    if f(u, v) == 0 or hessian(f)(u, v) == 0:
        raise ValueError("inadmissible point")
    return KElem(D // 4, Fraction(covariant_g(f)(u, v), 6), f(u, v))


def form_from_delta(k: int, delta: KElem) -> BinaryCubicForm:
    """The form (a k, b k, a, b) attached to delta = a + b tau (integral a, b)."""
    if delta.k != k:
        raise ValueError("delta lives in a different algebra")
    if delta.x == 0 and delta.y == 0:
        raise ValueError("delta must be nonzero")
    if delta.x.denominator != 1 or delta.y.denominator != 1:
        raise ValueError("delta must have integral coordinates")
    a, b = int(delta.x), int(delta.y)
    return BinaryCubicForm(a * k, b * k, a, b)


def rationally_equivalent(f1: BinaryCubicForm, f2: BinaryCubicForm) -> bool:
    """Same SL2(Q)-orbit, tested by the cube class of delta(f1)/delta(f2)."""
    if disc(f1) != disc(f2):
        raise ValueError("forms have different discriminants")
    return is_cube_in_K(delta_invariant(f1) / delta_invariant(f2))


# --- Selmer groups --------------------------------------------------------------


def descent_kappa(k: int, isogeny: str) -> int:
    """kappa with Sel = soluble forms of disc 4 kappa."""
    return -27 * k if _isogeny(isogeny) == PHI else 729 * k


@dataclass
class SelmerReport:
    k: int
    isogeny: str
    size: int
    class_reps: list = field(default_factory=list)  # (BinaryCubicForm, KElem)
    m: int = 0
    class_count: int = 0  # integral SL2(Z)-classes of the discriminant
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "isogeny": self.isogeny,
            "size": self.size,
            "m": self.m,
            "class_count": self.class_count,
            "reps": [f.to_json() for f, _ in self.class_reps],
            "checks": dict(self.checks),
        }


@lru_cache(maxsize=4096)
def _selmer_classes(k: int, isogeny: str) -> tuple[int, tuple]:
    kappa = descent_kappa(k, isogeny)
    forms = enumerate_classes(4 * kappa)
    reps: list[tuple[BinaryCubicForm, KElem]] = []
    for f in forms:
        if not is_locally_soluble_everywhere(f):
            continue
        d = delta_invariant(f)
        if any(is_cube_in_K(d / e) for _, e in reps):
            continue
        reps.append((f, d))
    return len(forms), tuple(reps)


def _canon(k: int) -> int:
    if k == 0:
        raise ValueError("k must be nonzero")
    return sixth_power_free_part(k).k0


def selmer_group(k: int, isogeny: str = PHI, checks: bool = True) -> SelmerReport:
    """Sel_phi(E_k) or Sel_phihat(E_{-27k}) as a set of SL2(Q)-classes of soluble forms."""
    isogeny = _isogeny(isogeny)
    k = _canon(k)
    n_forms, reps = _selmer_classes(k, isogeny)
    rep = SelmerReport(k, isogeny, len(reps), list(reps), classify_Tm(k), n_forms)
    if checks:
        rep.checks = _checks(k)
    return rep


def selmer_size(k: int, isogeny: str = PHI, cache=None) -> int:
    """|Sel|, read from and written to an optional SelmerCache."""
    isogeny = _isogeny(isogeny)
    k = _canon(k)
    if cache is not None:
        rec = cache.get(k, isogeny)
        if rec is not None:
            return rec["size"]
    rep = selmer_group(k, isogeny, checks=False)
    if cache is not None:
        cache.put(k, isogeny, rep.to_json())
    return rep.size


def _checks(k: int) -> dict:
    s_phi = len(_selmer_classes(k, PHI)[1])
    s_hat = len(_selmer_classes(k, PHIHAT)[1])
    m = classify_Tm(k)
    ker_phi, ker_hat, t_k, t_27k = torsion_kernel_sizes(k)
    lhs = Fraction(3) ** m
    rhs = Fraction(ker_hat * s_phi, ker_phi * s_hat)
    out = {"cassels_ok": lhs == rhs, "duality_ok": None}
    if t_k == 1 and t_27k == 1:
        out["duality_ok"] = Fraction(s_phi) == Fraction(3) ** m * s_hat
    return out


def cassels_check(k: int) -> bool:
    """c(phi_k) from local ratios equals the Selmer and torsion quotient."""
    return _checks(_canon(k))["cassels_ok"]


# --- T_m ------------------------------------------------------------------------


def place_exponents(k: int) -> dict:
    """e_v with c_v(phi_k) = 3**e_v at every place where it can be nonzero."""
    k = _canon(k)
    places = sorted(set([2, 3] + prime_factors(k))) + [INFINITY]
    return {p: local_ratio_closed(k, p).e for p in places}


def classify_Tm(k: int) -> int:
    """m with c(phi_k) = 3**m, the archimedean place included."""
    return sum(place_exponents(k).values())
