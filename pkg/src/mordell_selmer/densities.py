"""Local laws of the Selmer-ratio exponents, Euler products, T_m densities,
average Selmer sizes over acceptable sets and the rank-bound report."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from sympy import isprime, primerange

from .arith import prime_factors, sixth_power_free_part, valuation
from .local import local_ratio_closed

__all__ = [
    "ExponentDistribution",
    "AcceptableSetSpec",
    "local_exponent_distribution",
    "residue_exponent_distribution",
    "euler_factor_avg",
    "euler_factor_closed",
    "global_r",
    "direct_product",
    "tm_tail_bound",
    "TmTable",
    "tm_densities",
    "avg_selmer_for_set",
    "rank_bound_report",
    "EmpiricalAverage",
    "empirical_average",
    "PREFACTOR",
]

PREFACTOR = Fraction(103 * 229, 2 * 3**2 * 7**2 * 13)
MAX_DIGITS = 30


@dataclass
class ExponentDistribution:
    """Law of e_p(k) for Haar-random k in Z_p."""

    p: int
    support: dict  # e -> Fraction
    tail_nonzero_bound: Fraction = Fraction(0)

    def total(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))

    def mean_ratio(self) -> Fraction:
        return sum((Fraction(3) ** e * q for e, q in self.support.items()), Fraction(0))


# --- local laws -------------------------------------------------------------------


def _residue_depth(p: int) -> int:
    """Unit residues modulo p^j decide c_p on a valuation slice."""
    return 3 if p == 2 else 2 if p == 3 else 1


def _units(p: int, j: int):
    return [u for u in range(1, p**j) if u % p]


def _exponent(p: int, v: int, u: int) -> int:
    return local_ratio_closed(p ** (v % 6) * u, p).e


def _ratio(p: int, v: int, u: int, isogeny: str) -> Fraction:
    e = _exponent(p, v, u)
    if isogeny == "phi":
        return Fraction(3) ** e
    return Fraction(3) ** (-e) * (3 if p == 3 else 1)


def residue_exponent_distribution(p: int) -> ExponentDistribution:
    """Law of e_p by evaluating the congruence tables on every valuation slice."""
    j = _residue_depth(p)
    us = _units(p, j)
    law: dict[int, Fraction] = {}
    for i in range(6):
        w = (1 - Fraction(1, p)) * Fraction(1, p**i) / (1 - Fraction(1, p**6)) / len(us)
        for u in us:
            e = _exponent(p, i, u)
            law[e] = law.get(e, Fraction(0)) + w
    return ExponentDistribution(p, dict(sorted(law.items())))


def local_exponent_distribution(p: int) -> ExponentDistribution:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        return residue_exponent_distribution(p)
    if p % 3 == 1:
        return ExponentDistribution(p, {0: Fraction(1)})
    q = (1 - Fraction(1, p)) * (Fraction(1, p**2) + Fraction(1, p**4)) / (2 * (1 - Fraction(1, p**6)))
    return ExponentDistribution(p, {-1: q, 0: 1 - 2 * q, 1: q})


def euler_factor_avg(p: int) -> Fraction:
    """Mean of c_p(phi_k) over k in Z_p."""
    return local_exponent_distribution(p).mean_ratio()


def euler_factor_closed(p: int) -> Fraction:
    """The closed-form Euler factors of the average, written out term by term."""
    x = Fraction(1, p)
    if p == 2:
        s = Fraction(4, 3) + x + Fraction(4, 3) * x**2 + x**3 + x**4 + x**5
    elif p == 3:
        s = Fraction(5, 3) + 2 * x + Fraction(2, 3) * x**2 + Fraction(7, 3) * x**3 + 2 * x**4 + 6 * x**5
    elif p % 3 == 2:
        s = 1 + x + Fraction(5, 3) * x**2 + x**3 + Fraction(5, 3) * x**4 + x**5
    else:
        return Fraction(1)
    return (1 - x) * s / (1 - x**6)


def _hat_factor(p: int) -> Fraction:
    """Mean of c_p(phihat) over Z_p."""
    return _class_integral(p, 0, 0, "phihat")


# --- Euler product for r ------------------------------------------------------------


def _log_factor_coeffs(n: int) -> list[Fraction]:
    """Taylor coefficients of log F(x), F the p = 1/x Euler factor for p = 5 mod 6."""
    c = [Fraction(0)] * (n + 1)  # (1 - x)(1 + x + 5/3 x^2 + x^3 + 5/3 x^4 + x^5)
    for i, t in enumerate([1, 0, Fraction(2, 3), Fraction(-2, 3), Fraction(2, 3), Fraction(-2, 3), -1]):
        if i <= n:
            c[i] = Fraction(t)
    lg = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        acc = m * c[m] - sum(j * lg[j] * c[m - j] for j in range(1, m))
        lg[m] = acc / m
    for j in range(1, n // 6 + 1):
        lg[6 * j] += Fraction(1, j)
    return lg


def _mobius(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def _prime_sum_2mod3(s: int, eps) -> mpmath.mpf:
    """Sum of p^-s over primes p = 5 mod 6, from zeta and L(chi_3, s)."""

    def D(t):
        z = mpmath.log((1 - mpmath.mpf(2) ** -t) * (1 - mpmath.mpf(3) ** -t) * mpmath.zeta(t))
        lch = mpmath.log((1 + mpmath.mpf(2) ** -t) * mpmath.dirichlet(t, [0, 1, -1]))
        return (z - lch) / 2

    total = mpmath.mpf(0)
    k = 1
    while mpmath.mpf(5) ** (-k * s) > eps:
        mu = _mobius(k)
        if mu:
            total += mpmath.mpf(mu) / k * D(k * s)
        k += 2
    return total


def global_r(digits: int = 18, split: int = 100) -> dict:
    """r and the bare product over p = 5 mod 6 to ``digits`` decimals, with an error estimate.

    Primes below ``split`` are multiplied directly; the rest enter through
    log F = sum a_n x^n and prime sums recovered from log zeta and log L by
    Moebius inversion over odd k.
    """
    if digits > MAX_DIGITS:
        raise ValueError(f"at most {MAX_DIGITS} digits are supported")
    with mpmath.workdps(digits + 25):
        eps = mpmath.mpf(10) ** -(digits + 15)
        small = [p for p in primerange(5, split) if p % 6 == 5]
        head = mpmath.mpf(1)
        for p in small:
            f = euler_factor_closed(p)
            head *= mpmath.mpf(f.numerator) / f.denominator
        N = 2
        while mpmath.mpf(2) ** N * mpmath.mpf(split) ** (1 - N) > eps:
            N += 1
        a = _log_factor_coeffs(N + 1)
        tail = mpmath.mpf(0)
        for n in range(2, N + 1):
            if a[n] == 0:
                continue
            s = _prime_sum_2mod3(n, eps) - mpmath.fsum(mpmath.mpf(p) ** -n for p in small)
            tail += mpmath.mpf(a[n].numerator) / a[n].denominator * s
        omitted = abs(mpmath.mpf(a[N + 1].numerator) / a[N + 1].denominator) * mpmath.mpf(split) ** (-N)
        product = head * mpmath.exp(tail)
        r = mpmath.mpf(PREFACTOR.numerator) / PREFACTOR.denominator * product
        err = 2 * omitted + eps
        return {
            "product": _fixed(product, digits),
            "r": _fixed(r, digits),
            "one_plus_r": _fixed(1 + r, digits),
            "one_plus_r_over_3": _fixed(1 + r / 3, digits),
            "error": mpmath.nstr(err * 3, 3),
            "_product": product,
            "_r": r,
        }


def _fixed(x, digits: int) -> str:
    """x rounded to ``digits`` decimal places."""
    return mpmath.nstr(x, digits + max(1, int(mpmath.floor(mpmath.log10(abs(x)))) + 1), strip_zeros=False)


def direct_product(limit: int) -> float:
    """Unaccelerated bare product over p = 5 mod 6, p <= limit."""
    logs = [math.log(float(euler_factor_closed(p))) for p in primerange(5, limit + 1) if p % 6 == 5]
    return math.exp(math.fsum(logs))


# --- T_m densities -----------------------------------------------------------------


def tm_tail_bound(cutoff: int) -> float:
    """Upper bound for the sum over p > cutoff of P(e_p != 0)."""
    n0 = cutoff + 1
    while n0 % 6 != 5:
        n0 += 1
    return n0**-2 + n0**-4 + (1 / n0 + 1 / (3 * n0**3)) / 6


@dataclass
class TmTable:
    cutoff: int
    rows: list  # (m, mu, mu_plus, mu_minus)
    error: float
    finite_law: dict = field(default_factory=dict)  # S = sum of finite e_p -> probability

    def mu(self, m: int) -> float:
        return 0.5 * (self.finite_law.get(m + 1, 0.0) + self.finite_law.get(m, 0.0))

    def mu_plus(self, m: int) -> float:
        return 0.5 * self.finite_law.get(m + 1, 0.0)

    def mu_minus(self, m: int) -> float:
        return 0.5 * self.finite_law.get(m, 0.0)

    def expect(self, fn) -> float:
        """E[fn(m)] over the global exponent m."""
        tot = 0.0
        for s, q in self.finite_law.items():
            tot += 0.5 * q * (fn(s - 1) + fn(s))
        return tot

    def to_csv(self) -> str:
        lines = ["m,mu,mu_plus,mu_minus,error"]
        for m, a, b, c in self.rows:
            lines.append(f"{m},{a:.6f},{b:.6f},{c:.6f},{self.error:.2e}")
        return "\n".join(lines) + "\n"


def tm_densities(m_range=range(-4, 5), prime_cutoff: int = 10**4, tolerance: float | None = None) -> TmTable:
    """Densities of T_m and its sign halves; positive k carry e_inf = -1."""
    if prime_cutoff < 100:
        raise ValueError("prime_cutoff must be at least 100")
    law = np.array([1.0])
    lo = 0
    for p in primerange(2, prime_cutoff + 1):
        d = local_exponent_distribution(p)
        if set(d.support) == {0}:
            continue
        emin, emax = min(d.support), max(d.support)
        kern = np.array([float(d.support.get(e, 0)) for e in range(emin, emax + 1)])
        law = np.convolve(law, kern)
        lo += emin
    finite = {lo + i: float(q) for i, q in enumerate(law) if q > 0}
    err = tm_tail_bound(prime_cutoff) + 1e-12
    table = TmTable(prime_cutoff, [], err, finite)
    table.rows = [(m, table.mu(m), table.mu_plus(m), table.mu_minus(m)) for m in m_range]
    if tolerance is not None and err > tolerance:
        raise ArithmeticError(f"certified error {err:.2e} exceeds tolerance {tolerance}")
    return table


# --- acceptable sets ---------------------------------------------------------------


@dataclass
class AcceptableSetSpec:
    """Integers cut out by a sign and finitely many p-adic conditions.

    residues maps p to a tuple of (r, e) meaning k = r mod p^e.  Primes not
    listed are unconstrained, or restricted to p^2 not dividing k when
    squarefree_elsewhere is set.
    """

    residues: dict = field(default_factory=dict)
    sign: str = "both"
    squarefree_elsewhere: bool = False

    def __post_init__(self):
        if self.sign not in ("positive", "negative", "both"):
            raise ValueError("sign must be positive, negative or both")
        for p, classes in self.residues.items():
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            if not classes:
                raise ValueError(f"empty condition at {p}")
            for r, e in classes:
                if e < 0:
                    raise ValueError("exponents must be nonnegative")

    def contains(self, k: int) -> bool:
        if k == 0 or (self.sign == "positive" and k < 0) or (self.sign == "negative" and k > 0):
            return False
        if not all(any((k - r) % p**e == 0 for r, e in cl) for p, cl in self.residues.items()):
            return False
        if self.squarefree_elsewhere:
            return all(valuation(k, p) < 2 for p in prime_factors(k) if p not in self.residues)
        return True

    def classes_at(self, p: int):
        """Residue classes at p, or None when p is unconstrained."""
        if p in self.residues:
            return self.residues[p]
        if self.squarefree_elsewhere:
            return tuple((r, 2) for r in range(p * p) if r % (p * p))
        return None


def _slice_mean(p: int, v: int, isogeny: str) -> Fraction:
    us = _units(p, _residue_depth(p))
    return sum((_ratio(p, v, u, isogeny) for u in us), Fraction(0)) / len(us)


def _class_integral(p: int, r: int, e: int, isogeny: str) -> Fraction:
    """Integral of c_p over r + p^e Z_p (Haar measure of Z_p is 1)."""
    q = p**e
    r %= q
    if r == 0:
        tot = sum(((1 - Fraction(1, p)) * Fraction(1, p**i) * _slice_mean(p, i, isogeny) for i in range(e, e + 6)), Fraction(0))
        return tot / (1 - Fraction(1, p**6))
    v = valuation(r, p)
    j = _residue_depth(p)
    known = e - v
    u0 = (r // p**v) % p**known
    if known >= j:
        return _ratio(p, v, u0 % p**j, isogeny) / q
    lifts = [u0 + p**known * t for t in range(p ** (j - known))]
    return sum((_ratio(p, v, u, isogeny) for u in lifts), Fraction(0)) / len(lifts) / q


def _local_average(p: int, classes, isogeny: str) -> Fraction:
    E = max(e for _, e in classes)
    if p**E > 10**7:
        raise ValueError("modulus too large")
    reps = sorted({(r + p**e * t) % p**E for r, e in classes for t in range(p ** (E - e))})
    num = sum((_class_integral(p, r, E, isogeny) for r in reps), Fraction(0))
    return num / (Fraction(len(reps), p**E))


def _infinite_factor(sign: str, isogeny: str) -> Fraction:
    pos, neg = (Fraction(1, 3), Fraction(1)) if isogeny == "phi" else (Fraction(1), Fraction(1, 3))
    return {"positive": pos, "negative": neg, "both": (pos + neg) / 2}[sign]


def avg_selmer_for_set(spec: AcceptableSetSpec, isogeny: str = "phi", digits: int = 18):
    """1 + prod over places of the mean local ratio on the closure of the set."""
    if isogeny not in ("phi", "phihat"):
        raise ValueError("isogeny must be phi or phihat")
    # off p^2 every p >= 5 has c_p = 1, so the tail product collapses to 1
    base = 1 if spec.squarefree_elsewhere else global_r(digits)["_product"]
    fin = Fraction(1)
    for p in sorted(set(spec.residues) | {2, 3}):
        default = euler_factor_avg(p) if isogeny == "phi" else _hat_factor(p)
        classes = spec.classes_at(p)
        if p in (2, 3):
            fin *= default if classes is None else _local_average(p, classes, isogeny)
        elif not spec.squarefree_elsewhere:
            fin *= _local_average(p, classes, isogeny) / default
        else:
            fin *= _local_average(p, classes, isogeny)
    fin *= _infinite_factor(spec.sign, isogeny)
    with mpmath.workdps(digits + 10):
        return 1 + mpmath.mpf(fin.numerator) / fin.denominator * base


# --- rank bounds --------------------------------------------------------------------


def _w(m: int) -> float:
    return abs(m) + 3.0 ** -abs(m)


def rank_bound_report(prime_cutoff: int = 10**4, tolerance: float = 1e-3) -> dict:
    """Average-rank bounds and rank-0 / rank-1 proportions with certified slack.

    The weights |m| + 3^-|m| change by at most 1 between neighbouring m, so
    truncating the Euler product moves each expectation by at most the tail
    bound.
    """
    t = tm_densities(range(-6, 7), prime_cutoff, tolerance)
    err = t.error
    bound = t.expect(_w)
    refined = t.expect(lambda m: _w(m) if abs(m) <= 1 else 4 / 3)
    mu0, mu1 = t.mu(0), t.mu(1) + t.mu(-1)
    rank0 = (mu0 - err) / 2
    rank1 = 5 / 6 * (mu1 - 2 * err)
    return {
        "cutoff": prime_cutoff,
        "error": err,
        "avg_rank_bound": bound,
        "avg_rank_bound_certified": bound + err < 1.29,
        "refined_bound": refined,
        "refined_bound_certified": refined + err < 1.21,
        "mu_T0": mu0,
        "mu_T1_or_Tm1": mu1,
        "rank0_proportion": rank0,
        "rank0_certified": rank0 >= 0.199,
        "rank1_proportion": rank1,
        "rank1_certified": rank1 >= 0.411,
        "rank0_or_1_proportion": rank0 + rank1,
        "rank0_or_1_certified": rank0 + rank1 >= 0.61,
    }


# --- empirical averages -------------------------------------------------------------


@dataclass
class EmpiricalAverage:
    isogeny: str
    X: int
    count: int
    average: float
    series: list  # (|k| bound, running average)
    excluded_torsion: list
    partial: bool = False


def empirical_average(
    X: int,
    spec: AcceptableSetSpec | None = None,
    isogeny: str = "phi",
    tm: int | None = None,
    cache=None,
    budget_seconds: float | None = None,
    checkpoints: int = 20,
) -> EmpiricalAverage:
    """Running average of |Sel| over sixth-power-free k in spec with |k| <= X.

    k with nontrivial rational 3-torsion on E_k or E_{-27k} are kept in the
    average and also listed in excluded_torsion for separate bookkeeping.
    """
    from .curves import torsion_kernel_sizes
    from .selmer import classify_Tm, selmer_size

    if X > 10**5:
        raise ValueError("X is limited to 10^5")
    start = time.monotonic()
    ks = sorted(
        (k for k in range(-X, X + 1) if k and sixth_power_free_part(k).m == 1),
        key=lambda k: (abs(k), k),
    )
    total = count = 0
    series, excluded = [], []
    step = max(1, X // checkpoints)
    next_mark = step
    partial = False
    for k in ks:
        if abs(k) > next_mark:
            series.append((next_mark, total / count if count else float("nan")))
            next_mark += step
        if spec is not None and not spec.contains(k):
            continue
        if tm is not None and classify_Tm(k) != tm:
            continue
        if budget_seconds is not None and time.monotonic() - start > budget_seconds:
            partial = True
            break
        total += selmer_size(k, isogeny, cache)
        count += 1
        if cache is not None and count % 2000 == 0:
            cache.flush()
        tors = torsion_kernel_sizes(k)
        if tors[2] > 1 or tors[3] > 1:
            excluded.append(k)
    if not partial:
        series.append((X, total / count if count else float("nan")))
    if cache is not None:
        cache.flush()
    return EmpiricalAverage(isogeny, X, count, total / count if count else float("nan"), series, excluded, partial)
