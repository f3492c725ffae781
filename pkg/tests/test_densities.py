from fractions import Fraction

import mpmath
import numpy as np
import pytest

from mordell_selmer.densities import (
    AcceptableSetSpec,
    avg_selmer_for_set,
    direct_product,
    empirical_average,
    euler_factor_avg,
    euler_factor_closed,
    global_r,
    local_exponent_distribution,
    rank_bound_report,
    residue_exponent_distribution,
    tm_densities,
    tm_tail_bound,
)
from mordell_selmer.selmer import classify_Tm


def test_distribution_examples():
    assert local_exponent_distribution(7).support == {0: 1}
    d = local_exponent_distribution(5)
    q = Fraction(4, 5) * (Fraction(1, 25) + Fraction(1, 625)) / (2 * (1 - Fraction(1, 5**6)))
    assert d.support[1] == d.support[-1] == q
    with pytest.raises(ValueError):
        local_exponent_distribution(9)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17, 23, 29, 31, 41, 47])
def test_distribution_sums_to_one(p):
    assert local_exponent_distribution(p).total() == 1


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 23, 29, 53])
def test_closed_law_matches_residue_tables(p):
    assert local_exponent_distribution(p).support == {
        e: q for e, q in residue_exponent_distribution(p).support.items() if q
    } or set(local_exponent_distribution(p).support) == {0}
    assert local_exponent_distribution(p).mean_ratio() == residue_exponent_distribution(p).mean_ratio()


def test_p3_slice_v5_mean_is_6():
    from mordell_selmer.densities import _slice_mean

    assert _slice_mean(3, 5, "phi") == 6


def test_euler_factors():
    assert euler_factor_avg(2) == euler_factor_closed(2)
    assert euler_factor_avg(3) == euler_factor_closed(3)
    assert euler_factor_avg(7) == 1
    assert euler_factor_avg(2) * euler_factor_avg(3) == Fraction(103 * 229, 2 * 3**2 * 7**2 * 13)
    for p in (5, 11, 17, 23, 29, 41, 47, 53, 59, 71):
        assert euler_factor_avg(p) == euler_factor_closed(p)


def test_global_r():
    g = global_r(18)
    assert g["product"] == "1.033735512017364858"
    assert g["r"].startswith("2.1265")
    assert g["one_plus_r"].startswith("3.1265")
    assert g["one_plus_r_over_3"].startswith("1.7088")
    with pytest.raises(ValueError):
        global_r(31)


def test_global_r_split_independence():
    a = global_r(25, split=100)["_product"]
    b = global_r(25, split=300)["_product"]
    assert abs(a - b) < mpmath.mpf(10) ** -25


def test_direct_product_cross_check():
    assert abs(direct_product(10**6) - float(global_r(18)["_product"])) < 1e-6


def test_tail_bound_monotone():
    vals = [tm_tail_bound(c) for c in (100, 500, 1000, 5000, 10**4, 10**5)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_tm_table_shape_and_mass():
    t = tm_densities(range(-4, 5), 2000)
    assert abs(sum(t.finite_law.values()) - 1) < 1e-12
    assert abs(sum(t.mu(m) for m in range(-30, 30)) - 1) < 1e-12
    assert abs(t.mu(0) - 0.399) <= 0.001 + t.error
    assert abs(t.mu_plus(1) - 0.031) <= 0.001 + t.error
    for m in range(-4, 4):
        assert t.mu_minus(m + 1) == t.mu_plus(m)
    with pytest.raises(ValueError):
        tm_densities(range(1), 50)
    with pytest.raises(ArithmeticError):
        tm_densities(range(1), 100, tolerance=1e-6)


def test_tm_sampling_agrees_with_densities():
    rng = np.random.default_rng(7)
    n = 12000
    ks = [int(k) for k in rng.integers(-10**6, 10**6, size=n) if k]
    counts = {}
    for k in ks:
        m = classify_Tm(k)
        counts[m] = counts.get(m, 0) + 1
    t = tm_densities(range(-4, 5), 10**4)
    for m in range(-3, 3):
        mu = t.mu(m)
        se = (mu * (1 - mu) / len(ks)) ** 0.5
        assert abs(counts.get(m, 0) / len(ks) - mu) <= 3 * se + t.error, m


def test_acceptable_averages():
    assert mpmath.almosteq(avg_selmer_for_set(AcceptableSetSpec(sign="negative")), 1 + global_r(18)["_r"], 1e-15)
    assert mpmath.almosteq(avg_selmer_for_set(AcceptableSetSpec(sign="positive")), 1 + global_r(18)["_r"] / 3, 1e-15)


def test_acceptable_subset_of_Tm():
    S = AcceptableSetSpec({2: ((5, 3),), 3: ((5, 2),)}, "positive", squarefree_elsewhere=True)
    assert {classify_Tm(k) for k in range(1, 5000) if S.contains(k)} == {1}
    assert avg_selmer_for_set(S, "phi") == 4
    assert mpmath.almosteq(avg_selmer_for_set(S, "phihat"), mpmath.mpf(4) / 3)


@pytest.mark.parametrize("r2", [1, 3, 5, 7])
@pytest.mark.parametrize("r3", [1, 2, 5, 8])
@pytest.mark.parametrize("sign", ["positive", "negative"])
def test_squarefree_sets_inside_one_Tm(r2, r3, sign):
    # on such a set every k has the same m, so the average is 1 + 3^m
    S = AcceptableSetSpec({2: ((r2, 3),), 3: ((r3, 2),)}, sign, squarefree_elsewhere=True)
    ms = {classify_Tm(k) for k in range(-4000, 4000) if S.contains(k)}
    assert len(ms) == 1
    assert mpmath.almosteq(avg_selmer_for_set(S, "phi"), 1 + mpmath.mpf(3) ** ms.pop())


def test_tm_weighted_average_matches_euler_product():
    t = tm_densities(range(-4, 5), 10**4)
    neg = sum(2 * t.mu_minus(m) * (1 + 3.0**m) for m in range(-15, 15))
    assert abs(neg - float(1 + global_r(18)["_r"])) < 1e-3


def test_spec_validation():
    with pytest.raises(ValueError):
        AcceptableSetSpec(sign="odd")
    with pytest.raises(ValueError):
        AcceptableSetSpec({4: ((1, 1),)})
    S = AcceptableSetSpec({5: ((1, 1), (4, 1))}, "positive")
    assert S.contains(11) and not S.contains(-11) and not S.contains(12)


def test_rank_report():
    rep = rank_bound_report()
    assert rep["avg_rank_bound"] < 1.29 and rep["avg_rank_bound_certified"]
    assert rep["refined_bound"] < 1.21 and rep["refined_bound_certified"]
    assert rep["rank0_proportion"] >= 0.199
    assert rep["rank1_proportion"] >= 0.411
    assert rep["rank0_or_1_proportion"] >= 0.61


def test_empirical_average_small():
    res = empirical_average(200, AcceptableSetSpec(sign="negative"))
    assert res.count > 0 and not res.partial
    assert res.series[-1][0] == 200
    assert 1 <= res.average < 10
    with pytest.raises(ValueError):
        empirical_average(10**5 + 1)
