from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mordell_selmer.arith import (
    integer_cube_root,
    legendre,
    primes_up_to,
    quadratic_character,
    rational_cube_root,
    sixth_power_free_part,
    valuation,
)


def test_valuation_examples():
    assert valuation(12, 2) == 2
    assert valuation(-432, 3) == 3
    assert valuation(5, 7) == 0
    assert valuation(Fraction(9, 4), 2) == -2


def test_valuation_zero():
    with pytest.raises(ValueError, match="valuation undefined"):
        valuation(0, 3)


def test_sixth_power_free_examples():
    d = sixth_power_free_part(64)
    assert (d.k0, d.m) == (1, 2)
    d = sixth_power_free_part(5)
    assert (d.k0, d.m) == (5, 1)
    d = sixth_power_free_part(-128)
    assert (d.k0, d.m) == (-2, 2)
    with pytest.raises(ValueError):
        sixth_power_free_part(0)


@given(st.integers(-10**9, 10**9).filter(bool))
def test_sixth_power_free_properties(k):
    d = sixth_power_free_part(k)
    assert d.k0 * d.m**6 == k and d.m >= 1
    assert sixth_power_free_part(d.k0).m == 1
    for p in primes_up_to(40):
        assert d.k0 % p**6 != 0


def test_quadratic_character_examples():
    assert quadratic_character(1, 2) == 1
    assert quadratic_character(-1, 2) == 0
    assert quadratic_character(5, 2) == -1
    assert quadratic_character(-3, 3) == 0
    assert quadratic_character(9, 7) == 1


@given(st.integers(-5000, 5000).filter(bool), st.sampled_from(primes_up_to(60)), st.integers(1, 50))
def test_character_square_class(k, p, m):
    if m % p == 0:
        return
    assert quadratic_character(k * m * m, p) == quadratic_character(k, p)


@pytest.mark.parametrize("p", primes_up_to(50)[1:])
def test_character_matches_squares_mod_p(p):
    squares = {x * x % p for x in range(1, p)}
    for k in range(-60, 61):
        if k % p == 0:
            continue
        expected = 1 if k % p in squares else -1
        assert quadratic_character(k, p) == expected == legendre(k, p)


def test_character_at_two_against_splitting():
    # 2 splits in Q(sqrt k) iff x^2 - k has 4 roots mod 8-lifts, i.e. k = 1 mod 8
    for k in range(-101, 102, 2):
        if k in (1, 9, 25, 49, 81):
            continue
        sols = sum(1 for x in range(16) if (x * x - k) % 16 == 0)
        exp = 1 if k % 8 == 1 else (0 if k % 4 == 3 else -1)
        assert quadratic_character(k, 2) == exp
        assert (sols > 0) == (k % 8 == 1)


@given(st.integers(-10**6, 10**6))
def test_cube_roots(n):
    assert integer_cube_root(n**3) == n
    if n not in (0, 1, -1):
        assert integer_cube_root(n**3 + 1) is None
    assert rational_cube_root(Fraction(n**3, 8)) == Fraction(n, 2)


def test_big_cube_root():
    n = 3**200 + 7
    assert integer_cube_root(n**3) == n
    assert integer_cube_root(n**3 - 1) is None
