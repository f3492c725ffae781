import random

import pytest
from hypothesis import given, settings, strategies as st

from mordell_selmer.arith import prime_factors, sixth_power_free_part
from mordell_selmer.cubic_forms import BinaryCubicForm as F, UnimodularMatrix, act, disc
from mordell_selmer.local import (
    INFINITY,
    bad_primes,
    count_soluble_classes_local,
    is_locally_soluble,
    is_locally_soluble_everywhere,
    local_kernel_size,
    local_ratio_closed,
    local_ratio_tamagawa,
)

from solubility_oracle import soluble_mod

nonzero_k = st.integers(-10**6, 10**6).filter(bool)


def test_closed_form_examples():
    assert local_ratio_closed(50, 5).e == 1
    assert local_ratio_closed(5, 3).e == 1
    assert local_ratio_closed(2, 2).e == 0
    assert local_ratio_closed(5, 2).e == 1
    assert local_ratio_closed(1, 2).e == -1
    assert local_ratio_closed(-1, 3).e == 0
    assert local_ratio_closed(1, INFINITY).e == -1
    assert local_ratio_closed(-7, INFINITY).e == 0


def test_closed_form_p3_table():
    assert local_ratio_closed(3**5 * 2, 3).e == 2  # c_3 = 9
    assert local_ratio_closed(3**5 * 1, 3).e == 1
    assert local_ratio_closed(3**2 * 1, 3).e == -1  # c_3 = 1/3
    assert local_ratio_closed(3**2 * 2, 3).e == 0
    assert local_ratio_closed(27 * 2, 3).e == 0
    assert local_ratio_closed(27 * 5, 3).e == 1


def test_closed_equals_tamagawa_small_range():
    for k in range(-400, 401):
        if k == 0 or sixth_power_free_part(k).m != 1:
            continue
        for p in sorted(set([2, 3] + prime_factors(k))):
            assert local_ratio_closed(k, p) == local_ratio_tamagawa(k, p), (k, p)


@settings(max_examples=200, deadline=None)
@given(nonzero_k, st.integers(1, 4), st.sampled_from([2, 3, 5, 11, 17]))
def test_closed_form_twist_invariance(k, m, p):
    assert local_ratio_closed(k * m**6, p) == local_ratio_closed(k, p)


@settings(max_examples=200, deadline=None)
@given(nonzero_k)
def test_exponent_zero_away_from_6k(k):
    for p in (5, 7, 11, 13, 17, 19, 23):
        if k % p:
            assert local_ratio_closed(k, p).e == 0


def test_solubility_examples():
    assert not is_locally_soluble(F(2, 0, 0, 18), 3)
    for k in (1, 2, -5, 54, 100):
        f = F(k, 0, 1, 0)  # identity class of disc 4k
        assert is_locally_soluble_everywhere(f)


def test_solubility_matches_residue_oracle():
    rng = random.Random(11)
    seen = set()
    for _ in range(400):
        f = F(*[rng.randint(-9, 9) for _ in range(4)])
        if disc(f) == 0:
            continue
        for p in (2, 3, 5, 7):
            got = is_locally_soluble(f, p)
            assert got == soluble_mod(f.to_json(), p), (f, p)
            seen.add((p, got))
    assert (3, False) in seen and (2, True) in seen


@settings(max_examples=80, deadline=None)
@given(st.builds(F, *[st.integers(-20, 20)] * 4), st.integers(-5, 5), st.integers(-5, 5))
def test_solubility_is_sl2_invariant(f, s, t):
    if disc(f) == 0:
        return
    M = UnimodularMatrix(1, s, 0, 1) @ UnimodularMatrix(1, 0, t, 1)
    g = act(M, f)
    for p in (2, 3, 5, 7):
        assert is_locally_soluble(f, p) == is_locally_soluble(g, p)


def test_prime_set_enlargement():
    rng = random.Random(5)
    extra = [2, 5, 7, 11, 13, 17, 19, 23]
    for _ in range(200):
        f = F(*[rng.randint(-30, 30) for _ in range(4)])
        if disc(f) == 0:
            continue
        base = bad_primes(f)
        assert is_locally_soluble_everywhere(f) == is_locally_soluble_everywhere(f, sorted(set(base + extra)))


def test_zero_disc_rejected():
    with pytest.raises(ValueError):
        is_locally_soluble(F(1, 0, 0, 0), 3)


def test_kernel_sizes():
    assert local_kernel_size(4, 7, "phi") == 3
    assert local_kernel_size(1, 5, "phihat") == 1
    for p in (5, 7, 11, 13):
        assert local_kernel_size(-3, p, "phihat") == 3
    assert local_kernel_size(17, 2, "phi") == 3  # 17 = 1 mod 8
    assert local_kernel_size(5, 2, "phi") == 1
    assert local_kernel_size(2, INFINITY, "phi") == 3


def test_soluble_class_counts():
    assert count_soluble_classes_local(1, 5) == 1
    assert count_soluble_classes_local(5, 5) == 1
    # -12 = 2 = 3^2 mod 7, so the phihat kernel over Q_7 has order 3
    assert count_soluble_classes_local(4, 7) == 3
    with pytest.raises(ValueError):
        count_soluble_classes_local(2, 3)


def test_soluble_count_matches_local_ratio():
    # soluble classes = |coker| = c_p(phihat) |ker phihat| with c_p(phihat) = 3^(-e_p(phi))
    for k in range(-300, 301):
        if k == 0 or sixth_power_free_part(k).m != 1:
            continue
        for p in sorted(set([2, 5, 7, 11] + prime_factors(k)) - {3}):
            n = count_soluble_classes_local(k, p)
            e = local_ratio_closed(k, p).e
            assert 3 * n == 3 ** (1 - e) * local_kernel_size(k, p, "phihat"), (k, p)
