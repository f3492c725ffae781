from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from mordell_selmer.algebra import KElem, cube_root_in_K, is_cube_in_K, kelem_mul, kelem_norm

small = st.integers(-30, 30)
ks = st.integers(-50, 50).filter(lambda k: k not in (0,))


def test_mul_and_norm_examples():
    t = KElem(3, 0, 1)
    assert kelem_norm(kelem_mul(KElem(3, 1, 1), KElem(3, 1, -1))) == 4
    assert kelem_mul(KElem(3, 1, 1), KElem(3, 1, -1)) == KElem(3, -2, 0)
    assert KElem(3, 1, 1) ** 3 == KElem(3, 10, 6)
    assert t * t == KElem(3, 3, 0)


def test_split_components():
    a = KElem.from_components(1, 2, 4)
    b = KElem.from_components(1, 1, 1)
    assert (a * b).components() == (2, 4)
    assert KElem(1, 3, 1).components() == (4, 2)


def test_mismatched_algebras():
    with pytest.raises(ValueError, match="mismatched"):
        kelem_mul(KElem(2, 1, 1), KElem(3, 1, 1))


def test_cube_examples():
    assert is_cube_in_K(KElem(3, 10, 6))
    assert not is_cube_in_K(KElem(3, 2, 0))
    assert is_cube_in_K(KElem.from_components(1, 8, 27))
    assert not is_cube_in_K(KElem.from_components(1, 8, 2))
    with pytest.raises(ValueError):
        is_cube_in_K(KElem(4, 2, 1))  # zero divisor: (4, 0)


@settings(max_examples=200, deadline=None)
@given(ks, small, small, st.integers(1, 5), st.integers(1, 5))
def test_cubes_are_detected(k, x, y, dx, dy):
    b = KElem(k, Fraction(x, dx), Fraction(y, dy))
    assume(kelem_norm(b) != 0)
    r = cube_root_in_K(b**3)
    assert r is not None and r**3 == b**3


@settings(max_examples=200, deadline=None)
@given(ks, small, small, small, small)
def test_cube_class_is_stable_under_cubes(k, x, y, u, v):
    a, b = KElem(k, x, y), KElem(k, u, v)
    assume(kelem_norm(a) != 0 and kelem_norm(b) != 0)
    assert is_cube_in_K(a) == is_cube_in_K(a * b**3)


def test_inverse_and_division():
    a = KElem(5, 2, 1)
    assert a * (KElem(5, 1, 0) / a) == KElem(5, 1, 0)
    assert a**-1 * a == KElem(5, 1, 0)
