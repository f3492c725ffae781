import random
from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from mordell_selmer.arith import sixth_power_free_part
from mordell_selmer.cubic_forms import BinaryCubicForm as F, UnimodularMatrix, act, disc, enumerate_classes, hessian
from mordell_selmer.curves import CurvePoint, kummer_delta, mul, phihat_eval
from mordell_selmer.selmer import (
    KElem,
    admissible_points,
    cassels_check,
    classify_Tm,
    delta_invariant,
    form_from_delta,
    is_cube_in_K,
    kelem_norm,
    place_exponents,
    rationally_equivalent,
    selmer_group,
)


def random_sl2(rng):
    M = UnimodularMatrix(1, 0, 0, 1)
    for _ in range(4):
        t = rng.randint(-3, 3)
        M = M @ (UnimodularMatrix(1, t, 0, 1) if rng.random() < 0.5 else UnimodularMatrix(1, 0, t, 1))
    return M


def same_class(d1, d2):
    return is_cube_in_K(d1 / d2)


def test_delta_norm_is_minus_h_cubed():
    for f in enumerate_classes(-108 * 7) + enumerate_classes(4 * 31):
        for u, v in admissible_points(f, 5):
            assert kelem_norm(delta_invariant(f, (u, v))) == Fraction(-hessian(f)(u, v)) ** 3


def test_identity_class_is_trivial():
    for kappa in (2, 3, -5, 31, -27 * 7):
        f = F(kappa, 0, 1, 0)
        assert disc(f) == 4 * kappa
        d = delta_invariant(f, (1, 1))
        assert d == KElem(kappa, -3 * kappa - 1, kappa + 3)
        assert is_cube_in_K(d)


def test_delta_class_is_invariant():
    rng = random.Random(2)
    for D in (4 * 31, -4 * 19, -108 * 5, 2916 * 2, -108 * -11):
        for f in enumerate_classes(D):
            pts = admissible_points(f, 25)
            ref = delta_invariant(f, pts[0])
            for pt in pts[1:]:
                assert same_class(delta_invariant(f, pt), ref)
            for _ in range(10):
                assert same_class(delta_invariant(act(random_sl2(rng), f)), ref)


def test_form_from_delta_examples():
    assert form_from_delta(5, KElem(5, 1, 0)) == F(5, 0, 1, 0)
    g = form_from_delta(5, KElem(5, 0, 1))
    assert g == F(0, 5, 0, 1) and disc(g) == 4 * 5**3
    with pytest.raises(ValueError):
        form_from_delta(5, KElem(5, 0, 0))


@settings(max_examples=200)
@given(st.integers(-60, 60).filter(bool), st.integers(-40, 40), st.integers(-40, 40))
def test_form_from_delta_disc(k, a, b):
    if a == 0 and b == 0:
        return
    d = KElem(k, a, b)
    assert disc(form_from_delta(k, d)) == 4 * k * kelem_norm(d) ** 2


@pytest.mark.parametrize("k, a, b", [(2, 3, 2), (3, 2, 1), (7, 8, 3), (6, 5, 2), (10, 19, 6)])
def test_delta_orientation_regression(k, a, b):
    # frozen: delta(form_from_delta(k, d0)) is d0^-1 modulo cubes
    d0 = KElem(k, a, b)
    assert kelem_norm(d0) == 1
    d = delta_invariant(form_from_delta(k, d0))
    assert is_cube_in_K(d * d0)
    assert not is_cube_in_K(d / d0)


def test_rational_equivalence():
    rng = random.Random(4)
    for f in enumerate_classes(-108 * 5):
        assert rationally_equivalent(f, act(random_sl2(rng), f))
    assert not rationally_equivalent(F(2, 0, 1, 0), form_from_delta(2, KElem(2, 3, 2)))
    with pytest.raises(ValueError):
        rationally_equivalent(F(2, 0, 1, 0), F(3, 0, 1, 0))


def test_selmer_k2():
    # E_2 has rank 1 via (-1, 1); c(phi_2) = 3^-1
    assert selmer_group(2, "phi").size == 1
    assert selmer_group(2, "phihat").size == 3
    assert classify_Tm(2) == -1


def test_selmer_k2_point_oracle():
    # (-1, 1) generates E_2(Q) mod torsion; it is not in phihat(E_{-54}(Q)) since
    # its Kummer class is not a cube, and that class must lie in Sel_phihat(E_{-54})
    P = CurvePoint.affine(-1, 1)
    d = kummer_delta(2, P)
    assert not is_cube_in_K(d)
    reps = [KElem(2, e.x, 27 * e.y) for _, e in selmer_group(2, "phihat").class_reps]
    assert any(is_cube_in_K(d / e) for e in reps)
    assert any(is_cube_in_K(e) for e in reps)


def test_kummer_images_are_soluble_classes():
    for k in [k for k in range(-40, 41) if k and sixth_power_free_part(k).m == 1]:
        reps = [KElem(k, e.x, 27 * e.y) for _, e in selmer_group(k, "phihat", checks=False).class_reps]
        for x in range(-4, 60):
            n = x**3 + k
            if n < 0 or isqrt(n) ** 2 != n:
                continue
            P = CurvePoint.affine(x, isqrt(n))
            for Q in (P, mul(k, 2, P)):
                if Q.is_infinity:
                    continue
                d = kummer_delta(k, Q)
                assert any(is_cube_in_K(d / e) for e in reps), (k, Q)


def test_image_of_phihat_is_trivial():
    # Kummer classes of phihat(Q) are cubes
    for k in (2, -2, 7, 17, -11):
        for x in range(-30, 400):
            n = x**3 - 27 * k
            if n <= 0 or isqrt(n) ** 2 != n:
                continue
            P = phihat_eval(k, CurvePoint.affine(x, isqrt(n)))
            if not P.is_infinity and P.y != 0:
                assert is_cube_in_K(kummer_delta(k, P))


def test_sizes_are_powers_of_three():
    for k in range(-60, 61):
        if k == 0:
            continue
        for iso in ("phi", "phihat"):
            s = selmer_group(k, iso, checks=False).size
            while s % 3 == 0:
                s //= 3
            assert s == 1


def test_cassels_examples():
    assert cassels_check(1) and cassels_check(-1)
    assert classify_Tm(1) == -2
    assert classify_Tm(-1) == 0
    assert classify_Tm(5) == 1
    assert place_exponents(5) == {2: 1, 3: 1, 5: 0, "inf": -1}


def test_cassels_and_duality_small_range():
    for k in range(-80, 81):
        if k == 0:
            continue
        c = selmer_group(k).checks
        assert c["cassels_ok"], k
        assert c["duality_ok"] in (True, None), k


def test_report_json():
    r = selmer_group(-11)
    js = r.to_json()
    assert js["k"] == -11 and js["isogeny"] == "phi" and js["size"] == r.size
    assert set(js["checks"]) == {"cassels_ok", "duality_ok"}


def test_zero_k_rejected():
    with pytest.raises(ValueError):
        selmer_group(0)
    with pytest.raises(ValueError):
        selmer_group(2, "psi")
