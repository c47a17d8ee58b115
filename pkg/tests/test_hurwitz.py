from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfzero.hurwitz import (
    GAMMA_SUFFICIENT,
    IntPolynomial,
    build_An,
    hurwitz_matrix,
    leading_principal_minors,
    max_real_root_part,
    polynomial_roots,
    routh_hurwitz,
)


def test_build_An_examples():
    assert build_An(0).coeffs == (1,)
    assert build_An(1).coeffs == (1, 2)
    assert build_An(1)(-2) == 0
    assert build_An(2).coeffs == (2, 12, 24)
    with pytest.raises(ValueError):
        build_An(65)


def test_An_coefficients_are_exact():
    c = build_An(30).coeffs
    assert all(isinstance(v, int) for v in c)
    assert c[-1] > 10 ** 70  # (2n)! has 73 digits; floats would lose it


def test_hurwitz_matrix_examples():
    assert hurwitz_matrix([1, 2]) == [[2]]
    assert hurwitz_matrix([2, 12, 24]) == [[12, 0], [2, 24]]
    assert hurwitz_matrix([1, 2, 3, 4]) == [[2, 4, 0], [1, 3, 0], [0, 2, 4]]
    with pytest.raises(ValueError):
        hurwitz_matrix([5])


def test_minors_against_numpy_determinants():
    m = hurwitz_matrix([1, 7, 3, 9, 2, 5])
    minors = leading_principal_minors(m)
    for k, d in enumerate(minors, start=1):
        assert abs(np.linalg.det(np.array(m[:k], dtype=float)[:, :k]) - d) < 1e-6 * max(1, abs(d))


def test_routh_hurwitz_examples():
    r = routh_hurwitz([2, 12, 24])
    assert r.is_hurwitz and r.minors == (12, 288)
    r = routh_hurwitz([1, 0, 1])
    assert not r.is_hurwitz and r.failing_index == 1
    with pytest.raises(ValueError):
        routh_hurwitz([-1, 2])


def test_is_hurwitz_iff_minors_positive():
    for c in ([1, 2, 3, 4], [1, 1, 1, 5], [3, 1, 4, 1, 5], [1, 10, 35, 50, 24]):
        r = routh_hurwitz(c)
        assert r.is_hurwitz == all(d > 0 for d in r.minors)


def test_max_real_root_part_examples():
    assert abs(max_real_root_part([1, 2]) + 2) < 1e-12
    assert abs(max_real_root_part([2, 12, 24]) + 3) < 1e-10
    assert max_real_root_part(build_An(10)) < 0


def test_roots_against_numpy():
    c = [1, -3, 7, 2, -5]
    ours = np.sort_complex(np.asarray(polynomial_roots(c)))
    ref = np.sort_complex(np.roots(c))
    np.testing.assert_allclose(ours, ref, atol=1e-9)


@pytest.mark.parametrize("n", range(1, 31))
def test_An_is_hurwitz(n):
    p = build_An(n)
    r = routh_hurwitz(p)
    assert r.is_hurwitz
    assert all(d > 0 for d in r.minors)
    assert max_real_root_part(p) < -1e-6
    if n >= 2:
        assert r.necessary_ok


def test_gamma_constant_is_exact_rational():
    assert GAMMA_SUFFICIENT == Fraction(21479, 10000)


def _ratios(n):
    a = build_An(n).coeffs
    return [Fraction(a[j] * a[j + 1], a[j - 1] * a[j + 2]) for j in range(1, n - 1)]


def test_sufficient_condition_holds_for_small_n():
    # degree <= 2 has no index with all four coefficients: the condition is vacuous
    for n in range(1, 8):
        assert routh_hurwitz(build_An(n)).sufficient_ok


def test_sufficient_condition_fails_from_n_8():
    # the smallest ratio a_j a_{j+1} / (a_{j-1} a_{j+2}) drops under 2.1479 at n = 8
    assert min(_ratios(7)) > GAMMA_SUFFICIENT
    assert min(_ratios(8)) < GAMMA_SUFFICIENT
    for n in range(8, 31):
        r = routh_hurwitz(build_An(n))
        assert not r.sufficient_ok and r.necessary_ok


def _random_poly(rng, deg):
    c = [int(rng.integers(1, 6))] + [int(v) for v in rng.integers(-4, 12, size=deg)]
    return c


def test_routh_hurwitz_agrees_with_roots_on_500_random_polynomials():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 500:
        c = _random_poly(rng, int(rng.integers(1, 9)))
        roots = np.roots(c)
        if np.min(np.abs(roots.real)) < 1e-6:
            continue  # boundary case
        stable = max_real_root_part(c) < 0
        assert routh_hurwitz(c).is_hurwitz == stable
        checked += 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=9), st.integers(1, 9))
def test_routh_hurwitz_property(tail, lead):
    c = [lead] + tail[1:]
    roots = np.roots(c)
    if len(roots) == 0 or np.min(np.abs(roots.real)) < 1e-6:
        return
    assert routh_hurwitz(c).is_hurwitz == bool(np.all(roots.real < 0))


def test_int_polynomial_validation():
    with pytest.raises(ValueError):
        IntPolynomial(())
    with pytest.raises(ValueError):
        IntPolynomial((1, 0.5))
