import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hadspec.foundation import IntPolynomial, _divisible_by_cyclotomic, cyclotomic, root_of_unity_sum_is_zero
from hadspec.numtheory import euler_phi


def X(*coeffs):
    return IntPolynomial(coeffs)


def test_cyclotomic_base_cases():
    assert cyclotomic(1) == X(-1, 1)
    assert cyclotomic(4) == X(1, 0, 1)


def test_cyclotomic_6_against_manual_division():
    # oracle: multiply Φ1 Φ2 Φ3 by hand, divide x^6 - 1 by the product
    phi123 = X(-1, 1) * X(1, 1) * X(1, 1, 1)
    quot, rem = (IntPolynomial.monomial(6) - X(1)).divmod_monic(phi123)
    assert rem.is_zero()
    assert quot == X(1, -1, 1)
    assert cyclotomic(6) == quot


@pytest.mark.parametrize("n", range(1, 201))
def test_cyclotomic_degree_and_integrality(n):
    poly = cyclotomic(n)
    assert poly.degree == euler_phi(n)
    assert all(isinstance(c, int) for c in poly.coeffs)
    assert poly.coeffs[-1] == 1


@pytest.mark.parametrize("n", range(1, 101))
def test_divisor_product_is_x_n_minus_1(n):
    prod = X(1)
    for d in range(1, n + 1):
        if n % d == 0:
            prod = prod * cyclotomic(d)
    assert prod == IntPolynomial.monomial(n) - X(1)


def test_root_of_unity_examples():
    assert root_of_unity_sum_is_zero([0, 3], 6)
    assert not root_of_unity_sum_is_zero([0, 1], 4)
    assert root_of_unity_sum_is_zero([0, 2, 4], 6)


def test_empty_sum_is_zero_and_singleton_is_not():
    assert root_of_unity_sum_is_zero([], 7)
    assert not root_of_unity_sum_is_zero([5], 12)


def _float_sum(exps, n):
    return abs(sum(cmath.exp(2j * math.pi * e / n) for e in exps))


@settings(max_examples=400, deadline=None)
@given(n=st.integers(1, 24), data=st.data())
def test_agrees_with_floating_point(n, data):
    exps = data.draw(st.lists(st.integers(0, n - 1), max_size=12))
    assert root_of_unity_sum_is_zero(exps, n) == (_float_sum(exps, n) < 1e-9)


@settings(max_examples=300, deadline=None)
@given(n=st.sampled_from([8, 9, 12, 16, 18, 24, 25, 27, 32, 36, 48, 50, 54, 72]), data=st.data())
def test_tower_reduction_matches_direct_division(n, data):
    exps = data.draw(st.lists(st.integers(0, n - 1), max_size=10))
    counts = {}
    for e in exps:
        counts[e] = counts.get(e, 0) + 1
    assert root_of_unity_sum_is_zero(exps, n) == _divisible_by_cyclotomic(counts, n)


def test_huge_modulus_is_fast_and_exact():
    n = 4**40
    half = n // 2
    assert root_of_unity_sum_is_zero([7, 7 + half], n)
    assert not root_of_unity_sum_is_zero([7, 8 + half], n)
