import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fksix.laurent import LaurentWeight, SymbolicCoupling


def lw(d):
    return LaurentWeight(d)


coeffs = st.dictionaries(
    st.integers(min_value=-6, max_value=6),
    st.fractions(min_value=-10, max_value=10, max_denominator=8),
    max_size=6,
)


def test_zero_and_one():
    assert LaurentWeight.zero().is_zero()
    assert not LaurentWeight.one().is_zero()
    assert LaurentWeight({0: 0, 2: 0}).is_zero()


def test_basic_arithmetic():
    a = lw({2: 1, -2: 1})  # x^2 + x^-2
    b = a * a
    assert b == lw({4: 1, 0: 2, -4: 1})
    assert a + a == lw({2: 2, -2: 2})
    assert a - a == LaurentWeight.zero()
    assert a * 0 == LaurentWeight.zero()
    assert 3 * a == lw({2: 3, -2: 3})


def test_pow_matches_repeated_product():
    c = lw({1: 1, -1: 1})
    p = LaurentWeight.one()
    for _ in range(5):
        p = p * c
    assert c ** 5 == p
    assert c ** 0 == LaurentWeight.one()
    with pytest.raises(ValueError):
        c ** -1


def test_substitute_inverse_involution():
    a = lw({3: Fraction(1, 2), 0: 5, -1: -2})
    assert a.substitute_inverse().substitute_inverse() == a
    assert a.substitute_inverse() == lw({-3: Fraction(1, 2), 0: 5, 1: -2})


def test_monomial_substitution_negates_exponent():
    m = LaurentWeight.monomial(4)
    assert m.substitute_inverse() == LaurentWeight.monomial(-4)


def test_evaluate_exact_and_float():
    a = lw({2: 1, -2: 1})
    assert a.evaluate(Fraction(2)) == Fraction(17, 4)
    assert math.isclose(a.evaluate(2.0), 4.25)


@given(coeffs, coeffs)
def test_addition_commutes(d1, d2):
    a, b = lw(d1), lw(d2)
    assert a + b == b + a


@given(coeffs, coeffs, coeffs)
def test_multiplication_distributes(d1, d2, d3):
    a, b, c = lw(d1), lw(d2), lw(d3)
    assert a * (b + c) == a * b + a * c


@given(coeffs, coeffs)
def test_substitution_is_ring_map(d1, d2):
    a, b = lw(d1), lw(d2)
    assert (a * b).substitute_inverse() == a.substitute_inverse() * b.substitute_inverse()
    assert (a + b).substitute_inverse() == a.substitute_inverse() + b.substitute_inverse()


@given(coeffs)
def test_evaluation_consistent_with_substitution(d):
    a = lw(d)
    x = Fraction(3, 2)
    assert a.substitute_inverse().evaluate(x) == a.evaluate(1 / x)


def test_coupling_parameter_identities():
    sc = SymbolicCoupling()
    assert sc.c * sc.c == sc.sqrt_q + 2
    assert sc.q == sc.sqrt_q * sc.sqrt_q
    # q_b = exp(lambda) sqrt(q) evaluated at x=1 is 2 (q=4, lambda=0)
    assert sc.q_b.evaluate(Fraction(1)) == 2
    neg = sc.negated()
    assert neg.q_b == sc.q_b.substitute_inverse()
    assert sc.orientation_weight(3) == LaurentWeight.monomial(6)
    assert neg.orientation_weight(3) == LaurentWeight.monomial(-6)
    assert sc.split_weight(-2) == LaurentWeight.monomial(-2)
    with pytest.raises(ValueError):
        SymbolicCoupling(sign=0)
