import threading
from fractions import Fraction
from math import comb, factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qeuler.core import (
    EulerNumberTable,
    XPolynomial,
    barnes_euler_polynomial,
    barnes_euler_polynomial_multinomial,
    euler_number,
    euler_numbers,
    euler_polynomial,
    higher_order_euler,
    higher_order_euler_polynomial,
    q_one_limit,
    sums_of_products_expansion,
)
from qeuler.field import ONE, Q, ZERO, QRationalFunction, rf_eval

HALF = Fraction(1, 2)


def series_euler(k, x, q, terms=400):
    """[2]_q sum_n (-1)^n q^n (n+x)^k in floating point, with 0^0 = 1."""
    return (1 + q) * sum((-q) ** n * (n + x) ** k for n in range(terms))


def test_first_numbers():
    assert euler_number(0) == ONE
    assert euler_number(1) == -Q / (1 + Q)
    assert rf_eval(euler_number(1), HALF) == Fraction(-1, 3)
    assert abs(series_euler(1, 0, 0.5) - (-1 / 3)) < 1e-13
    assert rf_eval(euler_number(2), 1) == 0


def test_numbers_match_series_at_half():
    for k in range(8):
        assert abs(float(rf_eval(euler_number(k), HALF)) - series_euler(k, 0, 0.5)) < 1e-9


def test_polynomial_examples():
    assert euler_polynomial(0) == XPolynomial.constant(1)
    assert euler_polynomial(1) == XPolynomial([-Q / (1 + Q), ONE])
    assert str(euler_polynomial(1)) == "x - q/(q + 1)"
    assert abs(float(euler_polynomial(1).evaluate(1, HALF)) - series_euler(1, 1, 0.5)) < 1e-12
    for n in range(21):
        assert euler_polynomial(n).at(0) == euler_number(n)


def test_polynomials_are_monic_of_degree_n():
    for n in range(21):
        p = euler_polynomial(n)
        assert p.degree == n
        assert p.coefficient(n) == ONE


def test_denominator_divides_power_of_two_q():
    two_q = (Q + 1).num
    for n in range(1, 15):
        den = euler_number(n).den
        assert not (two_q ** n).divmod(den)[1]


def test_defining_recurrence():
    e = euler_numbers(20)
    for n in range(21):
        lhs = Q * sum((comb(n, k) * e[k] for k in range(n + 1)), ZERO) + e[n]
        assert lhs == (1 + Q if n == 0 else ZERO)


def test_higher_order_examples():
    for n in range(8):
        assert higher_order_euler(n, 1) == euler_number(n)
    for r in range(1, 5):
        assert higher_order_euler(0, r) == ONE
    e = euler_numbers(2)
    expected = sum(
        (Fraction(factorial(2), factorial(l1) * factorial(2 - l1)) * e[l1] * e[2 - l1] for l1 in range(3)),
        ZERO,
    )
    assert higher_order_euler(2, 2) == expected


@pytest.mark.parametrize("r", [1, 2, 3])
def test_sums_of_products_matches_cauchy_product(r):
    for n in range(7):
        assert higher_order_euler_polynomial(n, r) == sums_of_products_expansion(n, r)


def test_barnes_examples():
    for n in range(6):
        for x in (0, HALF, 2):
            assert barnes_euler_polynomial(n, [1], x) == euler_polynomial(n).at(x)
    assert barnes_euler_polynomial(0, [3, Fraction(1, 2)], 7) == ONE
    with pytest.raises(ValueError):
        barnes_euler_polynomial(2, [])
    with pytest.raises(ValueError):
        barnes_euler_polynomial(2, [1, 0])


def test_barnes_matches_double_series():
    q = 0.5
    total = 0.0
    for n1 in range(150):
        for n2 in range(150 - n1):
            total += (-q) ** (n1 + n2) * (n1 + 2 * n2) ** 3
    total *= (1 + q) ** 2
    exact = rf_eval(barnes_euler_polynomial(3, [1, 2], 0), HALF)
    assert abs(float(exact) - total) < 1e-10


@settings(max_examples=25, deadline=None)
@given(
    st.integers(0, 5),
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(bool), min_size=1, max_size=3),
    st.fractions(min_value=-2, max_value=2, max_denominator=3),
)
def test_barnes_convolution_matches_multinomial_sum(n, weights, x):
    assert barnes_euler_polynomial(n, weights, x) == barnes_euler_polynomial_multinomial(n, weights, x)


def test_all_ones_barnes_is_higher_order():
    for n in range(6):
        assert barnes_euler_polynomial(n, [1, 1, 1], HALF) == higher_order_euler_polynomial(n, 3).at(HALF)


def classical_from_bernoulli(n):
    if n == 0:
        return Fraction(1)
    b = sympy.bernoulli(n + 1)
    value = -2 * (2 ** (n + 1) - 1) * Fraction(int(b.p), int(b.q)) / (n + 1)
    return value


def test_q_one_limit():
    assert q_one_limit(0) == 1
    assert q_one_limit(1) == Fraction(-1, 2)
    assert q_one_limit(3) == Fraction(1, 4)
    for n in range(21):
        assert q_one_limit(n) == classical_from_bernoulli(n)


def test_memo_table_concurrent_readers_see_consistent_prefix():
    table = EulerNumberTable()
    results = {}
    errors = []

    def worker(i):
        try:
            n = (i * 7) % 16
            results[i] = (n, table.get(n), table.prefix(n // 2))
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(24)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    for n, value, prefix in results.values():
        assert value == euler_number(n)
        assert list(prefix) == list(euler_numbers(n // 2))


def test_xpolynomial_arithmetic():
    x = XPolynomial.x()
    p = (x + 1) * (x - Q)
    assert p == XPolynomial([-Q, 1 - Q, ONE])
    assert p.at(Q) == ZERO
    assert (p / (Q + 1)).at(0) == -Q / (Q + 1)
    with pytest.raises(ValueError):
        p / x
    assert isinstance(p.at(HALF), QRationalFunction)
