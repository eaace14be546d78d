from fractions import Fraction
from math import comb

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qeuler.core import euler_number, euler_polynomial, higher_order_euler
from qeuler.padic import (
    IntegrandPoly,
    PadicNumber,
    PrecisionError,
    fermionic_integral_level,
    integral_equation_check,
    multivariate_check,
    multivariate_integral_level,
    padic_eval,
    padic_q,
    witt_check,
)
from qeuler.field import rf_eval


def vfrac(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def exact_level(g, q: int, p: int, N: int) -> Fraction:
    """The level-N sum in exact rational arithmetic."""
    q = Fraction(q)
    total = sum(g(Fraction(x)) * (-q) ** x for x in range(p ** N))
    return (1 + q) / (1 + q ** (p ** N)) * total


def agrees(padic: PadicNumber, exact: Fraction) -> bool:
    """True when ``padic`` is a sound approximation of ``exact`` at its stated precision."""
    diff = padic.lift() - exact
    return diff == 0 or vfrac(diff, padic.p) >= padic.precision


primes = st.sampled_from([3, 5, 7, 11])
rationals = st.fractions(min_value=-200, max_value=200, max_denominator=60)


@settings(max_examples=150, deadline=None)
@given(primes, rationals, rationals, st.integers(2, 12), st.sampled_from(["add", "sub", "mul", "div"]))
def test_arithmetic_matches_rational_oracle(p, a, b, prec, op):
    assume(a != 0 and b != 0)
    x = PadicNumber.from_rational(a, p, prec)
    y = PadicNumber.from_rational(b, p, prec)
    exact = {"add": a + b, "sub": a - b, "mul": a * b, "div": a / b}[op]
    got = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y}[op]
    assert agrees(got, exact)


@settings(max_examples=80, deadline=None)
@given(primes, rationals, rationals, st.integers(2, 10))
def test_precision_is_lower_bound_by_doubling(p, a, b, prec):
    assume(a != 0 and b != 0)

    def compute(m):
        x = PadicNumber.from_rational(a, p, m)
        y = PadicNumber.from_rational(b, p, m)
        return (x * y - x) / (y + 1)

    try:
        low, high = compute(prec), compute(2 * prec)
    except ZeroDivisionError:
        assume(False)
    assert high.with_precision(low.precision) == low.with_precision(low.precision) or (
        low.is_zero() and (high.is_zero() or high.valuation() >= low.precision)
    )


def test_from_rational_and_digits():
    x = PadicNumber.from_rational(Fraction(1, 2), 3, 4)
    assert x.valuation() == 0
    assert (x * 2) == 1
    assert x.digits == (2, 1, 1, 1)
    y = PadicNumber.from_rational(Fraction(18, 5), 3, 3)
    assert y.valuation() == 2 and y.precision == 5


def test_zero_and_precision_loss():
    x = PadicNumber.from_rational(1, 5, 3)
    z = x - x
    assert z.is_zero() and z.precision == 3
    with pytest.raises(ZeroDivisionError):
        z.inverse()
    assert str(z) == "O(5^3)"


def test_level_sum_of_constant_is_exactly_one():
    for p, q in ((3, 4), (5, 6), (7, 8), (3, 10)):
        qq = padic_q(q, p)
        for N in range(1, 5 if p < 7 else 4):
            assert fermionic_integral_level(IntegrandPoly([1]), qq, N) == 1


@pytest.mark.parametrize("p,q,N", [(3, 4, 2), (5, 6, 2), (3, 7, 3), (7, 8, 2)])
@pytest.mark.parametrize("coeffs", [[0, 1], [0, 0, 1], [Fraction(1, 2), -3, 0, 2]])
def test_level_sum_matches_exact_rational(p, q, N, coeffs):
    g = IntegrandPoly(coeffs)
    got = fermionic_integral_level(g, padic_q(q, p), N)
    assert agrees(got, exact_level(g, q, p, N))


def test_first_moment_close_to_e1():
    q, p, N = 6, 5, 4
    exact = exact_level(IntegrandPoly.monomial(1), q, p, N)
    target = rf_eval(euler_number(1), Fraction(q))
    assert vfrac(exact - target, p) >= 3
    got = fermionic_integral_level(IntegrandPoly.monomial(1), padic_q(q, p), N)
    assert (got - padic_eval(euler_number(1), padic_q(q, p))).valuation() >= 3


def test_witt_n0_is_exact():
    q = padic_q(4, 3)
    assert witt_check(0, 0, q, 4) == [q.M] * 4


def test_witt_n1_p3_nondecreasing():
    vals = witt_check(1, 0, padic_q(4, 3), 5)
    assert vals == sorted(vals)
    assert vals[-1] >= 5


def test_witt_n5_x0_1_p7():
    vals = witt_check(5, 1, padic_q(8, 7), 4)
    assert vals[-1] >= 2


@pytest.mark.parametrize("p,q", [(3, 4), (5, 6), (3, 13)])
def test_witt_valuations_match_rational_oracle(p, q):
    for n in (1, 2, 3):
        for x0 in (0, 1, Fraction(1, 2)):
            vals = witt_check(n, x0, padic_q(q, p), 3)
            g = IntegrandPoly.shifted_power(x0, n)
            target = rf_eval(euler_polynomial(n).at(x0), Fraction(q))
            for N, v in enumerate(vals, start=1):
                diff = exact_level(g, q, p, N) - target
                assert v == (20 if diff == 0 else vfrac(diff, p))
                # the provable rate: the difference vanishes to order at least N
                assert v >= N


def test_integral_equation_constant_is_exact():
    q = padic_q(6, 5)
    one = IntegrandPoly([1])
    for n in range(1, 6):
        for N in range(1, 5):
            assert integral_equation_check(one, n, q, N).is_zero()


@pytest.mark.parametrize("g", [[0, 1], [0, 0, 1]])
def test_integral_equation_residuals_shrink(g):
    q = padic_q(6, 5)
    for n in (1, 2, 3):
        for N in range(1, 6):
            assert integral_equation_check(IntegrandPoly(g), n, q, N).valuation() >= N - 1


def test_integral_equation_residual_matches_exact_rational():
    p, q, N, n = 3, 4, 3, 2
    g = IntegrandPoly([1, 2, 1])
    qf = Fraction(q)
    lhs = qf ** n * exact_level(g.shift(n), q, p, N) - exact_level(g, q, p, N)
    rhs = (1 + qf) * sum(qf ** l * g(l) * (-1) ** (n - 1 - l) for l in range(n))
    got = integral_equation_check(g, n, padic_q(q, p), N)
    assert agrees(got, lhs - rhs)


def test_multivariate_r1_reduces_to_single():
    q = padic_q(6, 5)
    for n in range(4):
        single = fermionic_integral_level(IntegrandPoly.shifted_power(Fraction(1, 3), n), q, 3)
        assert multivariate_integral_level(n, [1], Fraction(1, 3), q, 3) == single


def test_multivariate_n0_is_one():
    q = padic_q(6, 5)
    for N in (1, 2, 3):
        assert multivariate_integral_level(0, [1, 1], 0, q, N) == 1


def test_multivariate_matches_double_sum():
    p, q, N = 3, 4, 2
    qf = Fraction(q)
    a1, a2, x0, n = Fraction(2), Fraction(1, 2), Fraction(1), 3
    scale = ((1 + qf) / (1 + qf ** (p ** N))) ** 2
    exact = scale * sum(
        (a1 * y1 + a2 * y2 + x0) ** n * (-qf) ** (y1 + y2)
        for y1 in range(p ** N) for y2 in range(p ** N)
    )
    got = multivariate_integral_level(n, [a1, a2], x0, padic_q(q, p), N)
    assert agrees(got, exact)


def test_multivariate_example_r2():
    q = padic_q(6, 5)
    target = padic_eval(higher_order_euler(2, 2), q)
    got = multivariate_integral_level(2, [1, 1], 0, q, 3)
    assert (got - target).valuation() >= 2
    assert multivariate_check(2, [1, 1], 0, q, 3) >= 2


def test_shifted_power_and_shift():
    g = IntegrandPoly.shifted_power(2, 3)
    assert g.coeffs == tuple(Fraction(comb(3, j) * 2 ** (3 - j)) for j in range(4))
    h = IntegrandPoly([1, 0, 1]).shift(2)
    assert all(h(x) == (x + 2) ** 2 + 1 for x in range(5))


def test_rejections():
    with pytest.raises(ValueError):
        fermionic_integral_level(IntegrandPoly([1]), padic_q(3, 2), 2)
    with pytest.raises(ValueError):
        fermionic_integral_level(IntegrandPoly([1]), padic_q(5, 3), 2)  # v(q - 1) = 0
    with pytest.raises(ValueError):
        fermionic_integral_level(IntegrandPoly([1]), padic_q(4, 9), 2)
    with pytest.raises(ValueError):
        fermionic_integral_level(IntegrandPoly([1]), padic_q(8, 7), 9)  # beyond the point budget
    with pytest.raises(PrecisionError):
        fermionic_integral_level(IntegrandPoly([1]), padic_q(4, 3, precision=1), 1)
    with pytest.raises(ValueError):
        multivariate_integral_level(2, [1, 1, 1], 0, padic_q(4, 3), 2)
