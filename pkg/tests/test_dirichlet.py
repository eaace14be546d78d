import cmath
import random
from fractions import Fraction
from math import gcd

import pytest

from qeuler.core import euler_number, euler_polynomial
from qeuler.dirichlet import (
    char_value_complex,
    character_from_label,
    characters_mod,
    conductor,
    generalized_coefficients,
    generalized_euler_number,
    generalized_euler_value,
    is_primitive,
)
from qeuler.field import ZERO, q_bracket_rf, q_power, rf_eval


def brute_force_characters(f):
    """Every homomorphism (Z/f)^* -> phi(f)-th roots of unity, by trying all
    assignments on the units and keeping the multiplicative ones."""
    units = [a for a in range(1, f) if gcd(a, f) == 1]
    m = len(units)
    found = set()

    def extend(assign, i):
        if i == len(units):
            ok = all(
                (assign[a] + assign[b] - assign[a * b % f]) % m == 0 for a in units for b in units
            )
            if ok:
                found.add(tuple(Fraction(assign[a], m) for a in units))
            return
        for k in range(m):
            assign[units[i]] = k
            extend(assign, i + 1)

    extend({}, 0)
    return found


def test_characters_mod_1():
    chars = characters_mod(1)
    assert len(chars) == 1
    assert all(chars[0](a) == 1 for a in range(-5, 6))


def test_characters_mod_3():
    chars = characters_mod(3)
    assert len(chars) == 2
    assert chars[0].is_trivial()
    assert chars[1](2) == -1
    assert character_from_label("3.nontrivial") == chars[1]


def test_characters_mod_9_match_brute_force():
    chars = characters_mod(9)
    assert len(chars) == 6
    assert all(6 % c.order == 0 for c in chars)
    units = [a for a in range(1, 9) if gcd(a, 9) == 1]
    ours = {tuple(c.value_fraction(a) for a in units) for c in chars}
    assert ours == brute_force_characters(9)


@pytest.mark.parametrize("f", [5, 7, 15, 21])
def test_character_count_and_distinctness(f):
    chars = characters_mod(f)
    units = [a for a in range(1, f) if gcd(a, f) == 1]
    assert len(chars) == len(units)
    assert len({c.exponents for c in chars}) == len(chars)
    assert [c.label for c in chars] == [f"{f}.{i}" for i in range(len(chars))]


def test_primitivity_examples():
    assert is_primitive(characters_mod(1)[0])
    assert not is_primitive(characters_mod(3)[0])
    assert is_primitive(characters_mod(3)[1])
    # characters mod 15 induced from mod 3 and mod 5
    conductors = sorted(conductor(c) for c in characters_mod(15))
    assert conductors == [1, 3, 5, 5, 5, 15, 15, 15]


def test_char_value_examples():
    trivial3 = characters_mod(3)[0]
    assert char_value_complex(trivial3, 5) == 1
    assert char_value_complex(characters_mod(3)[1], 2) == -1
    for chi in characters_mod(15):
        assert chi(6) == 0 and chi(10) == 0 and chi(0) == 0


def test_multiplicativity_random_pairs():
    rng = random.Random(7)
    for _ in range(200):
        f = rng.choice([3, 5, 7, 9, 15, 21, 25])
        chi = rng.choice(characters_mod(f))
        a, b = rng.randrange(-50, 50), rng.randrange(-50, 50)
        assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-12


@pytest.mark.parametrize("f", [3, 5, 9, 15])
def test_exact_multiplicativity_and_periodicity(f):
    for chi in characters_mod(f):
        assert chi.exponent(1) == 0
        for a in range(f):
            assert chi.exponent(a + f) == chi.exponent(a) == chi.exponent(a - 3 * f)
            assert (chi.exponent(a) is None) == (gcd(a, f) > 1)
            for b in range(f):
                ka, kb, kab = chi.exponent(a), chi.exponent(b), chi.exponent(a * b)
                if ka is None or kb is None:
                    assert kab is None
                else:
                    assert kab == (ka + kb) % chi.order


@pytest.mark.parametrize("f", [3, 5, 7, 9, 15])
def test_orthogonality(f):
    for chi in characters_mod(f)[1:]:
        assert abs(sum(chi(a) for a in range(f))) < 1e-12
        # exact: every exponent class of a nontrivial character is hit equally often
        counts = {}
        for a in range(f):
            k = chi.exponent(a)
            if k is not None:
                counts[k] = counts.get(k, 0) + 1
        assert len(set(counts.values())) == 1 and len(counts) == chi.order


def test_generalized_mod_1_is_euler_number():
    chi = characters_mod(1)[0]
    for n in range(16):
        g = generalized_euler_number(n, chi)
        assert g.contract_exact(chi) == euler_number(n)


@pytest.mark.parametrize("f", [3, 5])
def test_generalized_total_is_distribution_sum(f):
    # summing c_a over all a is the distribution relation for E_{n,q}
    for n in range(8):
        assert generalized_coefficients(n, f).total() == euler_number(n)


def test_generalized_value_matches_series_n0():
    chi = characters_mod(3)[1]
    q = 0.5
    series = (1 + q) * sum((-q) ** n * chi(n).real for n in range(1, 200))
    assert abs(generalized_euler_value(0, chi, Fraction(1, 2)) - series) < 1e-10


@pytest.mark.parametrize("f", [3, 5, 7])
def test_generalized_value_matches_series(f):
    q = Fraction(1, 3)
    for chi in characters_mod(f):
        for k in range(5):
            series = (1 + q) * sum((-float(q)) ** n * chi(n) * n ** k for n in range(1, 400))
            assert abs(generalized_euler_value(k, chi, q) - series) < 1e-9


def test_coefficients_formula_first_entry():
    g = generalized_coefficients(2, 3)
    expected = q_bracket_rf(2) / q_bracket_rf(2).substitute_power(3) * 9 * euler_polynomial(2).at(0).substitute_power(3)
    assert g.coefficients[0] == expected
    assert g.coefficients[1] == -(
        q_bracket_rf(2) / q_bracket_rf(2).substitute_power(3) * 9 * q_power(1)
        * euler_polynomial(2).at(Fraction(1, 3)).substitute_power(3)
    )


def test_real_character_exact_contraction_matches_complex():
    chi = characters_mod(5)[1]
    assert chi.is_real()
    g = generalized_coefficients(3, 5)
    exact = g.contract_exact(chi)
    assert exact != ZERO
    assert abs(complex(rf_eval(exact, Fraction(1, 2))) - g.evaluate(chi, Fraction(1, 2))) < 1e-12


def test_components_of_complex_character():
    chi = next(c for c in characters_mod(5) if c.order == 4)
    g = generalized_coefficients(2, 5)
    comps = g.components(chi)
    value = sum(complex(rf_eval(v, Fraction(1, 2)))
                * cmath.exp(2j * cmath.pi * k / chi.order) for k, v in comps.items())
    assert abs(value - g.evaluate(chi, Fraction(1, 2))) < 1e-12


def test_even_modulus_rejected():
    with pytest.raises(ValueError):
        characters_mod(4)
    with pytest.raises(ValueError):
        generalized_coefficients(2, 6)
    with pytest.raises(ValueError):
        character_from_label("3.7")


def test_non_primitive_character_warns():
    with pytest.warns(UserWarning):
        generalized_euler_number(2, characters_mod(3)[0])


def test_modulus_mismatch_rejected():
    with pytest.raises(ValueError):
        generalized_coefficients(2, 5).evaluate(characters_mod(3)[1], Fraction(1, 2))
