"""Dirichlet characters of odd modulus and generalized q-Euler numbers."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd

from .core import euler_polynomial, TWO_Q
from .field import ZERO, QRationalFunction, q_bracket_rf, q_power, rf_eval


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def primitive_root(p: int, e: int) -> int:
    """Smallest generator of the cyclic group ``(Z/p^e)^*`` for odd prime ``p``."""
    modulus = p ** e
    phi = (p - 1) * p ** (e - 1)
    prime_factors = [r for r, _ in factorize(phi)]
    for g in range(2, modulus):
        if g % p == 0:
            continue
        if all(pow(g, phi // r, modulus) != 1 for r in prime_factors):
            return g
    return 1  # only reached for modulus 2, excluded by callers


def _discrete_log(a: int, g: int, modulus: int, order: int) -> int:
    x = 1
    for k in range(order):
        if x == a:
            return k
        x = x * g % modulus
    raise ValueError(f"{a} is not a power of {g} mod {modulus}")


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod odd ``modulus`` with values ``exp(2 pi i k / order)``.

    ``exponents[a]`` is ``k`` for units ``a`` and ``None`` where
    ``gcd(a, modulus) > 1``.
    """

    modulus: int
    order: int
    exponents: tuple
    label: str = field(default="", compare=False)

    def exponent(self, a: int):
        return self.exponents[a % self.modulus]

    def value_fraction(self, a: int):
        """``k/order`` in [0, 1) for the value ``exp(2 pi i k/order)``, or ``None``."""
        k = self.exponent(a)
        return None if k is None else Fraction(k, self.order)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_real(self) -> bool:
        return self.order <= 2

    def real_value(self, a: int) -> int:
        """Exact value in {-1, 0, 1} of a real character."""
        if not self.is_real():
            raise ValueError("character is not real-valued")
        k = self.exponent(a)
        if k is None:
            return 0
        return -1 if k else 1

    def __call__(self, a: int) -> complex:
        return char_value_complex(self, a)

    def __str__(self) -> str:
        return self.label or f"chi mod {self.modulus} of order {self.order}"


def char_value_complex(chi: DirichletCharacter, a: int) -> complex:
    k = chi.exponent(a)
    if k is None:
        return 0j
    if k == 0:
        return 1 + 0j
    if 2 * k == chi.order:
        return -1 + 0j
    if 4 * k == chi.order:
        return 1j
    if 4 * k == 3 * chi.order:
        return -1j
    return cmath.exp(2j * math.pi * k / chi.order)


def _check_modulus(f: int) -> None:
    if f < 1:
        raise ValueError("modulus must be a positive integer")
    if f % 2 == 0:
        raise ValueError(f"modulus {f} is even; only odd moduli are supported")


def characters_mod(f: int) -> list[DirichletCharacter]:
    """All ``phi(f)`` characters mod odd ``f`` in canonical order.

    The unit group is split by CRT into cyclic factors ``(Z/p^e)^*``, each with
    a fixed primitive root; a character is a choice of exponent per factor.
    Canonical order: by character order, then by the tuple of values
    (as fractions of a turn) on ``1, ..., f-1``.  Labels are ``"f.index"``.
    """
    _check_modulus(f)
    if f == 1:
        return [DirichletCharacter(1, 1, (0,), label="1.0")]
    factors = [(p, e, p ** e, (p - 1) * p ** (e - 1)) for p, e in factorize(f)]
    roots = [primitive_root(p, e) for p, e, _, _ in factors]
    exponent_lcm = reduce(math.lcm, (phi for *_, phi in factors), 1)
    logs: list = []
    for a in range(f):
        if gcd(a, f) != 1:
            logs.append(None)
            continue
        logs.append(
            tuple(
                _discrete_log(a % m, g, m, phi)
                for (_, _, m, phi), g in zip(factors, roots)
            )
        )
    chars = []
    for choice in product(*(range(phi) for *_, phi in factors)):
        # exponent in units of 1/exponent_lcm of a full turn
        raw = []
        for log in logs:
            if log is None:
                raw.append(None)
            else:
                raw.append(
                    sum(j * d * (exponent_lcm // phi) for j, d, (*_, phi) in zip(choice, log, factors))
                    % exponent_lcm
                )
        step = reduce(gcd, (k for k in raw if k is not None), exponent_lcm)
        order = exponent_lcm // step
        exponents = tuple(None if k is None else k // step for k in raw)
        chars.append(DirichletCharacter(f, order, exponents))

    def sort_key(chi: DirichletCharacter):
        return (chi.order, tuple(chi.value_fraction(a) or 0 for a in range(1, f)))

    chars.sort(key=sort_key)
    return [
        DirichletCharacter(c.modulus, c.order, c.exponents, label=f"{f}.{i}")
        for i, c in enumerate(chars)
    ]


def character_from_label(spec: str) -> DirichletCharacter:
    """Resolve ``"f.index"``; ``"f.trivial"`` and ``"f.nontrivial"`` (index 1) also work."""
    try:
        mod_text, _, idx_text = spec.partition(".")
        f = int(mod_text)
    except ValueError:
        raise ValueError(f"bad character label {spec!r}; expected 'f.index'") from None
    chars = characters_mod(f)
    if idx_text in ("", "trivial"):
        index = 0
    elif idx_text == "nontrivial":
        index = 1
    else:
        try:
            index = int(idx_text)
        except ValueError:
            raise ValueError(f"bad character index in {spec!r}") from None
    if not 0 <= index < len(chars):
        raise ValueError(f"character index {index} out of range for modulus {f} ({len(chars)} characters)")
    return chars[index]


def conductor(chi: DirichletCharacter) -> int:
    """Smallest ``d | f`` such that ``chi`` is trivial on units ``= 1 mod d``."""
    f = chi.modulus
    for d in range(1, f + 1):
        if f % d:
            continue
        if all(
            chi.exponent(a) == 0
            for a in range(1, f)
            if gcd(a, f) == 1 and a % d == 1 % d
        ):
            return d
    return f


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor(chi) == chi.modulus


@dataclass(frozen=True)
class GeneralizedEulerNumber:
    """``E_{n,chi,q} = sum_a chi(a) c_a`` with character-free ``c_a`` in Q(q)."""

    n: int
    modulus: int
    coefficients: tuple

    def contract_exact(self, chi: DirichletCharacter) -> QRationalFunction:
        """Exact value for a real character."""
        _same_modulus(self, chi)
        acc = ZERO
        for a, c in enumerate(self.coefficients):
            v = chi.real_value(a)
            if v:
                acc = acc + v * c
        return acc

    def components(self, chi: DirichletCharacter) -> dict[int, QRationalFunction]:
        """Exact value as ``{k: coefficient of exp(2 pi i k/order)}`` (not reduced
        by cyclotomic relations)."""
        _same_modulus(self, chi)
        out: dict[int, QRationalFunction] = {}
        for a, c in enumerate(self.coefficients):
            k = chi.exponent(a)
            if k is not None and not c.is_zero():
                out[k] = out.get(k, ZERO) + c
        return {k: v for k, v in sorted(out.items()) if not v.is_zero()}

    def evaluate(self, chi: DirichletCharacter, q0) -> complex:
        _same_modulus(self, chi)
        total = 0j
        for a, c in enumerate(self.coefficients):
            v = char_value_complex(chi, a)
            if v:
                total += v * complex(rf_eval(c, q0))
        return total

    def total(self) -> QRationalFunction:
        """``sum_a c_a``, i.e. the contraction with the all-ones function."""
        acc = ZERO
        for c in self.coefficients:
            acc = acc + c
        return acc


def _same_modulus(g: GeneralizedEulerNumber, chi: DirichletCharacter) -> None:
    if g.modulus != chi.modulus:
        raise ValueError(f"modulus mismatch: number mod {g.modulus}, character mod {chi.modulus}")


def generalized_coefficients(n: int, f: int) -> GeneralizedEulerNumber:
    """``c_a = ([2]_q/[2]_{q^f}) f^n (-1)^a q^a E_{n,q^f}(a/f)`` for ``a < f``."""
    _check_modulus(f)
    if n < 0:
        raise ValueError("n must be nonnegative")
    poly = euler_polynomial(n)
    prefactor = TWO_Q / q_bracket_rf(2).substitute_power(f) * (f ** n)
    coeffs = []
    for a in range(f):
        value = poly.at(Fraction(a, f)).substitute_power(f)
        sign = -1 if a % 2 else 1
        coeffs.append(prefactor * q_power(a) * value * sign)
    return GeneralizedEulerNumber(n, f, tuple(coeffs))


def generalized_euler_number(n: int, chi: DirichletCharacter) -> GeneralizedEulerNumber:
    """Generalized q-Euler number ``E_{n,chi,q}`` as a coefficient vector.

    Non-primitive characters are accepted with a warning; nothing in the
    construction depends on primitivity.
    """
    if not is_primitive(chi):
        warnings.warn(f"character {chi} is not primitive", stacklevel=2)
    return generalized_coefficients(n, chi.modulus)


def generalized_euler_value(n: int, chi: DirichletCharacter, q0) -> complex:
    return generalized_coefficients(n, chi.modulus).evaluate(chi, q0)
