"""Fixed-precision p-adic numbers and finite-level fermionic q-integrals.

The level-``N`` fermionic integral of ``g`` on ``Z_p`` is the sum

    [2]_q / (1 + q^(p^N)) * sum_{x < p^N} g(x) (-1)^x q^x,

which converges to the fermionic p-adic q-integral as ``N`` grows.  For
``p`` odd and ``q = 1 mod p`` both ``1 + q`` and ``1 + q^(p^N)`` are units,
and for p-integral integrands the sum is computed exactly modulo the
working power of ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb
from typing import Sequence

from .core import barnes_euler_polynomial, euler_polynomial
from .field import QRationalFunction, rf_eval

DEFAULT_PRECISION = 20
MAX_LEVEL_POINTS = 10 ** 7


class PrecisionError(ArithmeticError):
    """The computation ran out of p-adic digits."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def valuation_of_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicNumber:
    """``p^v * u`` with ``u`` a unit known modulo ``p^M``.

    ``precision`` (= ``v + M``) is the absolute precision: the number is
    known modulo ``p^precision``.  Zero is stored as ``u = 0, M = 0`` with
    ``v`` equal to its absolute precision.
    """

    p: int
    v: int
    u: int
    M: int

    # -- construction ------------------------------------------------------

    @classmethod
    def from_rational(cls, x, p: int, relprec: int = DEFAULT_PRECISION) -> "PadicNumber":
        """Exact rational ``x`` rounded to ``relprec`` significant digits."""
        x = Fraction(x)
        if relprec < 1:
            raise PrecisionError("need at least one p-adic digit")
        if x == 0:
            return cls.zero(p, relprec)
        v = valuation_of_int(x.numerator, p) - valuation_of_int(x.denominator, p)
        num = x.numerator // p ** max(v, 0)
        den = x.denominator // p ** max(-v, 0)
        mod = p ** relprec
        return cls(p, v, num * pow(den, -1, mod) % mod, relprec)

    @classmethod
    def zero(cls, p: int, precision: int) -> "PadicNumber":
        return cls(p, precision, 0, 0)

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"cannot combine {self.p}-adic and {other.p}-adic numbers")
            return other
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                return PadicNumber.zero(self.p, self.precision + 1)
            v = valuation_of_int(other.numerator, self.p) - valuation_of_int(other.denominator, self.p)
            digits = max(self.M, self.precision - v) + 1
            return PadicNumber.from_rational(other, self.p, digits)
        return NotImplemented

    # -- structure ---------------------------------------------------------

    @property
    def precision(self) -> int:
        return self.v + self.M

    def is_zero(self) -> bool:
        return self.u == 0

    def valuation(self) -> int:
        """``v_p``; for a number indistinguishable from zero, its absolute precision."""
        return self.v

    @property
    def digits(self) -> tuple[int, ...]:
        """Base-p digits of the unit part, least significant first."""
        out, u = [], self.u
        for _ in range(self.M):
            out.append(u % self.p)
            u //= self.p
        return tuple(out)

    def lift(self) -> Fraction:
        """The rational ``u * p^v`` with ``0 <= u < p^M``."""
        return Fraction(self.u) * Fraction(self.p) ** self.v

    def with_precision(self, precision: int) -> "PadicNumber":
        """Reduce to a lower absolute precision."""
        if precision >= self.precision:
            return self
        if self.is_zero() or precision <= self.v:
            return PadicNumber.zero(self.p, precision)
        m = precision - self.v
        return PadicNumber(self.p, self.v, self.u % self.p ** m, m)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        prec = min(self.precision, other.precision)
        vmin = min(self.v, other.v)
        if prec <= vmin:
            return PadicNumber.zero(p, prec)
        mod = p ** (prec - vmin)
        total = (self.u * p ** (self.v - vmin) + other.u * p ** (other.v - vmin)) % mod
        return _normalize(p, vmin, total, prec)

    __radd__ = __add__

    def __neg__(self) -> "PadicNumber":
        if self.is_zero():
            return self
        return PadicNumber(self.p, self.v, (-self.u) % self.p ** self.M, self.M)

    def __sub__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PadicNumber":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.v + other.precision, other.v + self.precision)
        if self.is_zero() or other.is_zero():
            return PadicNumber.zero(self.p, prec)
        m = min(self.M, other.M)
        return PadicNumber(self.p, self.v + other.v, self.u * other.u % self.p ** m, m)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero():
            raise ZeroDivisionError("p-adic number indistinguishable from zero")
        mod = self.p ** self.M
        return PadicNumber(self.p, -self.v, pow(self.u, -1, mod), self.M)

    def __truediv__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "PadicNumber":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "PadicNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result = self._coerce(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        # rationals are exact, so compare them at this number's precision
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other).with_precision(self.precision)
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return (self.p, self.v, self.u, self.M) == (other.p, other.v, other.u, other.M)

    def __hash__(self) -> int:
        return hash((self.p, self.v, self.u, self.M))

    def __str__(self) -> str:
        if self.is_zero():
            return f"O({self.p}^{self.precision})"
        return f"{self.u}*{self.p}^{self.v} + O({self.p}^{self.precision})"


def _normalize(p: int, v: int, value: int, prec: int) -> PadicNumber:
    if value == 0:
        return PadicNumber.zero(p, prec)
    while value % p == 0:
        value //= p
        v += 1
    m = prec - v
    return PadicNumber(p, v, value % p ** m, m)


# -- integrands ------------------------------------------------------------------


@dataclass(frozen=True)
class IntegrandPoly:
    """Polynomial function on Z_p with rational coefficients (ascending)."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence = ()):
        out = [Fraction(c) for c in coeffs]
        while out and out[-1] == 0:
            out.pop()
        object.__setattr__(self, "coeffs", tuple(out))

    @classmethod
    def monomial(cls, n: int) -> "IntegrandPoly":
        return cls([0] * n + [1])

    @classmethod
    def shifted_power(cls, x0, n: int) -> "IntegrandPoly":
        """``y -> (x0 + y)^n``."""
        x0 = Fraction(x0)
        return cls([comb(n, j) * x0 ** (n - j) for j in range(n + 1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, n: int) -> "IntegrandPoly":
        """``x -> g(x + n)``."""
        out = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            for j in range(i + 1):
                out[j] += c * comb(i, j) * n ** (i - j)
        return IntegrandPoly(out)


# -- level sums ------------------------------------------------------------------


def _check_q(q: PadicNumber, N: int) -> None:
    p = q.p
    if p == 2:
        raise ValueError("p = 2 is not supported: 1 + q is not a unit when q = 1 mod 2")
    if not _is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if N < 1:
        raise ValueError("level N must be a positive integer")
    if p ** N > MAX_LEVEL_POINTS:
        raise ValueError(f"p^N = {p}^{N} exceeds the cost budget of {MAX_LEVEL_POINTS} points")
    if q.v != 0 or q.M < 1 or (q - 1).valuation() < 1:
        raise ValueError("q must satisfy v_p(q - 1) >= 1")
    if q.M < 2:
        raise PrecisionError("q carries too few digits for a meaningful level sum")


def padic_q(q, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """Accept an integer/rational ``q`` or an existing :class:`PadicNumber`."""
    if isinstance(q, PadicNumber):
        if q.p != p:
            raise ValueError("prime mismatch")
        return q
    return PadicNumber.from_rational(q, p, precision)


def level_moments(q: PadicNumber, N: int, degree: int) -> list[int]:
    """``sum_{x < p^N} (-q)^x x^j mod p^M`` for ``j = 0..degree``."""
    _check_q(q, N)
    p, mod = q.p, q.p ** q.M
    minus_q = (-q.u) % mod
    out = [0] * (degree + 1)
    weight = 1
    for x in range(p ** N):
        xj = 1
        for j in range(degree + 1):
            out[j] += weight * xj
            xj = xj * x % mod
        weight = weight * minus_q % mod
    return [m % mod for m in out]


def level_normalizer(q: PadicNumber, N: int) -> PadicNumber:
    """``[2]_q / (1 + q^(p^N))``."""
    return (1 + q) / (1 + q ** (q.p ** N))


def _common_denominator(values: Sequence[Fraction]) -> int:
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)


def fermionic_integral_level(g: IntegrandPoly, q: PadicNumber, N: int) -> PadicNumber:
    """Level-``N`` approximant of the fermionic integral of ``g``."""
    _check_q(q, N)
    if not g.coeffs:
        return PadicNumber.zero(q.p, q.M)
    moments = level_moments(q, N, g.degree)
    den = _common_denominator(g.coeffs)
    mod = q.p ** q.M
    total = sum(int(c * den) * m for c, m in zip(g.coeffs, moments)) % mod
    raw = _normalize(q.p, 0, total, q.M)
    result = level_normalizer(q, N) * raw / den
    if result.precision <= 0:
        raise PrecisionError("result has no significant p-adic digits")
    return result


def padic_eval(f: QRationalFunction, q: PadicNumber) -> PadicNumber:
    value = rf_eval(f, q)
    if not isinstance(value, PadicNumber):
        value = q._coerce(value)
    return value


def witt_check(n: int, x0, q: PadicNumber, N_max: int) -> list[int]:
    """Valuations of ``I_N((x0 + y)^n) - E_{n,q}(x0)`` for ``N = 1..N_max``.

    A difference indistinguishable from zero reports the working precision.
    """
    target = padic_eval(euler_polynomial(n).at(x0), q)
    g = IntegrandPoly.shifted_power(x0, n)
    return [(fermionic_integral_level(g, q, N) - target).valuation() for N in range(1, N_max + 1)]


def integral_equation_residual(g: IntegrandPoly, n: int, q: PadicNumber, N: int) -> PadicNumber:
    """LHS - RHS of ``q^n I(g_n) + (-1)^(n-1) I(g) = [2]_q sum_{l<n} (-1)^(n-1-l) q^l g(l)``.

    For odd ``n`` this is the form with ``+ I(g)`` and ``(-1)^l``; for
    ``n = 1`` the right side is ``[2]_q g(0)``.
    """
    if n < 1:
        raise ValueError("shift n must be positive")
    lhs = q ** n * fermionic_integral_level(g.shift(n), q, N)
    lhs = lhs + fermionic_integral_level(g, q, N) * (-1) ** (n - 1)
    rhs = q._coerce(0)
    for l in range(n):
        rhs = rhs + q ** l * g(l) * (-1) ** (n - 1 - l)
    rhs = rhs * (1 + q)
    return lhs - rhs


integral_equation_check = integral_equation_residual


def multivariate_integral_level(n: int, weights: Sequence, x0, q: PadicNumber, N: int) -> PadicNumber:
    """Level-``N`` iterated integral of ``(a_1 y_1 + ... + a_r y_r + x0)^n``, ``r <= 2``.

    The iterated sum factors through the one-variable moments, so each
    variable costs a single pass over ``x < p^N``.
    """
    r = len(weights)
    if r not in (1, 2):
        raise ValueError("only r = 1 or r = 2 variables are supported")
    weights = [Fraction(a) for a in weights]
    if any(a.denominator % q.p == 0 for a in weights):
        raise ValueError("weights must be p-integral")
    x0 = Fraction(x0)
    moments = level_moments(q, N, n)
    scale = level_normalizer(q, N)
    mom = [q._coerce(m) for m in moments]
    total = q._coerce(0)
    if r == 1:
        (a,) = weights
        for j in range(n + 1):
            total = total + mom[j] * (comb(n, j) * a ** j * x0 ** (n - j))
        return total * scale
    a1, a2 = weights
    for j1 in range(n + 1):
        for j2 in range(n + 1 - j1):
            m = n - j1 - j2
            c = Fraction(math.factorial(n), math.factorial(j1) * math.factorial(j2) * math.factorial(m))
            total = total + mom[j1] * mom[j2] * (c * a1 ** j1 * a2 ** j2 * x0 ** m)
    return total * scale * scale


def multivariate_check(n: int, weights: Sequence, x0, q: PadicNumber, N: int) -> int:
    """Valuation of the level-``N`` multivariate integral minus the Barnes-type value."""
    target = padic_eval(barnes_euler_polynomial(n, weights, x0), q)
    return (multivariate_integral_level(n, weights, x0, q, N) - target).valuation()
