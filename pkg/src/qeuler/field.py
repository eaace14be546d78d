"""Exact arithmetic in Q[q] and Q(q).

Coefficients are :class:`fractions.Fraction`.  Polynomials are immutable
tuples of coefficients in ascending degree with no trailing zeros; rational
functions are kept in canonical form (coprime, monic denominator, zero is
``0/1``), so equality is structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """Evaluation hit a zero of the denominator."""

    def __init__(self, point, denominator: "QPolynomial"):
        super().__init__(f"denominator {denominator} vanishes at q = {point}")
        self.point = point
        self.denominator = denominator


def _strip(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while out and not out[-1]:
        out.pop()
    return tuple(out)


class QPolynomial:
    """Univariate polynomial in ``q`` with rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Rational] = ()):
        self.coeffs = _strip(Fraction(c) for c in coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...]) -> "QPolynomial":
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Rational) -> "QPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: Rational = 1) -> "QPolynomial":
        return cls([0] * k + [c])

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, QPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip((Fraction(other),))
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPolynomial._raw(_strip(out))

    def __neg__(self) -> "QPolynomial":
        return QPolynomial._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def __mul__(self, other: "QPolynomial") -> "QPolynomial":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_POLY
        if len(b) == 1:
            c = b[0]
            return QPolynomial._raw(tuple(x * c for x in a))
        if len(a) == 1:
            c = a[0]
            return QPolynomial._raw(tuple(c * y for y in b))
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPolynomial._raw(_strip(out))

    def scale(self, c: Rational) -> "QPolynomial":
        c = Fraction(c)
        if not c:
            return ZERO_POLY
        return QPolynomial._raw(tuple(x * c for x in self.coeffs))

    def __pow__(self, k: int) -> "QPolynomial":
        if k < 0:
            raise ValueError("negative exponent")
        result, base = ONE_POLY, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "QPolynomial") -> tuple["QPolynomial", "QPolynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            c = c / lead
            quot[i - db] = c
            for j, y in enumerate(other.coeffs):
                rem[i - db + j] -= c * y
        return QPolynomial._raw(_strip(quot)), QPolynomial._raw(_strip(rem[:db] if db > 0 else []))

    def exact_div(self, other: "QPolynomial") -> "QPolynomial":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "QPolynomial":
        if not self.coeffs or self.leading == 1:
            return self
        return self.scale(1 / self.leading)

    def substitute_power(self, k: int) -> "QPolynomial":
        """Return ``p(q**k)``."""
        if k < 1:
            raise ValueError("k must be a positive integer")
        if k == 1 or len(self.coeffs) <= 1:
            return self
        out = [Fraction(0)] * (k * self.degree + 1)
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return QPolynomial._raw(tuple(out))

    # -- evaluation ----------------------------------------------------------

    def __call__(self, q0):
        if isinstance(q0, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * q0 + c
            return acc
        if isinstance(q0, (float, complex)):
            z = complex(q0)
            acc = 0j
            for c in reversed(self.coeffs):
                acc = acc * z + float(c)
            return acc
        # Generic ring element (mpmath numbers, p-adic numbers): the element
        # type must know how to absorb a Fraction.
        convert = _converter_for(q0)
        acc = convert(Fraction(0))
        for c in reversed(self.coeffs):
            acc = acc * q0 + convert(c)
        return acc

    # -- display -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "q" if k == 1 else f"q^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"QPolynomial({str(self)!r})"


ZERO_POLY = QPolynomial._raw(())
ONE_POLY = QPolynomial._raw((Fraction(1),))
Q_POLY = QPolynomial._raw((Fraction(0), Fraction(1)))


def _converter_for(q0):
    try:
        import mpmath
    except ImportError:  # pragma: no cover
        mpmath = None
    if mpmath is not None and isinstance(q0, (mpmath.mpf, mpmath.mpc)):
        return lambda c: mpmath.mpf(c.numerator) / c.denominator
    return lambda c: c


# -- gcd over Z via primitive polynomial remainder sequences -------------------


def _integer_primitive(coeffs: Sequence[Fraction]) -> list[int]:
    """Scale to coprime integer coefficients with positive leading term."""
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    ints = [int(c * den) for c in coeffs]
    g = reduce(math.gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _primitive_part(ints: list[int]) -> list[int]:
    g = reduce(math.gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints] if g != 1 else ints


def _pseudo_remainder(a: list[int], b: list[int]) -> list[int]:
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c:
            rem = [lead * x for x in rem]
            for j, y in enumerate(b):
                rem[i - db + j] -= c * y
        rem.pop()
    while rem and not rem[-1]:
        rem.pop()
    return rem


def poly_gcd(a: QPolynomial, b: QPolynomial) -> QPolynomial:
    """Monic gcd of two polynomials (``0`` iff both are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return ONE_POLY
    x = _integer_primitive(a.coeffs)
    y = _integer_primitive(b.coeffs)
    if len(x) < len(y):
        x, y = y, x
    while True:
        r = _pseudo_remainder(x, y)
        if not r:
            break
        if len(r) == 1:
            return ONE_POLY
        x, y = y, _primitive_part(r)
    return QPolynomial(y).monic()


# -- Q(q) ------------------------------------------------------------------------


class QRationalFunction:
    """Element of Q(q) in canonical form ``num/den``."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO_POLY, ONE_POLY
        else:
            g = poly_gcd(num, den)
            if not g.is_one():
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.leading
            if lead != 1:
                num = num.scale(1 / lead)
                den = den.scale(1 / lead)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: QPolynomial, den: QPolynomial) -> "QRationalFunction":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value) -> "QRationalFunction":
        if isinstance(value, QRationalFunction):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._raw(QPolynomial.constant(value), ONE_POLY)
        if isinstance(value, QPolynomial):
            return cls._raw(value, ONE_POLY)
        raise TypeError(f"cannot coerce {type(value).__name__} to QRationalFunction")

    def canonicalize(self) -> "QRationalFunction":
        return QRationalFunction(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        try:
            other = QRationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            if self.den.is_one():
                return QRationalFunction._raw(self.num + other.num, ONE_POLY)
            return QRationalFunction(self.num + other.num, self.den)
        if self.den.is_one():
            return QRationalFunction._raw(self.num * other.den + other.num, other.den)
        if other.den.is_one():
            return QRationalFunction._raw(self.num + other.num * self.den, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_one():
            # coprime denominators: the sum is already in lowest terms
            num = self.num * other.den + other.num * self.den
            return _with_monic(num, self.den * other.den)
        b = self.den.exact_div(g)
        d = other.den.exact_div(g)
        return QRationalFunction(self.num * d + other.num * b, self.den * d)

    __radd__ = __add__

    def __neg__(self) -> "QRationalFunction":
        return QRationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = QRationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QRationalFunction.coerce(other) - self

    def __mul__(self, other):
        try:
            other = QRationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        if other.num.is_constant() and other.den.is_one():
            return QRationalFunction._raw(self.num.scale(other.num.leading), self.den)
        if self.num.is_constant() and self.den.is_one():
            return QRationalFunction._raw(other.num.scale(self.num.leading), other.den)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        a = self.num if g1.is_one() else self.num.exact_div(g1)
        d = other.den if g1.is_one() else other.den.exact_div(g1)
        c = other.num if g2.is_one() else other.num.exact_div(g2)
        b = self.den if g2.is_one() else self.den.exact_div(g2)
        return _with_monic(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "QRationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return _with_monic(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = QRationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QRationalFunction.coerce(other) / self

    def __pow__(self, k: int) -> "QRationalFunction":
        if k < 0:
            return self.inverse() ** (-k)
        return QRationalFunction._raw(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, QRationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, QPolynomial)):
            return self == QRationalFunction.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- transforms ------------------------------------------------------------

    def substitute_power(self, k: int) -> "QRationalFunction":
        """Replace ``q`` by ``q**k``.

        Coprimality and monicity survive the substitution, so the result is
        canonical without another gcd.
        """
        if k < 1:
            raise ValueError("k must be a positive integer")
        return QRationalFunction._raw(self.num.substitute_power(k), self.den.substitute_power(k))

    def __call__(self, q0):
        return rf_eval(self, q0)

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        n = str(self.num)
        if len([c for c in self.num.coeffs if c]) > 1:
            n = f"({n})"
        d = str(self.den)
        if len([c for c in self.den.coeffs if c]) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self) -> str:
        return f"QRationalFunction({str(self)!r})"


def _as_poly(value) -> QPolynomial:
    if isinstance(value, QPolynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return QPolynomial.constant(value)
    if isinstance(value, (list, tuple)):
        return QPolynomial(value)
    raise TypeError(f"cannot build a polynomial from {type(value).__name__}")


def _with_monic(num: QPolynomial, den: QPolynomial) -> QRationalFunction:
    """Build from an already coprime pair, only normalizing the leading term."""
    if num.is_zero():
        return ZERO
    lead = den.leading
    if lead != 1:
        num = num.scale(1 / lead)
        den = den.scale(1 / lead)
    return QRationalFunction._raw(num, den)


ZERO = QRationalFunction._raw(ZERO_POLY, ONE_POLY)
ONE = QRationalFunction._raw(ONE_POLY, ONE_POLY)
Q = QRationalFunction._raw(Q_POLY, ONE_POLY)


def rf_arith(a: QRationalFunction, b: QRationalFunction, op: str) -> QRationalFunction:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two elements of Q(q)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_substitute_power(f: QRationalFunction, k: int) -> QRationalFunction:
    return f.substitute_power(k)


def rf_eval(f: QRationalFunction, q0):
    """Evaluate at ``q0``.

    Rational points give an exact :class:`Fraction`, floats and complex
    numbers give a ``complex`` computed by Horner's scheme; other numeric
    types (mpmath, p-adic numbers) are evaluated in their own arithmetic.
    Raises :class:`PoleError` when the denominator vanishes at ``q0``.
    """
    f = QRationalFunction.coerce(f)
    if isinstance(q0, bool):
        q0 = int(q0)
    d = f.den(q0)
    if _is_zero_value(d):
        raise PoleError(q0, f.den)
    return f.num(q0) / d


def _is_zero_value(v) -> bool:
    is_zero = getattr(v, "is_zero", None)
    if callable(is_zero):
        return is_zero()
    return v == 0


def q_bracket(x: int) -> QPolynomial:
    """``[x]_q = 1 + q + ... + q^(x-1)``, the q-analogue of ``x``."""
    if x < 0:
        raise ValueError("q_bracket is defined here for nonnegative integers")
    return QPolynomial([1] * x)


def q_bracket_rf(x: int) -> QRationalFunction:
    return QRationalFunction.coerce(q_bracket(x))


def q_power(k: int) -> QRationalFunction:
    """``q**k`` as an element of Q(q)."""
    if k < 0:
        return ONE / q_power(-k)
    return QRationalFunction._raw(QPolynomial.monomial(k), ONE_POLY)
