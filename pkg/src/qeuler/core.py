"""q-Euler numbers and polynomials over Q(q).

The numbers are generated by the recurrence obtained from multiplying the
generating function ``[2]_q e^{xt} / (q e^t + 1)`` by ``q e^t + 1``::

    q * sum_{k<=n} C(n,k) E_k + E_n = [2]_q * [n == 0]

Everything else (polynomials, higher order, Barnes weights) is built from
the number table by binomial convolution of exponential generating
functions.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .field import ONE, Q, ZERO, QRationalFunction, q_bracket_rf, rf_eval

TWO_Q = q_bracket_rf(2)  # [2]_q = 1 + q
_RATIO = -Q / TWO_Q  # -q/(1+q)


class XPolynomial:
    """Polynomial in ``x`` whose coefficients lie in Q(q)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        out = [QRationalFunction.coerce(c) for c in coeffs]
        while out and out[-1].is_zero():
            out.pop()
        self.coeffs: tuple[QRationalFunction, ...] = tuple(out)

    @classmethod
    def constant(cls, c) -> "XPolynomial":
        return cls((c,))

    @classmethod
    def x(cls) -> "XPolynomial":
        return cls((ZERO, ONE))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> QRationalFunction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, XPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, QRationalFunction)):
            return self == XPolynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "XPolynomial":
        other = _as_xpoly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return XPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "XPolynomial":
        return XPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "XPolynomial":
        return self + (-_as_xpoly(other))

    def __rsub__(self, other) -> "XPolynomial":
        return _as_xpoly(other) - self

    def __mul__(self, other) -> "XPolynomial":
        other = _as_xpoly(other)
        if self.is_zero() or other.is_zero():
            return XPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return XPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "XPolynomial":
        other = _as_xpoly(other)
        if other.degree != 0:
            raise ValueError("can only divide an x-polynomial by a constant in x")
        c = other.coeffs[0]
        return XPolynomial(a / c for a in self.coeffs)

    def __pow__(self, k: int) -> "XPolynomial":
        if k < 0:
            raise ValueError("negative exponent")
        out = XPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def at(self, x0) -> QRationalFunction:
        """Specialize ``x`` to a rational number or a Q(q) element."""
        x0 = QRationalFunction.coerce(Fraction(x0) if isinstance(x0, (int, Fraction)) else x0)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def evaluate(self, x0, q0):
        """Numeric or exact value at ``(x0, q0)``."""
        return rf_eval(self.at(x0), q0)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            negative = _leading_sign(c) < 0
            body = _term(-c if negative else c, mono)
            if not out:
                out = ("-" if negative else "") + body
            else:
                out += (" - " if negative else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"XPolynomial({str(self)!r})"


def _as_xpoly(value) -> XPolynomial:
    if isinstance(value, XPolynomial):
        return value
    return XPolynomial.constant(value)


def _leading_sign(c: QRationalFunction) -> int:
    return 1 if c.num.leading > 0 else -1


def _term(c: QRationalFunction, mono: str) -> str:
    if not mono:
        s = str(c)
        if c.den.is_one() and sum(1 for a in c.num.coeffs if a) > 1:
            s = f"({s})"
        return s
    if c == ONE:
        return mono
    s = str(c)
    if c.den.is_one() and sum(1 for a in c.num.coeffs if a) > 1:
        s = f"({s})"
    return f"{s}*{mono}"


# -- q-Euler numbers -------------------------------------------------------------


class EulerNumberTable:
    """Append-only memo of ``E_{n,q}``.

    Lookups are lock-free; extension happens under a lock and only ever
    appends, so a reader always sees a consistent prefix.
    """

    def __init__(self) -> None:
        self._entries: list[QRationalFunction] = [ONE]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, n: int) -> QRationalFunction:
        if n < 0:
            raise ValueError("n must be nonnegative")
        entries = self._entries
        if n < len(entries):
            return entries[n]
        with self._lock:
            while len(self._entries) <= n:
                self._entries.append(_next_euler(self._entries))
            return self._entries[n]

    def prefix(self, n: int) -> tuple[QRationalFunction, ...]:
        """``(E_0, ..., E_n)``."""
        self.get(n)
        return tuple(self._entries[: n + 1])


def _next_euler(table: Sequence[QRationalFunction]) -> QRationalFunction:
    n = len(table)
    acc = ZERO
    for k, e in enumerate(table):
        acc = acc + comb(n, k) * e
    return _RATIO * acc


_TABLE = EulerNumberTable()


def euler_number(n: int) -> QRationalFunction:
    """The q-Euler number ``E_{n,q}``.

    >>> str(euler_number(1))
    '-q/(q + 1)'
    """
    return _TABLE.get(n)


def euler_numbers(n_max: int) -> tuple[QRationalFunction, ...]:
    return _TABLE.prefix(n_max)


def euler_polynomial(n: int) -> XPolynomial:
    """``E_{n,q}(x) = sum_m C(n,m) E_{m,q} x^(n-m)``; monic of degree ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    e = euler_numbers(n)
    return XPolynomial(comb(n, n - j) * e[n - j] for j in range(n + 1))


def euler_polynomial_at(n: int, x0) -> QRationalFunction:
    return euler_polynomial(n).at(x0)


def binomial_convolution(a: Sequence, b: Sequence, n_max: int) -> list[QRationalFunction]:
    """Coefficients of the product of two exponential generating functions."""
    return [
        sum((comb(n, k) * a[k] * b[n - k] for k in range(n + 1)), ZERO)
        for n in range(n_max + 1)
    ]


def higher_order_euler_numbers(n_max: int, r: int) -> list[QRationalFunction]:
    """``E^{(r)}_{n,q}`` for ``n <= n_max``, by an r-fold Cauchy product."""
    if r < 1:
        raise ValueError("order r must be positive")
    base = list(euler_numbers(n_max))
    out = base
    for _ in range(r - 1):
        out = binomial_convolution(out, base, n_max)
    return out


def higher_order_euler(n: int, r: int) -> QRationalFunction:
    """Coefficient of ``t^n/n!`` in ``([2]_q / (q e^t + 1))^r``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return higher_order_euler_numbers(n, r)[n]


def higher_order_euler_polynomial(n: int, r: int) -> XPolynomial:
    """``E^{(r)}_{n,q}(x) = sum_l C(n,l) x^(n-l) E^{(r)}_{l,q}``."""
    e = higher_order_euler_numbers(n, r)
    return XPolynomial(comb(n, n - j) * e[n - j] for j in range(n + 1))


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multinomial(n: int, parts: Sequence[int]) -> int:
    out = factorial(n)
    for p in parts:
        out //= factorial(p)
    return out


def sums_of_products_expansion(n: int, r: int) -> XPolynomial:
    """``E^{(r)}_{n,q}(x)`` as the multinomial sum of products of ``E_{l,q}``."""
    e = euler_numbers(n)
    coeffs = [ZERO] * (n + 1)
    for m in range(n + 1):
        inner = ZERO
        for ls in compositions(m, r):
            prod = ONE
            for l in ls:
                prod = prod * e[l]
            inner = inner + multinomial(m, ls) * prod
        coeffs[n - m] = coeffs[n - m] + comb(n, m) * inner
    return XPolynomial(coeffs)


def barnes_euler_polynomial(n: int, weights: Sequence, x=0) -> QRationalFunction:
    """Barnes-type ``E_{n,q}(w_1, ..., w_r | x)`` for nonzero rational weights.

    Each factor ``[2]_q / (q e^{w t} + 1)`` has exponential coefficients
    ``w^m E_{m,q}``; the factor ``e^{xt}`` contributes ``x^m``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    weights = [Fraction(w) for w in weights]
    if not weights:
        raise ValueError("at least one weight is required")
    if any(w == 0 for w in weights):
        raise ValueError("weights must be nonzero")
    x = Fraction(x)
    e = euler_numbers(n)
    acc: list = [QRationalFunction.coerce(x ** m) for m in range(n + 1)]
    for w in weights:
        acc = binomial_convolution(acc, [w ** m * e[m] for m in range(n + 1)], n)
    return acc[n]


def barnes_euler_polynomial_multinomial(n: int, weights: Sequence, x=0) -> QRationalFunction:
    """Same quantity summed term by term over ``m + l_1 + ... + l_r = n``."""
    weights = [Fraction(w) for w in weights]
    x = Fraction(x)
    e = euler_numbers(n)
    acc = ZERO
    for parts in compositions(n, len(weights) + 1):
        m, ls = parts[0], parts[1:]
        term = QRationalFunction.coerce(multinomial(n, parts) * x ** m)
        for w, l in zip(weights, ls):
            term = term * (w ** l) * e[l]
        acc = acc + term
    return acc


def q_one_limit(n: int) -> Fraction:
    """``E_{n,q}`` at ``q = 1``: the classical Euler polynomial value ``E_n(0)``."""
    return rf_eval(euler_number(n), 1)
