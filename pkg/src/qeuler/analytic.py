"""Certified evaluation of the q-Euler zeta and l-functions for 0 < q < 1.

Every evaluator sums a plain truncation of its series (no acceleration) and
bounds the omitted tail geometrically.  With ``k = -Re(s)`` the terms are
dominated by ``B_n = C * q^n * L_n^k``; once the ratio ``rho_N`` of
consecutive bounds is below one, and stays below ``rho_N`` for all later
``n``, the tail is at most ``B_N / (1 - rho_N)``.

Sums run in mpmath at a precision picked from the largest term so that
rounding stays below ``tol * 2**-20``; that amount is added to the reported
bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import mpmath

from .core import compositions
from .dirichlet import DirichletCharacter

ROUNDING_SHARE = 2.0 ** -20
MAX_TERMS = 10_000_000


class DomainError(ValueError):
    """Arguments outside the convergent, branch-free domain."""


@dataclass(frozen=True)
class ComplexApprox:
    """Value of a series together with a bound on its distance to the true sum."""

    value: mpmath.mpc
    abs_error_bound: float
    terms: int
    precision: int
    provenance: str = "geometric tail bound + rounding allowance"

    def __complex__(self) -> complex:
        return complex(self.value)

    @property
    def real(self) -> float:
        return float(self.value.real)

    @property
    def imag(self) -> float:
        return float(self.value.imag)

    def distance(self, other) -> float:
        """``|value - other|`` computed at this value's working precision.

        ``other`` may be a Fraction, int, float, complex or mpmath number.
        """
        with mpmath.workprec(self.precision + 20):
            return float(abs(self.value - _to_mp(other)))


def _to_mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        return v
    if isinstance(v, complex):
        return mpmath.mpc(v)
    return mpmath.mpf(v)


def _parse_s(s) -> complex:
    if isinstance(s, str):
        s = complex(s.replace(" ", "").replace("i", "j"))
    if isinstance(s, (mpmath.mpf, mpmath.mpc)):
        s = complex(s)
    if isinstance(s, Fraction):
        s = float(s)
    return complex(s)


def _nonpositive_integer(s: complex):
    """``k`` if ``s == -k`` for an integer ``k >= 0``, else ``None``."""
    if s.imag == 0 and s.real <= 0 and float(s.real).is_integer():
        return int(-s.real)
    return None


def _as_rational_or_float(v, name: str):
    if isinstance(v, str):
        v = Fraction(v)
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite")
        return Fraction(v)  # floats are dyadic rationals, converted exactly
    if isinstance(v, mpmath.mpf):
        man, exp = v.man_exp
        return Fraction(man) * Fraction(2) ** exp
    raise DomainError(f"{name} must be a real number, got {type(v).__name__}")


def _check_q(q0) -> Fraction:
    q = _as_rational_or_float(q0, "q0")
    if not 0 < q < 1:
        raise DomainError(f"q0 = {q0} is outside (0, 1); the series need |q| < 1")
    return q


def _check_tol(tol) -> float:
    tol = float(tol)
    if not tol > 0 or not math.isfinite(tol):
        raise DomainError("tol must be a positive finite number")
    return tol


def _mp(v: Fraction):
    return mpmath.mpf(v.numerator) / v.denominator


def _power(base, s: complex, k_int):
    """``base ** (-s)`` with ``0^0 = 1`` and ``0^k = 0``."""
    if k_int is not None:
        return base ** k_int
    return mpmath.power(base, -mpmath.mpc(s.real, s.imag))


def _working_precision(max_log2_term: float, count: int, s: complex, log_base: float, tol: float) -> int:
    per_term_ops = count + abs(s) * max(log_base, 1.0) + 16
    needed = max_log2_term + math.log2(count + 1) + math.log2(per_term_ops) - math.log2(tol * ROUNDING_SHARE)
    return max(64, int(math.ceil(needed)) + 16)


def _truncation(log_bound, log_rho, start: int, tol: float):
    """Smallest ``N >= start`` with ``rho_N < 1`` and tail ``<= tol/2``.

    Returns ``(N, tail_bound, max_log2_term_before_N)``.
    """
    target = math.log(tol / 2)
    max_log2 = 0.0
    n = start
    while n < MAX_TERMS:
        lb = log_bound(n)
        lr = log_rho(n)
        if lr < 0:
            log_tail = lb - math.log1p(-math.exp(lr))
            if log_tail <= target:
                tail = math.exp(log_tail) * (1 + 1e-9)
                return n, tail, max_log2
        max_log2 = max(max_log2, lb / math.log(2))
        n += 1
    raise DomainError(f"series needs more than {MAX_TERMS} terms for tol={tol}")


def zeta_q(s, x, q0, tol: float = 1e-12) -> ComplexApprox:
    """``[2]_q * sum_{n>=0} (-1)^n q^n / (n + x)^s`` with a certified bound.

    ``x`` must be positive, or zero when ``s`` is a nonpositive integer (then
    the ``n = 0`` term is ``0^k`` with ``0^0 = 1``).
    """
    s = _parse_s(s)
    q = _check_q(q0)
    tol = _check_tol(tol)
    x = _as_rational_or_float(x, "x")
    k_int = _nonpositive_integer(s)
    if x < 0 or (x == 0 and k_int is None):
        raise DomainError("zeta_q needs x > 0, or x = 0 with s a nonpositive integer")
    k = -s.real
    log_q = math.log(q)
    log_two = math.log1p(float(q))
    xf = float(x)

    def log_bound(n):
        return log_two + n * log_q + k * math.log(n + xf)

    def log_rho(n):
        if k <= 0:
            return log_q
        return log_q + k * math.log1p(1 / (n + xf))

    start = 1 if x == 0 else 0
    N, tail, max_log2 = _truncation(log_bound, log_rho, start, tol)
    if x == 0:
        max_log2 = max(max_log2, math.log2(1 + float(q)))
    prec = _working_precision(max_log2, N, s, math.log(N + xf + 1), tol)
    with mpmath.workprec(prec):
        qm = _mp(q)
        xm = _mp(x)
        total = mpmath.mpc(0)
        qn = mpmath.mpf(1)
        for n in range(N):
            base = n + xm
            if base == 0:
                term = mpmath.mpf(1) if k_int == 0 else mpmath.mpf(0)
            else:
                term = _power(base, s, k_int)
            total += term * qn if n % 2 == 0 else -term * qn
            qn *= qm
        value = +(total * (1 + qm))
    return ComplexApprox(mpmath.mpc(value), tail + tol * ROUNDING_SHARE, N, prec)


def l_q(s, chi: DirichletCharacter, q0, tol: float = 1e-12) -> ComplexApprox:
    """``[2]_q * sum_{n>=1} (-1)^n q^n chi(n) / n^s`` with a certified bound."""
    s = _parse_s(s)
    q = _check_q(q0)
    tol = _check_tol(tol)
    k_int = _nonpositive_integer(s)
    k = -s.real
    log_q = math.log(q)
    log_two = math.log1p(float(q))

    def log_bound(n):
        return log_two + n * log_q + k * math.log(n)

    def log_rho(n):
        if k <= 0:
            return log_q
        return log_q + k * math.log1p(1 / n)

    N, tail, max_log2 = _truncation(log_bound, log_rho, 1, tol)
    prec = _working_precision(max_log2, N, s, math.log(N + 1), tol)
    with mpmath.workprec(prec):
        qm = _mp(q)
        values = [_char_mp(chi, a) for a in range(chi.modulus)]
        total = mpmath.mpc(0)
        qn = qm
        for n in range(1, N):
            c = values[n % chi.modulus]
            if c != 0:
                term = _power(mpmath.mpf(n), s, k_int) * qn * c
                total += -term if n % 2 else term
            qn *= qm
        value = +(total * (1 + qm))
    return ComplexApprox(mpmath.mpc(value), tail + tol * ROUNDING_SHARE, N, prec)


def _char_mp(chi: DirichletCharacter, a: int):
    k = chi.exponent(a)
    if k is None:
        return mpmath.mpc(0)
    if k == 0:
        return mpmath.mpc(1)
    if 2 * k == chi.order:
        return mpmath.mpc(-1)
    if 4 * k == chi.order:
        return mpmath.mpc(0, 1)
    if 4 * k == 3 * chi.order:
        return mpmath.mpc(0, -1)
    return mpmath.expjpi(mpmath.mpf(2 * k) / chi.order)


def barnes_zeta(s, weights: Sequence, x, q0, tol: float = 1e-12) -> ComplexApprox:
    """Barnes-type multiple zeta with the ``[2]_q^r`` prefactor.

    ``[2]_q^r * sum (-q)^(n_1+...+n_r) / (n_1 w_1 + ... + n_r w_r + x)^s``,
    summed shell by shell in ``m = n_1 + ... + n_r``.  At ``s = -k`` this
    reproduces the Barnes-type q-Euler polynomial.
    """
    s = _parse_s(s)
    q = _check_q(q0)
    tol = _check_tol(tol)
    if len(weights) == 0:
        raise DomainError("at least one weight is required")
    if len(weights) > 3:
        raise DomainError("barnes_zeta supports at most 3 weights")
    ws = [_as_rational_or_float(w, "weight") for w in weights]
    if any(w <= 0 for w in ws):
        raise DomainError("weights must be positive")
    x = _as_rational_or_float(x, "x")
    k_int = _nonpositive_integer(s)
    if x < 0 or (x == 0 and k_int is None):
        raise DomainError("barnes_zeta needs x > 0, or x = 0 with s a nonpositive integer")
    r = len(ws)
    k = -s.real
    log_q = math.log(q)
    log_two = math.log1p(float(q))
    w_hi = float(max(ws))
    w_lo = float(min(ws))
    xf = float(x)

    def reach(m):
        # the extreme value of the linear form on shell m that maximises |base^-s|
        return m * (w_hi if k >= 0 else w_lo) + xf

    def log_bound(m):
        return r * log_two + math.log(comb(m + r - 1, r - 1)) + m * log_q + k * math.log(reach(m))

    def log_rho(m):
        lr = log_q + math.log((m + r) / (m + 1))
        if k > 0:
            lr += k * math.log(reach(m + 1) / reach(m))
        return lr

    start = 1 if x == 0 else 0
    N, tail, max_log2 = _truncation(log_bound, log_rho, start, tol)
    if x == 0:
        max_log2 = max(max_log2, r * math.log2(1 + float(q)))
    prec = _working_precision(max_log2, comb(N + r - 1, r), s, math.log(reach(N) + 1), tol)
    with mpmath.workprec(prec):
        qm = _mp(q)
        wm = [_mp(w) for w in ws]
        xm = _mp(x)
        total = mpmath.mpc(0)
        qn = mpmath.mpf(1)
        for m in range(N):
            shell = mpmath.mpc(0)
            for ns in compositions(m, r):
                base = xm + mpmath.fsum(n * w for n, w in zip(ns, wm))
                if base == 0:
                    shell += 1 if k_int == 0 else 0
                else:
                    shell += _power(base, s, k_int)
            total += shell * qn if m % 2 == 0 else -shell * qn
            qn *= qm
        value = +(total * (1 + qm) ** r)
    count = comb(N + r - 1, r)
    return ComplexApprox(mpmath.mpc(value), tail + tol * ROUNDING_SHARE, count, prec)
