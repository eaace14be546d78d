"""Declarative verification of the q-Euler identities over parameter grids.

A case names an identity, a grid of parameters and a comparison mode.
Exact cases compare elements of Q(q) structurally (no floating point),
numeric cases compare series evaluations against the exact core within a
tolerance, and p-adic cases check valuation thresholds of level sums.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Callable, Iterable, Mapping

from .analytic import barnes_zeta, l_q, zeta_q
from .core import (
    TWO_Q,
    XPolynomial,
    barnes_euler_polynomial,
    euler_number,
    euler_numbers,
    euler_polynomial,
    higher_order_euler_polynomial,
    q_one_limit,
    sums_of_products_expansion,
)
from .dirichlet import characters_mod, generalized_coefficients
from .field import ONE, Q, ZERO, QRationalFunction, q_bracket_rf, q_power, rf_eval
from .padic import (
    IntegrandPoly,
    PadicNumber,
    fermionic_integral_level,
    integral_equation_residual,
    multivariate_integral_level,
    padic_eval,
    padic_q,
)

DEFAULT_BUDGET = 50_000


class UnknownIdentity(KeyError):
    pass


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Identity:
    id: str
    mode: str
    keys: tuple
    default_grid: Mapping[str, list]
    check: Callable[[dict, bool], tuple]
    tolerance: float | None = None
    corrected_from_paper: bool = False
    description: str = ""


_REGISTRY: dict[str, Identity] = {}


def identity(id, mode, keys, grid, tolerance=None, corrected=False, description=""):
    def register(fn):
        _REGISTRY[id] = Identity(id, mode, tuple(keys), grid, fn, tolerance, corrected, description)
        return fn

    return register


def identity_ids() -> list[str]:
    return list(_REGISTRY)


def get_identity(id: str) -> Identity:
    try:
        return _REGISTRY[id]
    except KeyError:
        raise UnknownIdentity(id) from None


# -- exact helpers ---------------------------------------------------------------


def _exact(lhs: QRationalFunction, rhs: QRationalFunction, perturb: bool):
    if perturb:
        rhs = rhs + ONE
    diff = lhs - rhs
    return diff.is_zero(), diff


def _q_alternating_power_sum(n: int, k: int, sign_offset: int = 0) -> QRationalFunction:
    """``sum_{l<n} (-1)^(l+sign_offset) q^l l^k`` with ``0^0 = 1``."""
    acc = ZERO
    for l in range(n):
        term = q_power(l) * (l ** k)
        acc = acc - term if (l + sign_offset) % 2 else acc + term
    return acc


@identity(
    "RECURRENCE", "exact", ["n"], {"n": list(range(0, 21))},
    description="q*sum_{k<=n} C(n,k) E_k + E_n = [2]_q [n=0]",
)
def _check_recurrence(p, perturb):
    n = p["n"]
    e = euler_numbers(n)
    lhs = Q * sum((comb(n, k) * e[k] for k in range(n + 1)), ZERO) + e[n]
    rhs = TWO_Q if n == 0 else ZERO
    return _exact(lhs, rhs, perturb)


@identity(
    "EQ2.15", "exact", ["n"], {"n": list(range(0, 21))},
    description="E_n(x) built from numbers satisfies q*sum C(n,k) E_k(x) + E_n(x) = [2]_q x^n",
)
def _check_polynomial_expansion(p, perturb):
    n = p["n"]
    polys = [euler_polynomial(k) for k in range(n + 1)]
    lhs = XPolynomial()
    for k, e in enumerate(polys):
        lhs = lhs + e * (comb(n, k) * Q)
    lhs = lhs + polys[n]
    rhs = XPolynomial([ZERO] * n + [TWO_Q])
    if perturb:
        rhs = rhs + ONE
    diff = lhs - rhs
    return diff.is_zero(), diff


@identity(
    "THM2", "exact", ["n", "k"], {"n": list(range(1, 7)), "k": list(range(0, 11))},
    corrected=True,
    description="E_k - (-1)^n q^n E_k(n) = [2]_q sum_{l<n} (-1)^l q^l l^k",
)
def _check_thm2(p, perturb):
    n, k = p["n"], p["k"]
    ek = euler_number(k)
    ekn = euler_polynomial(k).at(n)
    lhs = ek - q_power(n) * ekn if n % 2 == 0 else ek + q_power(n) * ekn
    rhs = TWO_Q * _q_alternating_power_sum(n, k)
    return _exact(lhs, rhs, perturb)


@identity(
    "THM5", "exact", ["f", "n", "x0"],
    {"f": [1, 3, 5], "n": list(range(0, 13)), "x0": [Fraction(0), Fraction(1), Fraction(1, 2)]},
    description="E_n(x) = f^n [2]_q/[2]_{q^f} sum_a (-1)^a q^a E_{n,q^f}((a+x)/f)",
)
def _check_thm5(p, perturb):
    f, n, x0 = p["f"], p["n"], Fraction(p["x0"])
    poly = euler_polynomial(n)
    lhs = poly.at(x0)
    acc = ZERO
    for a in range(f):
        term = q_power(a) * poly.at((a + x0) / f).substitute_power(f)
        acc = acc - term if a % 2 else acc + term
    rhs = acc * TWO_Q / q_bracket_rf(2).substitute_power(f) * (f ** n)
    return _exact(lhs, rhs, perturb)


@identity(
    "THM6", "exact", ["n", "k"], {"n": [2, 4, 6, 8, 10], "k": list(range(0, 11))},
    description="[2]_q sum_{l<n} (-1)^(l-1) q^l l^k = q^n sum_{m<k} C(k,m) E_m n^(k-m) + (q^n - 1) E_k",
)
def _check_thm6(p, perturb):
    n, k = p["n"], p["k"]
    if n % 2:
        raise ValueError("THM6 needs even n")
    e = euler_numbers(k)
    lhs = TWO_Q * _q_alternating_power_sum(n, k, sign_offset=1)
    qn = q_power(n)
    rhs = qn * sum((comb(k, m) * e[m] * n ** (k - m) for m in range(k)), ZERO) + (qn - 1) * e[k]
    return _exact(lhs, rhs, perturb)


@identity(
    "SEC4.SUMPROD", "exact", ["n", "r"], {"n": list(range(0, 11)), "r": [1, 2, 3, 4]},
    description="higher-order E^(r)_n(x) by Cauchy product equals the multinomial sums of products",
)
def _check_sums_of_products(p, perturb):
    n, r = p["n"], p["r"]
    lhs = higher_order_euler_polynomial(n, r)
    rhs = sums_of_products_expansion(n, r)
    if perturb:
        rhs = rhs + ONE
    diff = lhs - rhs
    return diff.is_zero(), diff


def classical_euler_at_zero(n_max: int) -> list[Fraction]:
    """``E_n(0)`` from ``sum_{k<=n} C(n,k) E_k(0) + E_n(0) = 2 [n=0]`` over Q."""
    out: list[Fraction] = []
    for n in range(n_max + 1):
        if n == 0:
            out.append(Fraction(1))
        else:
            out.append(-sum(comb(n, k) * out[k] for k in range(n)) / 2)
    return out


@identity(
    "LIMIT", "exact", ["n"], {"n": list(range(0, 21))},
    description="E_{n,q} at q=1 equals the classical E_n(0)",
)
def _check_limit(p, perturb):
    n = p["n"]
    lhs = q_one_limit(n)
    rhs = classical_euler_at_zero(n)[n] + (1 if perturb else 0)
    return lhs == rhs, lhs - rhs


# -- numeric -----------------------------------------------------------------------


def _numeric(approx, exact_value, tol, perturb):
    err = approx.distance(exact_value + 1 if perturb else exact_value)
    return err <= tol, err


@identity(
    "THM1", "numeric", ["k", "x", "q"],
    {"k": list(range(0, 11)), "x": [Fraction(1, 2), Fraction(1), Fraction(2)],
     "q": [Fraction(1, 4), Fraction(1, 2)], "series_tol": [1e-12]},
    tolerance=1e-9,
    description="zeta_q(-k, x) = E_k(x)",
)
def _check_thm1(p, perturb, tol):
    k, x, q = p["k"], Fraction(p["x"]), Fraction(p["q"])
    approx = zeta_q(-k, x, q, p.get("series_tol", 1e-12))
    return _numeric(approx, euler_polynomial(k).evaluate(x, q), tol, perturb)


@identity(
    "THM3", "numeric", ["k", "weights", "x", "q"],
    {"k": list(range(0, 7)), "weights": [(1, 2)], "x": [Fraction(1)], "q": [Fraction(1, 2)],
     "series_tol": [1e-12]},
    tolerance=1e-8, corrected=True,
    description="zeta_{r,q}(w|-k, x) = E_k(w|x) with the [2]_q^r prefactor",
)
def _check_thm3(p, perturb, tol):
    k, w, x, q = p["k"], tuple(p["weights"]), Fraction(p["x"]), Fraction(p["q"])
    approx = barnes_zeta(-k, w, x, q, p.get("series_tol", 1e-12))
    exact = rf_eval(barnes_euler_polynomial(k, w, x), q)
    return _numeric(approx, exact, tol, perturb)


@identity(
    "THM4", "numeric", ["f", "k", "q"],
    {"f": [3, 5], "k": list(range(0, 9)), "q": [Fraction(1, 3)], "series_tol": [1e-12]},
    tolerance=1e-8,
    description="l_q(-k, chi) = E_{k,chi,q} for every character mod f",
)
def _check_thm4(p, perturb, tol):
    f, k, q = p["f"], p["k"], Fraction(p["q"])
    coeffs = generalized_coefficients(k, f)
    worst = 0.0
    for chi in characters_mod(f):
        approx = l_q(-k, chi, q, p.get("series_tol", 1e-12))
        _, err = _numeric(approx, coeffs.evaluate(chi, q), tol, perturb)
        worst = max(worst, err)
    return worst <= tol, worst


# -- p-adic --------------------------------------------------------------------------


def _q_for(p, params) -> PadicNumber:
    shift = params.get("q_shift", 1)
    return padic_q(1 + shift * p, p, params.get("precision", 20))


@identity(
    "WITT", "padic", ["p", "n", "x0", "N_max"],
    {"p": [3, 5, 7], "n": list(range(0, 9)), "x0": [Fraction(0)], "N_max": [5],
     "q_shift": [1], "final_min": [3]},
    corrected=True,
    description="v_p(I_N((x0+y)^n) - E_n(x0)) >= N at every level and >= final_min at N_max",
)
def _check_witt(p, perturb):
    prime, n, x0, n_max = p["p"], p["n"], Fraction(p["x0"]), p["N_max"]
    q = _q_for(prime, p)
    target = padic_eval(euler_polynomial(n).at(x0), q)
    if perturb:
        target = target + 1
    g = IntegrandPoly.shifted_power(x0, n)
    vals = [(fermionic_integral_level(g, q, N) - target).valuation() for N in range(1, n_max + 1)]
    ok = all(v >= N for N, v in enumerate(vals, start=1)) and vals[-1] >= p.get("final_min", 3)
    return ok, min(vals)


@identity(
    "INTEQ", "padic", ["p", "n", "g", "N"],
    {"p": [5], "q_shift": [1], "n": [1, 2, 3, 4], "g": [0, 1, 2], "N": [1, 2, 3, 4, 5]},
    corrected=True,
    description="q^n I(g_n) + (-1)^(n-1) I(g) = [2]_q sum_{l<n} (-1)^(n-1-l) q^l g(l) at level N",
)
def _check_integral_equation(p, perturb):
    prime, n, degree, N = p["p"], p["n"], p["g"], p["N"]
    q = _q_for(prime, p)
    g = IntegrandPoly.monomial(degree)
    residual = integral_equation_residual(g, n, q, N)
    if perturb:
        residual = residual + 1
    v = residual.valuation()
    if degree == 0:
        return residual.is_zero(), v
    return v >= N - 1, v


@identity(
    "SEC4.INTEGRAL", "padic", ["n", "weights", "x0", "p", "N"],
    {"n": [0, 1, 2, 3], "weights": [(1,), (1, 1), (1, 2)], "x0": [Fraction(0), Fraction(1)],
     "p": [5], "q_shift": [1], "N": [3]},
    description="level-N iterated fermionic integral approaches the Barnes-type E_n(a|x0)",
)
def _check_multivariate(p, perturb):
    prime, n, w, x0, N = p["p"], p["n"], tuple(p["weights"]), Fraction(p["x0"]), p["N"]
    q = _q_for(prime, p)
    target = padic_eval(barnes_euler_polynomial(n, w, x0), q)
    if perturb:
        target = target + 1
    v = (multivariate_integral_level(n, w, x0, q, N) - target).valuation()
    return v >= N - 1, v


# -- engine --------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCase:
    id: str
    grid: Mapping[str, list] = field(default_factory=dict)
    mode: str | None = None
    tolerance: float | None = None
    perturb: bool = False

    def __post_init__(self):
        ident = get_identity(self.id)
        merged = {key: list(values) for key, values in ident.default_grid.items()}
        for key, values in self.grid.items():
            if not isinstance(values, (list, tuple)):
                values = [values]
            if key == "weights":
                # a flat list is one weight vector
                if values and not isinstance(values[0], (list, tuple)):
                    values = [values]
                values = [tuple(w) for w in values]
            merged[key] = list(values)
        if any(len(v) == 0 for v in merged.values()):
            raise ValueError(f"{self.id}: every grid axis must be nonempty")
        object.__setattr__(self, "grid", merged)
        mode = self.mode or ident.mode
        if mode != ident.mode:
            raise ValueError(f"{self.id} runs in {ident.mode} mode, not {mode}")
        object.__setattr__(self, "mode", mode)
        tol = self.tolerance if self.tolerance is not None else ident.tolerance
        if mode == "numeric" and not (tol and tol > 0):
            raise ValueError(f"{self.id}: numeric mode needs a positive tolerance")
        object.__setattr__(self, "tolerance", tol)

    def points(self) -> Iterable[dict]:
        keys = list(self.grid)
        for combo in itertools.product(*(self.grid[k] for k in keys)):
            yield dict(zip(keys, combo))

    def cost(self) -> int:
        total = 1
        for values in self.grid.values():
            total *= len(values)
        return total


@dataclass
class VerificationReport:
    id: str
    mode: str
    params: dict
    status: str
    residual: Any
    time: float
    checked: int = 0
    counterexample: dict | None = None
    corrected_from_paper: bool = False

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "mode": self.mode,
            "params": _jsonable(self.params),
            "status": self.status,
            "residual": _jsonable(self.residual),
            "time": self.time,
            "checked": self.checked,
            "counterexample": _jsonable(self.counterexample),
            "corrected_from_paper": self.corrected_from_paper,
        }


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["id", "params", "status", "residual", "time"],
    "properties": {
        "id": {"type": "string"},
        "mode": {"enum": ["exact", "numeric", "padic"]},
        "params": {"type": "object"},
        "status": {"enum": ["pass", "fail"]},
        "residual": {"type": ["string", "number", "integer", "null"]},
        "time": {"type": "number", "minimum": 0},
        "checked": {"type": "integer", "minimum": 0},
        "counterexample": {"type": ["object", "null"]},
        "corrected_from_paper": {"type": "boolean"},
    },
}

SUITE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["status", "cases"],
    "properties": {
        "status": {"enum": ["pass", "fail"]},
        "cases": {"type": "array", "items": REPORT_SCHEMA},
    },
}


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (QRationalFunction, XPolynomial)):
        return str(value)
    return value


def verify(case: IdentityCase, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    ident = get_identity(case.id)
    if case.cost() > budget:
        raise BudgetExceeded(f"{case.id}: grid has {case.cost()} points, budget is {budget}")
    start = time.perf_counter()
    worst = None
    counterexample = None
    checked = 0
    for point in case.points():
        if case.mode == "numeric":
            ok, residual = ident.check(point, case.perturb, case.tolerance)
        else:
            ok, residual = ident.check(point, case.perturb)
        checked += 1
        worst = _worse(case.mode, worst, residual)
        if not ok and counterexample is None:
            counterexample = dict(point)
            counterexample["residual"] = _jsonable(residual)
    elapsed = time.perf_counter() - start
    if case.mode == "exact":
        worst = "0" if counterexample is None else counterexample["residual"]
    return VerificationReport(
        id=case.id,
        mode=case.mode,
        params={k: list(v) for k, v in case.grid.items()},
        status="pass" if counterexample is None else "fail",
        residual=worst,
        time=elapsed,
        checked=checked,
        counterexample=counterexample,
        corrected_from_paper=ident.corrected_from_paper,
    )


def _worse(mode, current, residual):
    if mode == "numeric":
        return residual if current is None else max(current, residual)
    if mode == "padic":
        return residual if current is None else min(current, residual)
    return None


def default_config() -> dict:
    return {"cases": [{"id": id} for id in _REGISTRY]}


def cases_from_config(config: Mapping | None) -> list[IdentityCase]:
    if config is None:
        config = default_config()
    out = []
    for spec in config.get("cases", []):
        spec = dict(spec)
        try:
            ident_id = spec.pop("id")
        except KeyError:
            raise ValueError("every case needs an 'id'") from None
        grid = {
            k: [_parse_value(v) for v in vs] if isinstance(vs, list) else _parse_value(vs)
            for k, vs in spec.pop("grid", {}).items()
        }
        out.append(IdentityCase(ident_id, grid, **spec))
    return out


def _parse_value(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (list, tuple)):
        return tuple(_parse_value(x) for x in v)
    return v


def run_all(config: Mapping | None = None, budget: int = DEFAULT_BUDGET) -> list[VerificationReport]:
    """Run every case of ``config`` in order (``None`` means the default suite)."""
    if config is not None:
        budget = config.get("budget", budget)
    return [verify(case, budget) for case in cases_from_config(config)]


def all_passed(reports: Iterable[VerificationReport]) -> bool:
    return all(r.passed for r in reports)


def reports_to_json(reports: list[VerificationReport]) -> str:
    doc = {
        "status": "pass" if all_passed(reports) else "fail",
        "cases": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=2)


def load_config(path) -> dict:
    with open(path) as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise ValueError("config must be a JSON object")
    return config
