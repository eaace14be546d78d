"""Command-line front end.

Usage:
    qeuler table numbers --n-max 5
    qeuler table numbers --n-max 3 --at-q 1
    qeuler --format json eval zeta --s -3 --x 1 --q 0.5
    qeuler eval lfun --s -2 --chi 3.nontrivial --q 0.25
    qeuler verify --all --out report.json
    qeuler verify --only THM5 --f 3
    qeuler padic witt --p 3 --q 4 --n 1 --N-max 5

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

import mpmath

from . import analytic, core, dirichlet, identities, padic
from .field import rf_eval

DEFAULT_CAP = 64

OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "array",
    "items": {
        "type": "object",
        "required": ["kind", "params", "value"],
        "properties": {
            "kind": {"type": "string"},
            "params": {"type": "object"},
            "value": {"type": ["string", "object", "integer", "null"]},
            "error_bound": {"type": ["number", "null"]},
            "provenance": {"type": ["string", "null"]},
        },
    },
}


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    kind: str
    params: dict
    value: object
    error_bound: float | None = None
    provenance: str | None = None


# -- helpers -------------------------------------------------------------------


def _rational(text: str, name: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--{name} expects a rational such as 3, -1/2 or 0.25, got {text!r}") from None


def _int_list(text: str, name: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:] and part[0] != "-":
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError(f"--{name} expects integers or ranges like 0-5, got {part!r}") from None
    return out


def _emit(records: list[OutputRecord], args) -> str:
    rows = [asdict(r) for r in records]
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["kind", "params", "value", "error_bound", "provenance"])
        for r in rows:
            writer.writerow([
                r["kind"],
                ";".join(f"{k}={v}" for k, v in r["params"].items()),
                json.dumps(r["value"]) if isinstance(r["value"], dict) else r["value"],
                "" if r["error_bound"] is None else repr(r["error_bound"]),
                r["provenance"] or "",
            ])
        text = buf.getvalue()
    _write(text, args)
    return text


def _write(text: str, args) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _decimal(value: mpmath.mpc, digits: int = 20) -> str:
    re = mpmath.nstr(value.real, digits)
    if value.imag == 0:
        return re
    im = mpmath.nstr(abs(value.imag), digits)
    return f"{re}{'-' if value.imag < 0 else '+'}{im}j"


# -- table -----------------------------------------------------------------------


def cmd_table(args) -> int:
    if args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    if args.n_max > args.cap:
        raise UsageError(
            f"--n-max {args.n_max} exceeds the cap of {args.cap}; pass --cap to raise it "
            "(exact entries grow quickly in size)"
        )
    at_q = _rational(args.at_q, "at-q") if args.at_q is not None else None
    params = {"at_q": str(at_q)} if at_q is not None else {}
    records = []

    def exact_or_at_q(value):
        return str(value) if at_q is None else str(rf_eval(value, at_q))

    if args.kind == "numbers":
        for n, e in enumerate(core.euler_numbers(args.n_max)):
            records.append(OutputRecord("euler_number", {"n": n, **params}, exact_or_at_q(e)))
    elif args.kind == "polynomials":
        for n in range(args.n_max + 1):
            poly = core.euler_polynomial(n)
            if at_q is not None:
                poly = core.XPolynomial(rf_eval(c, at_q) for c in poly.coeffs)
            records.append(OutputRecord("euler_polynomial", {"n": n, **params}, str(poly)))
    elif args.kind == "higher-order":
        values = core.higher_order_euler_numbers(args.n_max, args.order)
        for n, e in enumerate(values):
            records.append(OutputRecord("higher_order_euler", {"n": n, "r": args.order, **params}, exact_or_at_q(e)))
    elif args.kind == "generalized":
        if not args.chi:
            raise UsageError("table generalized needs --chi f.index")
        chi = _character(args.chi)
        for n in range(args.n_max + 1):
            g = dirichlet.generalized_coefficients(n, chi.modulus)
            p = {"n": n, "chi": chi.label, **params}
            if at_q is not None:
                value = complex(g.evaluate(chi, at_q))
                text = repr(value.real) if value.imag == 0 else repr(value)
                records.append(OutputRecord("generalized_euler", p, text))
            elif chi.is_real():
                records.append(OutputRecord("generalized_euler", p, str(g.contract_exact(chi))))
            else:
                comps = {f"zeta_{chi.order}^{k}": str(v) for k, v in g.components(chi).items()}
                records.append(OutputRecord("generalized_euler", p, comps))
    _emit(records, args)
    return 0


def _character(label: str) -> dirichlet.DirichletCharacter:
    try:
        return dirichlet.character_from_label(label)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- eval --------------------------------------------------------------------------


def cmd_eval(args) -> int:
    q0 = _rational(args.q, "q")
    params = {"s": args.s, "q": args.q, "tol": args.tol}
    try:
        if args.kind == "zeta":
            x = _rational(args.x, "x")
            params["x"] = args.x
            result = analytic.zeta_q(args.s, x, q0, args.tol)
        elif args.kind == "lfun":
            if not args.chi:
                raise UsageError("eval lfun needs --chi f.index")
            chi = _character(args.chi)
            params["chi"] = chi.label
            result = analytic.l_q(args.s, chi, q0, args.tol)
        else:
            if not args.weights:
                raise UsageError("eval barnes needs --weights w1,w2,...")
            weights = [_rational(w, "weights") for w in args.weights.split(",")]
            x = _rational(args.x, "x")
            params.update(x=args.x, weights=args.weights)
            result = analytic.barnes_zeta(args.s, weights, x, q0, args.tol)
    except analytic.DomainError as exc:
        raise UsageError(f"domain error: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"bad argument: {exc}") from None
    record = OutputRecord(
        args.kind,
        params,
        _decimal(result.value),
        result.abs_error_bound,
        f"{result.provenance}; {result.terms} terms at {result.precision} bits",
    )
    _emit([record], args)
    return 0


# -- verify --------------------------------------------------------------------------


_GRID_FLAGS = ("f", "n", "k", "r", "p")


def cmd_verify(args) -> int:
    try:
        if args.config:
            config = identities.load_config(args.config)
        else:
            ids = args.only or identities.identity_ids()
            unknown = [i for i in ids if i not in identities.identity_ids()]
            if unknown:
                raise UsageError(
                    f"unknown identity {', '.join(unknown)}; choose from {', '.join(identities.identity_ids())}"
                )
            grid = {}
            for key in _GRID_FLAGS:
                value = getattr(args, f"grid_{key}")
                if value is not None:
                    grid[key] = _int_list(value, key)
            cases = []
            for ident_id in ids:
                keys = identities.get_identity(ident_id).default_grid
                cases.append({
                    "id": ident_id,
                    "grid": {k: v for k, v in grid.items() if k in keys},
                    "perturb": args.perturb,
                })
            config = {"cases": cases}
        reports = identities.run_all(config)
    except UsageError:
        raise
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except (identities.UnknownIdentity, identities.BudgetExceeded, ValueError, TypeError) as exc:
        raise UsageError(f"malformed config: {exc}") from None

    doc = identities.reports_to_json(reports)
    if args.format == "json":
        _write(doc + "\n", args)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "status", "residual", "checked", "time", "corrected_from_paper"])
        for r in reports:
            writer.writerow([r.id, r.status, r.to_dict()["residual"], r.checked, f"{r.time:.3f}", r.corrected_from_paper])
        _write(buf.getvalue(), args)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(doc + "\n")
    return 0 if identities.all_passed(reports) else 1


# -- padic -----------------------------------------------------------------------------


def cmd_padic(args) -> int:
    p = args.p
    if p == 2:
        raise UsageError("p = 2 is not supported: with q = 1 mod 2, [2]_q = 1 + q is not a unit")
    if p < 3 or not padic._is_prime(p):
        raise UsageError(f"--p must be an odd prime, got {p}")
    q_int = args.q if args.q is not None else 1 + p
    precision = args.precision
    try:
        q = padic.padic_q(q_int, p, precision)
        records = []
        if args.sub == "witt":
            x0 = _rational(args.x0, "x0")
            vals = padic.witt_check(args.n, x0, q, args.N_max)
            for N, v in enumerate(vals, start=1):
                records.append(_valuation_record("witt", {"p": p, "q": q_int, "n": args.n, "x0": str(x0), "N": N}, v, precision))
        else:
            g = padic.IntegrandPoly.monomial(args.g)
            for N in range(1, args.N_max + 1):
                residual = padic.integral_equation_residual(g, args.n, q, N)
                records.append(_valuation_record(
                    "inteq", {"p": p, "q": q_int, "n": args.n, "g": f"x^{args.g}", "N": N},
                    residual.valuation(), precision, residual.is_zero(),
                ))
    except (ValueError, padic.PrecisionError) as exc:
        raise UsageError(str(exc)) from None
    _emit(records, args)
    return 0


def _valuation_record(kind, params, v, precision, exact=None):
    if exact is None:
        exact = v >= precision
    return OutputRecord(kind, params, "exact" if exact else str(v), None, f"working precision {precision} digits")


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qeuler", description="q-Euler numbers, zeta functions and p-adic integrals")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    parser.add_argument("--precision", type=int, default=padic.DEFAULT_PRECISION, metavar="M",
                        help="p-adic working precision in digits (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser("table", help="exact tables of q-Euler quantities")
    table.add_argument("kind", choices=["numbers", "polynomials", "higher-order", "generalized"])
    table.add_argument("--n-max", type=int, default=5)
    table.add_argument("--cap", type=int, default=DEFAULT_CAP)
    table.add_argument("--at-q", help="evaluate at a rational q instead of printing Q(q) elements")
    table.add_argument("--order", type=int, default=2, help="order r for higher-order numbers")
    table.add_argument("--chi", help="character label f.index for generalized numbers")
    table.set_defaults(func=cmd_table)

    ev = sub.add_parser("eval", help="evaluate zeta_q, l_q or the Barnes zeta function")
    ev.add_argument("kind", choices=["zeta", "lfun", "barnes"])
    ev.add_argument("--s", required=True, help="complex s, e.g. -3 or 2+1j")
    ev.add_argument("--x", default="1")
    ev.add_argument("--q", required=True, help="0 < q < 1, decimal or rational")
    ev.add_argument("--chi", help="character label f.index (lfun)")
    ev.add_argument("--weights", help="comma-separated positive weights (barnes)")
    ev.add_argument("--tol", type=float, default=1e-12)
    ev.set_defaults(func=cmd_eval)

    ver = sub.add_parser("verify", help="run the identity suite")
    ver.add_argument("--all", action="store_true", help="run every identity (the default)")
    ver.add_argument("--only", action="append", metavar="ID")
    ver.add_argument("--config", metavar="PATH", help="JSON suite configuration")
    ver.add_argument("--report", metavar="PATH", help="also write the JSON report to PATH")
    ver.add_argument("--perturb", action="store_true", help="perturb every identity (engine self-test)")
    for key in _GRID_FLAGS:
        ver.add_argument(f"--{key}", dest=f"grid_{key}", metavar="LIST", help=f"grid values for {key}, e.g. 1,3 or 0-5")
    ver.set_defaults(func=cmd_verify)

    pad = sub.add_parser("padic", help="finite-level fermionic p-adic integrals")
    pad.add_argument("sub", choices=["witt", "inteq"])
    pad.add_argument("--p", type=int, required=True)
    pad.add_argument("--q", type=int, help="integer q with q = 1 mod p (default 1 + p)")
    pad.add_argument("--n", type=int, default=1)
    pad.add_argument("--x0", default="0")
    pad.add_argument("--g", type=int, default=1, help="integrand x^g for inteq")
    pad.add_argument("--N-max", dest="N_max", type=int, default=5)
    pad.set_defaults(func=cmd_padic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qeuler: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
