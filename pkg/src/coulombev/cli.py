"""Command-line front end: evaluate catalog entries and brackets, sweep
tables, run the verification suites, drive the dimensional-regularization
solver, and reproduce the CX1 energy-shift example.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numeric
convergence failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .exactnum import DivergenceError, DomainError, EpsSeries
from .coulomb import (
    CatalogError,
    OperatorSpec,
    PhysScale,
    QuantumState,
    RequiresDimregError,
    Value,
    catalog_tags,
    cx1_energy_shift,
    expectation_closed,
)
from . import brackets as br
from . import dimreg
from .suites import SUITES, run_suites


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "), ensure_ascii=True)


def _units_str(mr, za, pi) -> str:
    bits = []
    if mr:
        bits.append("m_r^%d" % mr if mr != 1 else "m_r")
    if za:
        bits.append("(Zalpha)^%d" % za if za != 1 else "Zalpha")
    if pi:
        bits.append("pi^%d" % pi if pi != 1 else "pi")
    return " ".join(bits) if bits else "1"


def _value_payload(v, phys, n):
    if isinstance(v, Value):
        out = {
            "symbolic": v.sym.as_dict(),
            "dimension": v.mr_pow,
            "units": _units_str(v.mr_pow, v.za_pow, v.pi_pow),
        }
        if phys is not None:
            out["numeric"] = v.numeric(phys, n)
        return out
    if isinstance(v, dimreg.DivergentValue):
        out = {
            "symbolic": v.series.as_dict(),
            "dimension": v.total_mr_pow,
            "units": "pi phibar^2 mubar^2eps " + _units_str(v.mr_pow, v.za_pow, 0),
        }
        return out
    if isinstance(v, EpsSeries):
        return {"symbolic": v.as_dict(), "dimension": None, "units": "eps series"}
    if isinstance(v, br.BracketReduction):
        return {
            "symbolic": {
                "formula": v.formula,
                "finite_extra": v.finite_extra.sym.as_dict(),
                "coefficient": str(v.coefficient),
            },
            "dimension": 5,
            "units": "(m_r Zalpha)^5/pi",
        }
    raise TypeError(type(v))


def _render(payload, fmt):
    if fmt == "json":
        print(_json_dump(payload))
    elif fmt == "pretty":
        sym = payload.get("symbolic")
        print("value: %s" % sym)
        if "numeric" in payload:
            print("numeric: %.12g" % payload["numeric"])
        print("units: %s" % payload.get("units"))
    else:
        raise DomainError("format %r not valid here" % fmt)


def _phys_from(args):
    if any(x is not None for x in (args.mr, args.zalpha, args.mu, args.kappa)):
        return PhysScale(
            mr=args.mr if args.mr is not None else 1.0,
            zalpha=args.zalpha if args.zalpha is not None else 1.0,
            mu=args.mu if args.mu is not None else 1.0,
            kappa=args.kappa if args.kappa is not None else 1.0,
        )
    return None


def cmd_eval(args) -> int:
    st = QuantumState(args.n, args.l)
    phys = _phys_from(args)
    if args.op:
        try:
            spec = OperatorSpec(args.op, kappa="kappa")
            v = expectation_closed(spec, st)
        except RequiresDimregError:
            v = dimreg.divergent_expectation(args.op, st.n, st.l)
        except CatalogError:
            if args.op in dimreg.divergent_tags():
                v = dimreg.divergent_expectation(args.op, st.n, st.l)
            else:
                raise
    elif args.bracket:
        v = br.bracket(args.bracket, st)
    else:
        print("eval needs --op or --bracket", file=sys.stderr)
        return 1
    payload = {"command": "eval", "inputs": {"n": st.n, "l": st.l, "op": args.op or args.bracket}}
    payload.update(_value_payload(v, phys, st.n))
    _render(payload, args.format if args.format != "csv" else "json")
    return 0


def cmd_table(args) -> int:
    ops = args.ops.split(",")
    lo, hi = (int(x) for x in args.n_range.split(":"))
    rows = []
    for n in range(lo, hi + 1):
        for l in range(n):
            row = {"n": n, "l": l}
            for op in ops:
                try:
                    row[op] = str(expectation_closed(op, QuantumState(n, l)).sym)
                except (RequiresDimregError, CatalogError):
                    row[op] = ""
            rows.append(row)
    if args.format == "csv":
        cols = ["n", "l"] + ops
        print(",".join(cols))
        for row in rows:
            print(",".join('"%s"' % row[c] if ("," in str(row[c])) else str(row[c]) for c in cols))
    else:
        print(_json_dump({"command": "table", "rows": rows}))
    return 0


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(names)
    failed = 0
    for res in results:
        status = "pass" if res.ok else "FAIL"
        print("suite %-16s %s  (%d passed, %d failed)" % (res.name, status, res.passed, res.failed))
        for f in res.failures:
            print("    failing: %s" % f)
        failed += res.failed
    return 0 if failed == 0 else 2


def cmd_dimreg(args) -> int:
    st = QuantumState(args.n, args.l)
    mu = args.mu if args.mu is not None else 1.0
    try:
        eig = dimreg.eigenvalue_shoot(st, args.eps, mu=mu)
    except dimreg.ShootingError as exc:
        print("shooting failed: %s" % exc, file=sys.stderr)
        return 3
    es = dimreg.energy_series_numeric(st, args.eps, mu=mu)
    payload = {
        "command": "dimreg",
        "inputs": {"n": st.n, "l": st.l, "eps": args.eps, "mu": mu},
        "nbar": eig.nbar,
        "gammabar": eig.gammabar,
        "Ebar_shoot": eig.ebar,
        "Ebar_series": es,
        "difference": eig.ebar - es,
    }
    if args.format == "json":
        print(_json_dump(payload))
    else:
        print("nbar      = %.12f" % eig.nbar)
        print("gammabar  = %.12f" % eig.gammabar)
        print("Ebar (shooting)  = %.12f" % eig.ebar)
        print("Ebar (expansion) = %.12f" % es)
        print("difference       = %.3e  (O(eps^2))" % (eig.ebar - es))
    return 0


def cmd_demo_cx1(args) -> int:
    st = QuantumState(args.n, args.l)
    c1 = Fraction(args.c1)
    c2 = Fraction(args.c2)
    coef, val = cx1_energy_shift(st, c1, c2, Fraction(args.m1), Fraction(args.m2))
    print("Delta E_CX1 = -4 m_r (c1/m1^4 + c2/m2^4) <(V')^2>  at (n,l) = (%d,%d)" % (st.n, st.l))
    print("dimensionless prefactor -4[c1 (mr/m1)^4 + c2 (mr/m2)^4] = %s" % coef)
    if isinstance(val, dimreg.DivergentValue):
        print("l = 0 branch (Laurent series in eps, standing prefactor pi phibar^2 mubar^2eps):")
        print("  %r" % val)
    else:
        print("l > 0 branch (exact):")
        print("  %r" % val)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coulombev",
        description="Exact Coulomb bound-state expectation values in 3 and 3-2eps dimensions",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate one catalog entry or bracket")
    pe.add_argument("--n", type=int, required=True)
    pe.add_argument("--l", type=int, default=0)
    pe.add_argument("--op", help="operator tag (see `tags`)")
    pe.add_argument("--bracket", help="momentum-space bracket tag")
    pe.add_argument("--mr", type=float)
    pe.add_argument("--zalpha", type=float)
    pe.add_argument("--mu", type=float)
    pe.add_argument("--kappa", type=float)
    pe.add_argument("--format", choices=("json", "pretty"), default="pretty")
    pe.set_defaults(func=cmd_eval)

    pt = sub.add_parser("table", help="sweep catalog entries over an (n,l) grid")
    pt.add_argument("--ops", required=True, help="comma-separated operator tags")
    pt.add_argument("--n-range", default="1:4", help="lo:hi inclusive")
    pt.add_argument("--format", choices=("json", "csv"), default="csv")
    pt.set_defaults(func=cmd_table)

    pv = sub.add_parser("verify", help="run named verification suites")
    pv.add_argument("--suite", default="all")
    pv.set_defaults(func=cmd_verify)

    pd = sub.add_parser("dimreg", help="shoot the D-dimensional eigenvalue")
    pd.add_argument("--n", type=int, required=True)
    pd.add_argument("--l", type=int, default=0)
    pd.add_argument("--eps", type=float, required=True)
    pd.add_argument("--mu", type=float)
    pd.add_argument("--format", choices=("json", "pretty"), default="pretty")
    pd.set_defaults(func=cmd_dimreg)

    pc = sub.add_parser("demo-cx1", help="the CX1 energy-shift example")
    pc.add_argument("--n", type=int, default=1)
    pc.add_argument("--l", type=int, default=0)
    pc.add_argument("--c1", default="5/128")
    pc.add_argument("--c2", default="5/128")
    pc.add_argument("--m1", default="2")
    pc.add_argument("--m2", default="2")
    pc.set_defaults(func=cmd_demo_cx1)

    pl = sub.add_parser("tags", help="list operator, divergent and bracket tags")
    pl.set_defaults(func=cmd_tags)
    return ap


def cmd_tags(args) -> int:
    print("finite catalog:")
    print("  " + ", ".join(catalog_tags()))
    print("divergent / dimensionally regularized:")
    print("  " + ", ".join(dimreg.divergent_tags()))
    print("momentum-space brackets:")
    print("  " + ", ".join(br.bracket_tags()))
    print("verify suites:")
    print("  " + ", ".join(sorted(SUITES)) + ", all")
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (DomainError, CatalogError, DivergenceError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
