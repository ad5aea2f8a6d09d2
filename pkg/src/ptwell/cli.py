"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or model error,
3 numeric failure, 4 non-constructible request (metric past the critical
coupling or at an exceptional point).
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from .errors import (
    DegeneracyError,
    DomainError,
    NonConstructibleError,
    NumericFailure,
    PTSymmetryBrokenError,
)
from .golden import CHECKS, run_checks
from .metric import (
    biorthogonalize,
    build_metric,
    completeness_defect,
    verify_pseudo_hermiticity,
    verify_quasi_hermiticity,
)
from .model import WellModel, parse_rational
from .spectral import (
    DEFAULT_TOL,
    TABLE_COLUMNS,
    critical_row,
    critical_table_csv,
    spectrum,
    sweep,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC, EXIT_NONCONSTRUCTIBLE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}") from exc


def _model(args, N: int, need_coupling: bool) -> tuple[WellModel, float | None, float | None]:
    """Build the model; returns ``(model, Z, xi)`` with both couplings filled in when given."""
    ell = [str(parse_rational(t)) for t in args.ell.split(",")] if args.ell else []
    q = len(ell) if args.q is None else args.q
    if q != len(ell):
        raise UsageError(f"--q {q} needs {q} breakpoint(s) in --ell, got {len(ell)}")
    if N < 2:
        raise UsageError(f"--N must be >= 2, got {N}")
    Zarg, xi = getattr(args, "Z", None), getattr(args, "xi", None)
    Zs = _floats(Zarg) if Zarg is not None else None
    if Zs is not None and len(Zs) not in (1, q + 1):
        raise UsageError(f"--Z takes one value or {q + 1} region strengths")
    desc = {"N": N, "q": q, "ell": ell}
    if Zs is not None and len(Zs) == q + 1:
        desc["Z"] = Zs
    model, Z = WellModel.from_descriptor(desc)
    if Zs is not None and len(Zs) == 1:
        Z = Zs[0]
    if need_coupling and Z is None and xi is None:
        raise UsageError("one of --Z or --xi is required")
    if Z is not None:
        xi = model.xi(Z)
    elif xi is not None:
        Z = model.Z(xi)
    return model, Z, xi


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_spectrum(args) -> int:
    model, Z, xi = _model(args, args.N, True)
    sp = spectrum(model, xi)
    _emit(sp.to_csv() if args.format == "csv" else _json(sp.to_dict()), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.steps is None or args.steps < 1:
        raise UsageError("--steps must be a positive integer")
    if args.xi_from is None or args.xi_to is None or not args.xi_to > args.xi_from:
        raise UsageError("need --xi-from < --xi-to")
    model, _, _ = _model(args, args.N, False)
    table = sweep(model, np.linspace(args.xi_from, args.xi_to, args.steps + 1))
    if args.format == "csv":
        text = table.to_csv()
    else:
        keys = ["xi", "Z", "track", "re_F", "im_F", "re_E", "im_E", "is_real"]
        text = _json({"model": model.descriptor(), "rows": [dict(zip(keys, r)) for r in table.rows()]})
    _emit(text, args.out)
    return EXIT_OK


def cmd_critical(args) -> int:
    Ns = _ints(args.N_list) if args.N_list else ([args.N] if args.N is not None else None)
    if not Ns:
        raise UsageError("--N or --N-list is required")
    rows = []
    for N in Ns:
        model, _, _ = _model(args, N, False)
        rows.append(critical_row(model, args.tol))
    if args.format == "csv":
        text = critical_table_csv(rows)
    else:
        text = _json({"model": {"q": model.q, "ell": [str(b) for b in model.ell]},
                      "rows": [dict(zip(TABLE_COLUMNS, r)) for r in rows]})
    _emit(text, args.out)
    return EXIT_OK


def cmd_metric(args) -> int:
    model, Z, xi = _model(args, args.N, True)
    weights = _floats(args.theta) if args.theta else None
    basis = biorthogonalize(model, xi)
    theta = build_metric(basis, weights)
    report = {
        "model": model.descriptor(Z),
        "xi": xi,
        "Z": Z,
        **theta.to_dict(),
        "quasi_hermiticity_residual": verify_quasi_hermiticity(basis.H, theta),
        "pseudo_hermiticity_residual": verify_pseudo_hermiticity(basis.H),
        "biorthogonality_defect": basis.biorthogonality_defect(),
        "completeness_defect": completeness_defect(basis),
        "positive_definite": theta.is_positive_definite(),
    }
    _emit(_json(report), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    perturb = frozenset(args.perturb or ())
    unknown = perturb - {c.name for c in CHECKS}
    if unknown:
        raise UsageError(f"unknown check(s) to perturb: {sorted(unknown)}")
    results = run_checks(perturb)
    failed = [r for r in results if not r.passed]
    if args.json:
        text = _json({
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            "passed": len(results) - len(failed),
            "failed": [r.name for r in failed],
        })
    else:
        buf = io.StringIO()
        for r in results:
            buf.write(r.line() + "\n")
        buf.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
        for r in failed:
            buf.write(f"failed: {r.name}\n")
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_VERIFY if failed else EXIT_OK


def _add_model_args(p, coupling=True, single_N=True):
    if single_N:
        p.add_argument("--N", type=int, required=True, help="number of lattice subintervals")
    p.add_argument("--q", type=int, default=None, help="number of breakpoints (default: from --ell)")
    p.add_argument("--ell", default=None, help="comma-separated rational breakpoints, e.g. 3/8")
    if coupling:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--Z", default=None, help="physical coupling (or q+1 region strengths)")
        g.add_argument("--xi", type=float, default=None, help="scaled coupling Z h^2")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="critical-point bracket width in xi")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None, help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptwell", description="Discrete PT-symmetric square well.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues at one coupling")
    _add_model_args(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="eigenvalue tracks over a coupling grid")
    _add_model_args(p, coupling=False)
    p.add_argument("--xi-from", type=float, default=None)
    p.add_argument("--xi-to", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(func=cmd_sweep, format="csv")

    p = sub.add_parser("critical", help="critical couplings")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--N-list", default=None, help="comma-separated N values")
    _add_model_args(p, coupling=False, single_N=False)
    p.set_defaults(func=cmd_critical, format="csv")

    p = sub.add_parser("metric", help="quasi-Hermiticity metric")
    _add_model_args(p)
    p.add_argument("--theta", default=None, help="comma-separated positive weights")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("verify", help="run the reference-number checks")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--perturb", action="append", metavar="CHECK",
                   help="negative control: run CHECK on a deliberately wrong model")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "tol", DEFAULT_TOL) <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConstructibleError, DegeneracyError) as exc:
        print(f"not constructible: {exc}", file=sys.stderr)
        return EXIT_NONCONSTRUCTIBLE
    except (NumericFailure, PTSymmetryBrokenError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
