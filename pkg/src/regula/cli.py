"""Command-line front end.

Exit codes: classify/certify return the verdict code (0, 10, 20, 30); 2 is a
usage error; check returns 0 (valid), 1 (invalid) or 3 (unreadable file);
gallery returns 1 when the construction is refused.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import gallery, oracle, serialization
from .bootstrap import PlanningError, plan, validate
from .classifier import ConditionReport, Verdict, VerdictTag, classify
from .exponents import INF, SystemParams, ext, fmt

RECORD_SCHEMA = "regula-record/1"
SWEEP_SCHEMA = "regula-sweep/1"
PARAM_NAMES = ("r", "s", "p", "q", "gamma", "sigma", "theta")
AXIS_NAMES = ("p", "q", "r", "s")
DEFAULTS = {"r": "0", "s": "0", "gamma": "1", "sigma": "1", "theta": "inf"}

EXIT_INVALID = 1
EXIT_IO = 3


class UsageError(Exception):
    pass


def rational_arg(text: str):
    try:
        return ext(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"malformed rational {text!r}") from None


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", required=True, help="h01, l1 or l1delta")
    parser.add_argument("--n", type=int, required=True, help="dimension")
    for name in PARAM_NAMES:
        parser.add_argument(f"--{name}", type=rational_arg, default=None,
                            help=f"exponent {name} (default {DEFAULTS.get(name, 'required')})")


def _params_from(args) -> SystemParams:
    values = {}
    for name in PARAM_NAMES:
        value = getattr(args, name, None)
        if value is None:
            if name not in DEFAULTS:
                raise UsageError(f"--{name} is required")
            value = ext(DEFAULTS[name])
        values[name] = value
    try:
        return SystemParams(args.n, args.kind, **values)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def params_record(params: SystemParams) -> dict:
    return serialization.params_to_dict(params)


def report_record(report: ConditionReport) -> dict:
    idx = report.indices
    return {
        "p_c": fmt(report.p_c),
        "p_c_conj": fmt(report.p_c_conj),
        "alpha": None if idx.alpha is None else fmt(idx.alpha),
        "beta": None if idx.beta is None else fmt(idx.beta),
        "denom": fmt(idx.denom),
        "checks": [
            {"name": c.name, "lhs": fmt(c.lhs), "relation": c.relation.value, "rhs": fmt(c.rhs),
             "satisfied": c.satisfied, "redundant": c.redundant}
            for c in report.checks
        ],
        "redundancy_notes": list(report.redundancy_notes),
        "notes": list(report.notes),
    }


def output_record(params: SystemParams, verdict: Verdict, report: ConditionReport,
                  elapsed: float, certificate: str | None = None) -> dict:
    return {
        "schema": RECORD_SCHEMA,
        "inputs": params_record(params),
        "verdict": str(verdict),
        "code": verdict.code,
        "report": report_record(report),
        "certificate": certificate,
        "timing_ms": round(elapsed * 1000, 3),
    }


def _emit(record: dict) -> None:
    print(json.dumps(record, indent=1, sort_keys=True))


def cmd_classify(args) -> int:
    start = time.perf_counter()
    params = _params_from(args)
    verdict, report = classify(params)
    _emit(output_record(params, verdict, report, time.perf_counter() - start))
    return verdict.code


def cmd_certify(args) -> int:
    start = time.perf_counter()
    params = _params_from(args)
    verdict, report = classify(params)
    target = None
    if verdict.tag is VerdictTag.REGULARITY_CERTIFIED:
        try:
            cert = plan(params)
        except PlanningError as exc:
            print(f"planning failed: {exc}", file=sys.stderr)
            return VerdictTag.CRITICAL_BOUNDARY.code
        text = serialization.dumps(cert)
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
        target = args.out
    _emit(output_record(params, verdict, report, time.perf_counter() - start, target))
    return verdict.code


def cmd_check(args) -> int:
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read {args.certificate}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cert = serialization.loads(text)
    except serialization.CertificateFormatError as exc:
        print(f"invalid: {exc}")
        return EXIT_INVALID
    report = validate(cert, cert.params, strict=args.strict)
    print(report)
    return 0 if report.ok else EXIT_INVALID


def _parse_query(text: str):
    space, _, k = text.partition(":")
    if space not in gallery.SPACES:
        raise UsageError(f"unknown space {space!r} in query {text!r}")
    try:
        return space, (ext(k) if k else None)
    except ValueError:
        raise UsageError(f"malformed rational in query {text!r}") from None


def cmd_gallery(args) -> int:
    if args.sharp:
        try:
            m, k = (ext(x) for x in args.sharp)
        except ValueError:
            raise UsageError(f"malformed rational in --sharp {' '.join(args.sharp)}") from None
        try:
            theta, u, phi, rep = gallery.scalar_sharp_example(args.n, m, k)
        except ValueError as exc:
            print(f"refused: {exc}", file=sys.stderr)
            return 1
        _emit({
            "schema": "regula-gallery/1", "n": args.n, "m": fmt(m), "k": fmt(k),
            "theta": fmt(theta),
            "U": {"coefficient": u.coefficient, "power": u.power, "offset": u.offset},
            "phi": {"coefficient": phi.coefficient, "power": phi.power, "offset": phi.offset},
            "phi_in_Lm": rep.phi_in_Lm, "u_in_Lk": rep.u_in_Lk,
            "phi_norm": rep.phi_norm, "u_norm": rep.u_norm,
        })
        return 0
    params = _params_from(args)
    queries = [_parse_query(q) for q in args.query] or [("H01", None), ("Linf", None)]
    try:
        pair = gallery.build_pair(params)
    except gallery.ConstructionError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    rep = gallery.membership(pair, queries, crosscheck=not args.no_quadrature)
    _emit({
        "schema": "regula-gallery/1",
        "inputs": params_record(params),
        "alpha": fmt(pair.alpha), "beta": fmt(pair.beta),
        "coefficients": list(pair.coefficients),
        "rhs_constants": list(pair.rhs_constants),
        "residual": gallery.residual(pair, [1e-3, 0.1, 0.5, 0.999]),
        "membership": [
            {"function": e.function, "space": e.space, "k": None if e.k is None else fmt(e.k),
             "analytic": e.analytic, "quadrature": e.quadrature, "threshold": e.threshold,
             "value": e.value}
            for e in rep.entries
        ],
        "consistent": rep.consistent,
    })
    return 0


def parse_axis(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"axis {text!r} must be name:start:stop:count")
    name, start, stop, count = parts
    if name not in AXIS_NAMES:
        raise UsageError(f"axis name must be one of {', '.join(AXIS_NAMES)}")
    try:
        lo, hi, num = ext(start), ext(stop), int(count)
    except ValueError:
        raise UsageError(f"malformed axis {text!r}") from None
    if lo is INF or hi is INF:
        raise UsageError("axis bounds must be finite")
    if num < 2:
        raise UsageError("axis count must be >= 2")
    return name, [lo + (hi - lo) * Fraction(i, num - 1) for i in range(num)]


def _sweep_cell(job):
    n, kind, values = job
    try:
        params = SystemParams(n, kind, **values)
    except ValueError:
        return VerdictTag.OUTSIDE_SCOPE.code
    return classify(params)[0].code


def sweep_rows(args) -> tuple[list[str], list[list[str]]]:
    axes = [parse_axis(a) for a in args.axis]
    names = [name for name, _ in axes]
    if len(set(names)) != len(names):
        raise UsageError("axis names must be distinct")
    for name in names:
        if getattr(args, name, None) is not None:
            raise UsageError(f"--{name} is fixed and also a sweep axis")
    fixed = {}
    for name in PARAM_NAMES:
        if name in names:
            continue
        value = getattr(args, name, None)
        if value is None:
            if name not in DEFAULTS:
                raise UsageError(f"--{name} is required (or sweep it)")
            value = ext(DEFAULTS[name])
        fixed[name] = value
    grid = [[]]
    for _, points in axes:
        grid = [cell + [x] for cell in grid for x in points]
    jobs = [(args.n, args.kind, {**fixed, **dict(zip(names, cell))}) for cell in grid]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            codes = list(pool.map(_sweep_cell, jobs, chunksize=64))
    else:
        codes = [_sweep_cell(job) for job in jobs]
    rows = [[fmt(x) for x in cell] + [str(code)] for cell, code in zip(grid, codes)]
    return names + ["verdict"], rows


def cmd_sweep(args) -> int:
    header, rows = sweep_rows(args)
    buf = io.StringIO()
    buf.write(f"# {SWEEP_SCHEMA} n={args.n} kind={args.kind}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return 0


def _power_arg(text: str) -> oracle.RadialFunction:
    try:
        parts = [float(x) for x in text.split(":")]
    except ValueError:
        raise UsageError(f"malformed power {text!r} (expected c:t[:offset])") from None
    if len(parts) not in (2, 3):
        raise UsageError(f"malformed power {text!r} (expected c:t[:offset])")
    return oracle.RadialFunction.power(*parts)


def cmd_oracle(args) -> int:
    cfg = oracle.QuadratureConfig.from_env()
    if args.task == "sharpness":
        rep = oracle.verify_smoothing_sharpness(args.n, args.m, args.k, cfg=cfg)
        _emit({
            "schema": "regula-oracle/1", "task": "sharpness", "n": rep.n,
            "m": fmt(rep.m), "k": fmt(rep.k), "admissible": rep.admissible,
            "theta": None if rep.theta is None else fmt(rep.theta),
            "phi_norm": rep.phi_norm, "u_norm": rep.u_norm, "ratio": rep.ratio,
            "poisson_error": rep.poisson_error, "confirmed": rep.confirmed,
        })
        return 0 if rep.confirmed else 1
    f = oracle.RadialFunction.constant(1.0) if args.power is None else _power_arg(args.power)
    if args.task == "norm":
        value = oracle.weighted_norm(f, args.k, args.weight, args.n, cfg)
        _emit({"schema": "regula-oracle/1", "task": "norm", "n": args.n, "k": fmt(args.k),
               "weight": args.weight, "value": value})
        return 0
    try:
        u = oracle.poisson_solve_radial(args.n, f, cfg)
    except ValueError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    radii = args.radii or [0.01, 0.1, 0.25, 0.5, 0.75, 1.0]
    _emit({"schema": "regula-oracle/1", "task": "poisson", "n": args.n,
           "values": [[x, u(x)] for x in radii]})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regula", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="verdict and condition report")
    _add_param_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("certify", help="plan and write a bootstrap certificate")
    _add_param_flags(p)
    p.add_argument("--out", required=True, help="certificate path")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check", help="re-validate a certificate file")
    p.add_argument("certificate")
    p.add_argument("--strict", action="store_true", help="require 1/rho < 1 on every step")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gallery", help="explicit singular solutions")
    p.add_argument("--kind", default="h01", help="solution class (does not affect the pair)")
    p.add_argument("--n", type=int, required=True)
    for name in PARAM_NAMES:
        p.add_argument(f"--{name}", type=rational_arg, default=None)
    p.add_argument("--query", action="append", default=[], help="space[:k], e.g. L:5 or H01")
    p.add_argument("--sharp", nargs=2, metavar=("M", "K"), help="scalar sharp example instead of a pair")
    p.add_argument("--no-quadrature", action="store_true")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("sweep", help="verdict grid as CSV")
    _add_param_flags(p)
    p.add_argument("--axis", action="append", required=True, help="name:start:stop:count")
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="radial quadrature ground truth")
    p.add_argument("task", choices=("poisson", "norm", "sharpness"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--power", default=None, help="source/function c:t[:offset]; default constant 1")
    p.add_argument("--k", type=rational_arg, default=Fraction(1))
    p.add_argument("--m", type=rational_arg, default=Fraction(1))
    p.add_argument("--weight", choices=("none", "boundary-distance"), default="none")
    p.add_argument("--radii", type=float, nargs="*")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2


if __name__ == "__main__":
    sys.exit(main())
