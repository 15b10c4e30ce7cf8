"""Command-line front end: classify, phase-map, exponent, barrier-check, verify.

All angles are radians unless --degrees is given.  Output is deterministic:
floats are printed with 17 significant digits, CSV uses LF line endings and
'.' decimals, JSON carries a schema_version field and stable key order.
Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import barrier as bar
from . import exponent as exp_mod
from .errors import ObliqueConeError
from .geometry import ConeGeometry, ObliqueBC
from .verify import run_suite

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _radians(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _witness_digest(witnesses) -> str:
    canonical = ";".join(
        f"{name}={_fmt(value)}@{_fmt(tol)}" for name, value, tol in witnesses
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def _report_dict(theta0: float, s: float, report: exp_mod.RegimeReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "theta0": theta0,
        "s": s,
        "label": report.label,
        "critical_exponent": report.critical_exponent,
        "s0": report.s0,
        "witnesses": [
            {"name": name, "value": value, "tolerance": tol}
            for name, value, tol in report.witnesses
        ],
    }


def cmd_classify(args: argparse.Namespace) -> int:
    theta0 = _radians(args.theta0, args.degrees)
    s = _radians(args.s, args.degrees)
    geom = ConeGeometry(theta0=theta0)
    report = exp_mod.classify_regime(geom, ObliqueBC.for_cone(geom, s))
    if args.json:
        print(json.dumps(_report_dict(theta0, s, report)))
        return 0
    print(f"theta0: {_fmt(theta0)}")
    print(f"s: {_fmt(s)}")
    print(f"label: {report.label}")
    if report.critical_exponent is not None:
        print(f"critical_exponent: {_fmt(report.critical_exponent)}")
    print(f"s0: {_fmt(report.s0)}")
    for name, value, tol in report.witnesses:
        print(f"witness {name}: {_fmt(value)} (tolerance {_fmt(tol)})")
    return 0


def _sweep_values(args: argparse.Namespace) -> list[tuple[float, float, bool]]:
    """(theta0, s, clamped) cells in deterministic row-major order."""
    if args.theta0_count < 2 or args.s_count < 2:
        raise ObliqueConeError("sweep counts must be at least 2")
    if args.s_mode == "fraction" and not (0.0 < args.s_lo <= args.s_hi < 1.0):
        raise ObliqueConeError("fractions must lie strictly inside (0, 1)")
    theta0s = np.linspace(
        _radians(args.theta0_lo, args.degrees),
        _radians(args.theta0_hi, args.degrees),
        args.theta0_count,
    )
    cells: list[tuple[float, float, bool]] = []
    for theta0 in theta0s:
        theta0 = float(theta0)
        lo, hi = -math.pi + theta0, theta0
        inset = 1e-9 * (hi - lo)
        for t in np.linspace(args.s_lo, args.s_hi, args.s_count):
            if args.s_mode == "fraction":
                s, clamped = lo + float(t) * (hi - lo), False
            else:
                s = _radians(float(t), args.degrees)
                clamped = False
                if s <= lo:
                    s, clamped = lo + inset, True
                elif s >= hi:
                    s, clamped = hi - inset, True
            cells.append((theta0, float(s), clamped))
    return cells


def _phase_row(cell: tuple[float, float, bool]) -> dict:
    theta0, s, clamped = cell
    geom = ConeGeometry(theta0=theta0)
    report = exp_mod.classify_regime(geom, ObliqueBC.for_cone(geom, s))
    return {
        "theta0": theta0,
        "s": s,
        "label": report.label,
        "critical_exponent": report.critical_exponent,
        "s0": report.s0,
        "b_at_1": exp_mod.boundary_mismatch(geom, 1.0, s),
        "witnesses_digest": _witness_digest(report.witnesses),
        "clamped": int(clamped),
    }


_PHASE_COLUMNS = (
    "theta0",
    "s",
    "label",
    "critical_exponent",
    "s0",
    "b_at_1",
    "witnesses_digest",
    "clamped",
)


def _phase_cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def cmd_phase_map(args: argparse.Namespace) -> int:
    cells = _sweep_values(args)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_phase_row, cells))
    else:
        rows = [_phase_row(cell) for cell in cells]
    try:
        handle = open(args.output, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return 2
    with handle:
        if args.format == "csv":
            handle.write(f"# obliquecone {__version__} schema={SCHEMA_VERSION}\n")
            handle.write(",".join(_PHASE_COLUMNS) + "\n")
            for row in rows:
                handle.write(
                    ",".join(_phase_cell_text(row[c]) for c in _PHASE_COLUMNS) + "\n"
                )
        else:
            payload = {
                "schema_version": SCHEMA_VERSION,
                "tool": "obliquecone",
                "version": __version__,
                "rows": rows,
            }
            handle.write(json.dumps(payload, indent=None, separators=(",", ":")))
            handle.write("\n")
    return 0


def cmd_exponent(args: argparse.Namespace) -> int:
    theta0 = _radians(args.theta0, args.degrees)
    geom = ConeGeometry(theta0=theta0)
    if args.neumann:
        root = exp_mod.neumann_exponent(geom)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "theta0": theta0,
            "mode": 1,
            "exponent": root,
            "mismatch_at_root": exp_mod.neumann_mismatch(geom, root),
        }
    else:
        if args.s is None:
            raise ObliqueConeError("--s is required unless --neumann is given")
        s = _radians(args.s, args.degrees)
        root = exp_mod.critical_exponent(geom, ObliqueBC.for_cone(geom, s))
        payload = {
            "schema_version": SCHEMA_VERSION,
            "theta0": theta0,
            "s": s,
            "mode": 0,
            "exponent": root,
            "mismatch_at_root": (
                None if root is None else exp_mod.boundary_mismatch(geom, root, s)
            ),
        }
    if args.json:
        print(json.dumps(payload))
        return 0
    for key, value in payload.items():
        if key == "schema_version":
            continue
        if value is None:
            print(f"{key}: absent")
        elif isinstance(value, float):
            print(f"{key}: {_fmt(value)}")
        else:
            print(f"{key}: {value}")
    return 0


def cmd_barrier_check(args: argparse.Namespace) -> int:
    theta0 = _radians(args.theta0, args.degrees)
    s = _radians(args.s, args.degrees)
    geom = ConeGeometry(theta0=theta0)
    bc = ObliqueBC.for_cone(geom, s)
    threshold = bar.alpha0(geom)
    barrier = bar.build_barrier(geom, args.alpha)
    rc = bar.rotate_coefficients(np.eye(2), bc, b21=float(geom.n - 2))
    m1 = bar.m1_coefficient(barrier, bc, rc)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "theta0": theta0,
        "s": s,
        "alpha": args.alpha,
        "alpha0": threshold,
        "cstar": barrier.cstar,
        "m1_coefficient": m1,
    }
    if args.tilt is not None:
        payload["tilt"] = args.tilt
        payload["m2_coefficient"] = bar.m2_coefficient(barrier, bc, rc, args.tilt)
    elif m1 < 0.0:
        tilt = bar.max_admissible_tilt(bc, barrier, rc)
        payload["tilt"] = tilt
        payload["m2_coefficient"] = bar.m2_coefficient(barrier, bc, rc, tilt)
    if args.json:
        print(json.dumps(payload))
        return 0
    for key, value in payload.items():
        if key == "schema_version":
            continue
        print(f"{key}: {_fmt(value) if isinstance(value, float) else value}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite)
    failures = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {res.suite}.{res.name} ({res.seconds:.2f}s) {res.detail}")
        failures += 0 if res.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obliquecone",
        description=(
            "Regularity regimes, critical exponents and barrier checks for "
            "axisymmetric oblique-derivative problems on circular cones."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify the regime of one (theta0, s) pair")
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--degrees", action="store_true", help="inputs are in degrees")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("phase-map", help="sweep (theta0, s) and tabulate regimes")
    p.add_argument("--theta0-lo", type=float, required=True)
    p.add_argument("--theta0-hi", type=float, required=True)
    p.add_argument("--theta0-count", type=int, default=10)
    p.add_argument(
        "--s-mode",
        choices=("absolute", "fraction"),
        default="fraction",
        help="absolute oblique angles (clamped per theta0) or fractions of the admissible interval",
    )
    p.add_argument("--s-lo", type=float, default=0.05)
    p.add_argument("--s-hi", type=float, default=0.95)
    p.add_argument("--s-count", type=int, default=10)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="concurrent sweep workers")
    p.set_defaults(func=cmd_phase_map)

    p = sub.add_parser("exponent", help="critical exponent of one configuration")
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--s", type=float)
    p.add_argument(
        "--neumann",
        action="store_true",
        help="exponent of the first non-axisymmetric Neumann mode instead",
    )
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("barrier-check", help="barrier and boundary-operator signs")
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--tilt", type=float)
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_barrier_check)

    p = sub.add_parser("verify", help="run a module invariant suite")
    p.add_argument(
        "--suite",
        choices=("special", "exponent", "barrier", "solver", "all"),
        default="all",
    )
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ObliqueConeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
