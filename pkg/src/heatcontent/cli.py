"""Command-line front end.

    python -m heatcontent coeffs   --config run.toml [--json out.json]
    python -m heatcontent simulate --config run.toml --csv curve.csv [--json meta.json] [--grid 2x]
    python -m heatcontent verify   --suite {algebra,identities,constants,all}
    python -m heatcontent compare  --config run.toml [--json report.json]

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 math-domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .coeffs import beta_closed, beta_mixed, beta_spectral, equivalent_mixed_S
from .config import ConfigError, RunConfig, load_config
from .errors import MathDomainError
from .model import COMPONENTS
from .oracle import (
    SCHEMA_VERSION,
    RadialGrid,
    TimeSpec,
    compare,
    fit_asymptotics,
    solve_circle,
    solve_heat,
    write_curve_csv,
)
from .suites import run_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_MATH = 0, 1, 2, 3


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _fmt(z) -> str:
    z = complex(z) + 0.0  # drop negative zeros
    if abs(z.imag) <= 1e-14 * max(1.0, abs(z.real)):
        return f"{z.real: .12g}"
    return f"{z.real: .12g}{z.imag:+.12g}j"


def _dump(obj, path):
    obj = dict(obj)
    obj["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _mixed_S(cfg: RunConfig):
    if isinstance(cfg.oracle.S, str):
        return {c: equivalent_mixed_S(cfg.model, c) for c in COMPONENTS}
    return np.asarray(cfg.oracle.S, dtype=complex)


def closed_coefficients(cfg: RunConfig) -> list:
    """beta_0..beta_2 from the closed formulas (CoefficientResult, or complex on the circle)."""
    if cfg.closed:
        return [beta_closed(n, cfg.phi, cfg.rho, cfg.model) for n in range(3)]
    if cfg.oracle.bc == "mixed":
        S = _mixed_S(cfg)
        return [beta_mixed(n, cfg.phi, cfg.rho, cfg.model, S) for n in range(3)]
    return [beta_spectral(n, cfg.phi, cfg.rho, cfg.model) for n in range(3)]


def _time_spec(cfg: RunConfig) -> TimeSpec:
    o = cfg.oracle
    return TimeSpec(np.geomspace(o.t_min, o.t_max, o.points), ratio=o.ratio)


def simulate(cfg: RunConfig, grid_factor: int = 1):
    tspec = _time_spec(cfg)
    if cfg.closed:
        return solve_circle(cfg.model, cfg.phi, cfg.rho, tspec)
    n = cfg.oracle.N
    for _ in range(grid_factor.bit_length() - 1):
        n = 2 * n
    S = _mixed_S(cfg) if cfg.oracle.bc == "mixed" else None
    return solve_heat(cfg.model, cfg.phi, cfg.rho, RadialGrid(n), tspec, bc=cfg.oracle.bc, S=S,
                      richardson=cfg.oracle.richardson)


def _coeff_record(res) -> dict:
    if hasattr(res, "as_dict"):
        return res.as_dict()
    return {"value": _c(res)}


def cmd_coeffs(args) -> int:
    cfg = load_config(args.config)
    results = closed_coefficients(cfg)
    print(f"{'n':>2}  {'beta_n':>22}  {'interior':>22}  {'boundary r=0':>22}  {'boundary r=1':>22}")
    for n, res in enumerate(results):
        if hasattr(res, "interior"):
            b0, b1 = res.boundary
            print(f"{n:>2}  {_fmt(res.value):>22}  {_fmt(res.interior):>22}  {_fmt(b0):>22}  {_fmt(b1):>22}")
        else:
            print(f"{n:>2}  {_fmt(res):>22}")
    path = args.json or cfg.output.get("json")
    if path:
        _dump({"schema_version": SCHEMA_VERSION, "config": cfg.source,
               "coefficients": [_coeff_record(r) for r in results]}, path)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    factor = {"1x": 1, "2x": 2, "4x": 4}[args.grid]
    curve = simulate(cfg, factor)
    csv_path = args.csv or cfg.output.get("csv")
    if not csv_path:
        raise ConfigError("output.csv", "no CSV path given (use --csv)")
    write_curve_csv(curve, csv_path)
    print(f"wrote {len(curve.t)} points to {csv_path}")
    if args.json:
        _dump({"schema_version": SCHEMA_VERSION, "config": cfg.source, "metadata": curve.metadata}, args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite)
    failed = 0
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        failed += not c.passed
        note = f"  ({c.note})" if c.note else ""
        print(f"{mark}  {c.value:10.3e} <= {c.tol:7.1e}  {c.name}{note}")
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    closed = closed_coefficients(cfg)
    curve = simulate(cfg)
    fit = fit_asymptotics(curve, window=(cfg.oracle.t_min, cfg.oracle.t_max))
    report = compare(closed, fit, cfg.oracle.tolerances, metadata={"config": cfg.source, **curve.metadata})
    for n in range(3):
        mark = "pass" if report.verdicts[n] else "FAIL"
        print(f"beta_{n}: closed {_fmt(report.closed[n])}  fitted {_fmt(report.fitted[n])}  "
              f"rel.err {report.errors[n]:.2e} (tol {report.tolerances[n]:.0e})  {mark}")
    print(f"fit residual {report.residual:.2e}, condition number {report.condition_number:.2e}")
    path = args.json or cfg.output.get("json")
    if path:
        _dump(report.to_dict(timestamp=False), path)
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heatcontent", description="Heat content coefficients under spectral boundary conditions")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="closed-form beta_0..beta_2")
    c.add_argument("--config", required=True)
    c.add_argument("--json", help="write a JSON report ('-' for stdout)")
    c.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("simulate", help="numerical heat content curve")
    s.add_argument("--config", required=True)
    s.add_argument("--csv", help="curve output (t, beta_real, beta_imag)")
    s.add_argument("--json", help="solver metadata output")
    s.add_argument("--grid", choices=["1x", "2x", "4x"], default="1x", help="radial refinement factor")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("--suite", choices=["algebra", "identities", "constants", "all"], default="all")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("compare", help="closed form vs fitted oracle coefficients")
    m.add_argument("--config", required=True)
    m.add_argument("--json")
    m.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MathDomainError as exc:
        print(f"math domain error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
