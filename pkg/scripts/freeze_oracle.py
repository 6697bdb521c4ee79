"""Run the numerical oracle on the built-in fixtures and freeze the fitted coefficients.

Usage: python scripts/freeze_oracle.py [--out tests/data/oracle_frozen.json] [--only NAME ...]
"""
import argparse
import json
import time
from pathlib import Path

from heatcontent.oracle import RadialGrid, fit_asymptotics, solve_heat
from heatcontent.suites import oracle_fixtures


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/data/oracle_frozen.json"))
    ap.add_argument("--N", type=int, default=2048)
    ap.add_argument("--only", nargs="*")
    args = ap.parse_args()
    fixtures = oracle_fixtures()
    names = args.only or sorted(fixtures)
    out = {"N": args.N, "window": [1e-5, 1e-2], "fixtures": {}}
    for name in names:
        model, phi, rho = fixtures[name]
        t0 = time.perf_counter()
        curve = solve_heat(model, phi, rho, RadialGrid(args.N))
        fit = fit_asymptotics(curve)
        out["fixtures"][name] = {
            "b": [[complex(x).real, complex(x).imag] for x in fit.coefficients[:3]],
            "residual": fit.residual,
            "beta_t": [[float(t), complex(b).real] for t, b in zip(curve.t[::13], curve.beta[::13])],
        }
        print(f"{name:32s} b = {[round(complex(x).real, 6) for x in fit.coefficients[:3]]}  "
              f"({time.perf_counter() - t0:.1f}s)", flush=True)
    Path(args.out).write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
