"""Spatial convergence of the oracle on the Dirichlet sector of the flat interval.

Compares the unextrapolated curve with the classical series for a sequence of
grids (N, 2N+1, ...) and prints the observed order, then the extrapolated
error at N = 2048.

Usage: python scripts/convergence.py [--levels 4] [--N0 128]
"""
import argparse

import numpy as np

from heatcontent import DualField, Field, RadialGrid, TimeSpec, assemble_flat_model, build_rep, solve_heat
from heatcontent.oracle import dirichlet_series


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N0", type=int, default=128)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()

    model = assemble_flat_model(1, build_rep(1), 0.0, 1.0)
    e = np.array([1.0, 0.0])
    phi, rho = Field.constant(e), DualField.constant(e)
    t = np.geomspace(1e-5, 1e-2, 61)
    sel = t >= 1e-4 * (1 - 1e-12)
    ts = TimeSpec(t)
    exact = dirichlet_series(t)

    grid = RadialGrid(args.N0)
    prev = None
    print(f"{'N':>6}  {'max error':>10}  order")
    for _ in range(args.levels):
        err = np.abs(solve_heat(model, phi, rho, grid, ts, richardson=False).beta - exact)[sel].max()
        order = f"{np.log2(prev / err):.3f}" if prev else "-"
        print(f"{grid.N:>6}  {err:10.3e}  {order}")
        prev, grid = err, grid.refined()
    err = np.abs(solve_heat(model, phi, rho, RadialGrid(2048), ts).beta - exact)[sel].max()
    print(f"Richardson-extrapolated, N = 2048: max error {err:.3e} on [1e-4, 1e-2]")


if __name__ == "__main__":
    main()
