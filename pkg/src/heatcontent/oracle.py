"""Independent numerical heat-content oracle.

Per Fourier mode k the heat equation (d_t + D) u = 0 is discretized on a
uniform radial grid with second-order central differences. Boundary
conditions are imposed through ghost nodes: at each end the ell ghost values
are eliminated using the derivative conditions together with the requirement
that the algebraic conditions persist in time (G (D u) = 0 at the boundary
node). The boundary node itself evolves with the full equation. Time
stepping is Crank-Nicolson on a geometric mesh (with a couple of backward
Euler start-up steps to damp the initial boundary layer), and the result is
Richardson-extrapolated in h using grids with N and 2N+1 interior nodes.
"""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .coeffs import CoefficientResult, normal_connection
from .errors import IllConditioned, SingularConstraint
from .fields import Field
from .model import COMPONENTS, CircleModel, DiracModel
from .spectral import mode_potential, projector_A, xi

__all__ = [
    "RadialGrid",
    "TimeSpec",
    "HeatContentCurve",
    "AsymptoticFit",
    "HeatContentReport",
    "solve_heat",
    "solve_circle",
    "fit_asymptotics",
    "compare",
    "dirichlet_series",
    "write_curve_csv",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = "1.0"
DEFAULT_TOLERANCES = (1e-3, 1e-2, 2e-2)
CONSTRAINT_COND = 1e12


@dataclass(frozen=True)
class RadialGrid:
    N: int = 2048

    def __post_init__(self):
        if self.N < 64:
            raise ValueError(f"need at least 64 interior nodes, got {self.N}")

    @property
    def h(self) -> float:
        return 1.0 / (self.N + 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.N + 2)

    def refined(self) -> "RadialGrid":
        return RadialGrid(2 * self.N + 1)


@dataclass(frozen=True)
class TimeSpec:
    """Output times plus the geometric mesh policy."""

    t_out: np.ndarray = field(default_factory=lambda: np.geomspace(1e-5, 1e-2, 40))
    ratio: float = 1.01
    start_factor: float = 50.0
    be_steps: int = 2

    def mesh(self) -> np.ndarray:
        t_out = np.asarray(self.t_out, dtype=float)
        if np.any(np.diff(t_out) <= 0) or t_out[0] <= 0:
            raise ValueError("output times must be positive and strictly increasing")
        t = t_out[0] / self.start_factor
        pts = [0.0]
        while t < t_out[-1]:
            pts.append(t)
            t *= self.ratio
        mesh = np.unique(np.concatenate([pts, t_out]))
        # merge mesh points closer than a tiny relative gap to an output time
        keep = np.ones(mesh.size, bool)
        for to in t_out:
            close = np.abs(mesh - to) < 1e-9 * to
            close[np.searchsorted(mesh, to)] = False
            keep &= ~close
        return mesh[keep]


@dataclass
class HeatContentCurve:
    t: np.ndarray
    beta: np.ndarray
    metadata: dict

    def __post_init__(self):
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("curve times must be strictly increasing")


@dataclass
class AsymptoticFit:
    coefficients: np.ndarray  # b_0 .. b_nmax
    residual: float
    condition_number: float
    window: tuple
    n_points: int


@dataclass
class HeatContentReport:
    closed: list
    fitted: list
    errors: list
    tolerances: tuple
    verdicts: list
    residual: float
    condition_number: float
    metadata: dict

    @property
    def passed(self) -> bool:
        return all(self.verdicts)

    def to_dict(self, timestamp: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "coefficients": [[complex(b).real, complex(b).imag] for b in self.closed],
            "fitted": [[complex(b).real, complex(b).imag] for b in self.fitted],
            "errors": [float(e) for e in self.errors],
            "tolerances": [float(x) for x in self.tolerances],
            "verdicts": ["pass" if v else "fail" for v in self.verdicts],
            "residual": float(self.residual),
            "condition_number": float(self.condition_number),
            "metadata": self.metadata,
        }
        if timestamp:
            out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return out


# -- boundary constraints ------------------------------------------------------------

@dataclass
class _Constraint:
    """Rows (galg, gder, hder): galg u = 0 and gder u' + hder u = 0 at a boundary node."""

    galg: np.ndarray
    gder: np.ndarray
    hder: np.ndarray
    keep: np.ndarray  # projector applied to the initial boundary value


def _row_basis(p: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    _, s, vh = np.linalg.svd(p)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return vh[:rank]


def _spectral_constraint(model, c, k, cmat) -> _Constraint:
    pi = projector_A(model, c, k).matrix
    g = _row_basis(pi)
    return _Constraint(g, g @ model.rep.normal, g @ cmat, np.eye(model.ell) - pi)


def _mixed_constraint(model, c, S) -> _Constraint:
    eps = model.eps(c)
    r = float(c)
    gp = _row_basis(xi(model.rep, 1))
    gm = _row_basis(xi(model.rep, -1))
    smat = np.asarray(S[c] if isinstance(S, dict) else S, dtype=complex)
    om = normal_connection(model, r)
    return _Constraint(gp, eps * gm, gm @ (eps * om + smat), xi(model.rep, -1))


# -- discrete operator -------------------------------------------------------------

def _operator_blocks(model: DiracModel, k, grid: RadialGrid, constraints):
    """Block-tridiagonal D_h: (lower, diag, upper), each of shape (n, ell, ell)."""
    ell = model.ell
    r = grid.nodes
    h = grid.h
    n = r.size
    fv = model.profile(r)
    pot = mode_potential(model, k)
    fp = model.profile.d1
    cm = pot(r, fv)
    dcm = pot.deriv(fp)(r, fv)
    th = model.rep.normal
    bmat = th @ cm + cm @ th
    kmat = th @ dcm + cm @ cm
    eye = np.eye(ell)
    lower = -eye / h ** 2 - bmat / (2 * h)
    upper = -eye / h ** 2 + bmat / (2 * h)
    diag = 2 * eye / h ** 2 + kmat
    lower[0] = 0
    upper[-1] = 0

    for side, con in zip((-1, 1), constraints):
        j = 0 if side < 0 else n - 1
        ghost = (-eye / h ** 2 + side * bmat[j] / (2 * h))
        nbr = (-eye / h ** 2 - side * bmat[j] / (2 * h))
        # ghost elimination: M u_ghost + R1 u_nbr + R0 u_j = 0
        mmat = np.vstack([side * con.gder / (2 * h), con.galg @ ghost])
        r1 = np.vstack([-side * con.gder / (2 * h), con.galg @ nbr])
        r0 = np.vstack([con.hder, con.galg @ diag[j]])
        if mmat.shape[0] != ell:
            raise SingularConstraint(
                f"boundary {0 if side < 0 else 1}, mode {k}: {mmat.shape[0]} conditions for {ell} ghost values")
        scale = 1.0 / np.maximum(np.abs(mmat).max(axis=1, keepdims=True), 1e-300)
        if np.linalg.cond(scale * mmat) > CONSTRAINT_COND:
            raise SingularConstraint(f"boundary {0 if side < 0 else 1}, mode {k}: ghost system is singular")
        g1 = -np.linalg.solve(mmat, r1)
        g0 = -np.linalg.solve(mmat, r0)
        if side < 0:
            diag[0] = diag[0] + ghost @ g0
            upper[0] = nbr + ghost @ g1
        else:
            diag[-1] = diag[-1] + ghost @ g0
            lower[-1] = nbr + ghost @ g1
    return lower, diag, upper


def _banded(lower, diag, upper):
    """Banded storage of D_h (for solve_banded) and of the identity."""
    n, ell, _ = diag.shape
    bw = 2 * ell - 1
    size = n * ell
    ab = np.zeros((2 * bw + 1, size), dtype=complex)
    a_idx, b_idx = np.meshgrid(np.arange(ell), np.arange(ell), indexing="ij")
    blocks = np.arange(n)
    for off, blk in ((-1, lower), (0, diag), (1, upper)):
        rows = (blocks[:, None, None] * ell + a_idx)
        cols = ((blocks + off)[:, None, None] * ell + b_idx)
        ok = (cols >= 0) & (cols < size)
        ab[bw + rows[ok] - cols[ok], cols[ok]] = blk[ok]
    ident = np.zeros_like(ab)
    ident[bw] = 1.0
    return (bw, bw), ab, ident


def _apply_blocks(lower, diag, upper, u):
    out = np.einsum("nij,nj->ni", diag, u)
    out[1:] += np.einsum("nij,nj->ni", lower[1:], u[:-1])
    out[:-1] += np.einsum("nij,nj->ni", upper[:-1], u[1:])
    return out


def _trapezoid(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = h / 2
    return w


def _evolve(lower, diag, upper, u0, mesh, t_out, be_steps, readout):
    """Integrate du/dt = -D_h u over the mesh, returning readout(u) at each output time."""
    n, ell = u0.shape
    u = u0.copy()
    out = []
    k = 0
    lu, band, ident = _banded(lower, diag, upper)
    for i in range(1, mesh.size):
        dt = mesh[i] - mesh[i - 1]
        if i <= be_steps:
            ab = ident + dt * band
            rhs = u
        else:
            ab = ident + 0.5 * dt * band
            rhs = u - 0.5 * dt * _apply_blocks(lower, diag, upper, u)
        u = scipy.linalg.solve_banded(lu, ab, rhs.reshape(-1), overwrite_ab=True,
                                      check_finite=False).reshape(n, ell)
        if k < len(t_out) and mesh[i] == t_out[k]:
            out.append(readout(u))
            k += 1
    return np.array(out)


def _solve_once(model, phi, rho, grid, tspec, bc, S):
    r = grid.nodes
    fv = model.profile(r)
    g = np.exp((model.m - 1) * fv)
    w = _trapezoid(r.size, grid.h) * g * (2 * np.pi) ** (model.m - 1)
    mesh = tspec.mesh()
    t_out = np.asarray(tspec.t_out, dtype=float)
    total = np.zeros(t_out.size, dtype=complex)
    for k, v in phi.modes.items():
        kk = tuple(-x for x in k)
        if kk not in rho.modes:
            continue
        if bc == "spectral":
            cm = mode_potential(model, k)
            cons = [_spectral_constraint(model, c, k, cm(float(c), model.profile(float(c)))) for c in COMPONENTS]
        else:
            cons = [_mixed_constraint(model, c, S) for c in COMPONENTS]
        lower, diag, upper = _operator_blocks(model, k, grid, cons)
        u0 = v(r, fv)
        u0[0] = cons[0].keep @ u0[0]
        u0[-1] = cons[1].keep @ u0[-1]
        rv = rho.modes[kk](r, fv) * w[:, None]
        total += _evolve(lower, diag, upper, u0, mesh, t_out, tspec.be_steps,
                         lambda u: np.sum(rv * u))
    return total


def solve_heat(model: DiracModel, phi: Field, rho: Field, grid: RadialGrid | None = None,
               tspec: TimeSpec | None = None, bc: str = "spectral", S=None,
               richardson: bool = True) -> HeatContentCurve:
    """beta(t) = int <u(t), rho> for (d_t + D) u = 0, B u = 0, u(0) = phi.

    ``bc`` is "spectral" (B = Pi_A^+ (+) Pi_A^+ P) or "mixed" (Xi_+, Xi_-(nabla + S)).
    """
    grid = grid or RadialGrid()
    tspec = tspec or TimeSpec()
    if bc not in ("spectral", "mixed"):
        raise ValueError(f"unknown boundary condition {bc!r}")
    if bc == "mixed" and S is None:
        raise ValueError("mixed conditions need S")
    coarse = _solve_once(model, phi, rho, grid, tspec, bc, S)
    if richardson:
        fine = _solve_once(model, phi, rho, grid.refined(), tspec, bc, S)
        beta = (4 * fine - coarse) / 3
    else:
        beta = coarse
    meta = {
        "N": grid.N,
        "richardson": bool(richardson),
        "bc": bc,
        "time_ratio": tspec.ratio,
        "t_start": float(np.asarray(tspec.t_out)[0] / tspec.start_factor),
        "be_steps": tspec.be_steps,
        "modes": [list(k) for k in phi.modes],
    }
    return HeatContentCurve(np.asarray(tspec.t_out, float), beta, meta)


def solve_circle(model: CircleModel, phi: Field, rho: Field, tspec: TimeSpec | None = None) -> HeatContentCurve:
    """Closed circle: each Fourier mode is an ell-dimensional ODE u' = -P_k^2 u."""
    tspec = tspec or TimeSpec()
    mesh = tspec.mesh()
    t_out = np.asarray(tspec.t_out, dtype=float)
    total = np.zeros(t_out.size, dtype=complex)
    eye = np.eye(model.ell)
    for k, v in phi.modes.items():
        kk = tuple(-x for x in k)
        if kk not in rho.modes:
            continue
        dmat = model.symbol(k[0]) @ model.symbol(k[0])
        u = v(0.0)
        rv = rho.modes[kk](0.0)
        out = []
        j = 0
        for i in range(1, mesh.size):
            dt = mesh[i] - mesh[i - 1]
            if i <= tspec.be_steps:
                u = np.linalg.solve(eye + dt * dmat, u)
            else:
                u = np.linalg.solve(eye + 0.5 * dt * dmat, u - 0.5 * dt * dmat @ u)
            if j < t_out.size and mesh[i] == t_out[j]:
                out.append(2 * np.pi * rv @ u)
                j += 1
        total += np.array(out)
    return HeatContentCurve(t_out, total, {"closed": True, "time_ratio": tspec.ratio})


# -- fitting ---------------------------------------------------------------------------

def fit_asymptotics(curve: HeatContentCurve, n_max: int = 5, window=(1e-5, 1e-2),
                    min_points: int = 12) -> AsymptoticFit:
    """Least squares fit of sum_{n <= n_max} b_n t^{n/2} on the window.

    Works in s = sqrt(t / t_hi) so the design matrix stays well scaled, then
    converts back: b_n = a_n / t_hi^{n/2}.
    """
    lo, hi = window
    sel = (curve.t >= lo * (1 - 1e-12)) & (curve.t <= hi * (1 + 1e-12))
    t = curve.t[sel]
    y = curve.beta[sel]
    if t.size < min_points:
        raise ValueError(f"need at least {min_points} curve points in the window, got {t.size}")
    t_hi = t.max()
    s = np.sqrt(t / t_hi)
    design = s[:, None] ** np.arange(n_max + 1)[None, :]
    cond = float(np.linalg.cond(design))
    if cond > 1e12:
        raise IllConditioned(f"design matrix condition number {cond:.2e}")
    a, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.linalg.norm(design @ a - y))
    b = a / t_hi ** (np.arange(n_max + 1) / 2)
    return AsymptoticFit(b, resid, cond, (float(lo), float(hi)), int(t.size))


def compare(closed: Sequence, fit: AsymptoticFit, tolerances=DEFAULT_TOLERANCES,
            metadata: dict | None = None) -> HeatContentReport:
    """Relative errors |b_n - beta_n| / max(1, |beta_n|) against per-coefficient tolerances."""
    vals = [c.value if isinstance(c, CoefficientResult) else complex(c) for c in closed]
    fitted = [complex(fit.coefficients[n]) for n in range(len(vals))]
    errors = [abs(b - v) / max(1.0, abs(v)) for b, v in zip(fitted, vals)]
    verdicts = [e <= tol for e, tol in zip(errors, tolerances)]
    return HeatContentReport(vals, fitted, errors, tuple(tolerances), verdicts,
                             fit.residual, fit.condition_number, dict(metadata or {}))


def dirichlet_series(t, nmax: int = 20001) -> np.ndarray:
    """Heat content of the unit interval with Dirichlet ends, u(0) = 1, rho = 1."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = np.arange(1, nmax, 2)
    return np.sum(8.0 / (n ** 2 * np.pi ** 2) * np.exp(-np.outer(t, n ** 2 * np.pi ** 2)), axis=1)


def write_curve_csv(curve: HeatContentCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t", "beta_real", "beta_imag"])
        for t, b in zip(curve.t, curve.beta):
            wr.writerow([repr(float(t)), repr(float(b.real)), repr(float(b.imag))])


def write_report_json(report: HeatContentReport, path, timestamp: bool = True) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(timestamp), fh, indent=2, sort_keys=True)
        fh.write("\n")
