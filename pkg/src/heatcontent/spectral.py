"""Boundary operators A and A^#, positive spectral projectors, and P, P~, D, B on fields.

Conventions: a field mode phi_k pairs with the dual mode rho_{-k}. Every
function below that takes ``k`` for a dual-side object (``sharp_A``,
``projector_sharp``) uses the *field* mode k it pairs with, so the dual
operator itself acts on the rho mode -k.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import ImaginaryAxisEigenvalue, NonConvergence
from .fields import DualField, Field
from .model import COMPONENTS, DiracModel
from .radial import Radial

__all__ = [
    "SpectralProjector",
    "pos_projector",
    "matrix_sign",
    "xi",
    "mode_potential",
    "tangential_part",
    "boundary_A",
    "sharp_A",
    "psi_A_sharp",
    "dual_model",
    "projector_A",
    "projector_sharp",
    "apply_P",
    "apply_P_dual",
    "apply_D",
    "apply_D_dual",
    "apply_B",
    "apply_B_dual",
    "compatible_field",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-8
SIGN_TOL = 1e-13
SIGN_MAXITER = 60


@dataclass(frozen=True, eq=False)
class SpectralProjector:
    matrix: np.ndarray
    gap: float
    rank: int
    iterations: int

    def __matmul__(self, other):
        return self.matrix @ other


def matrix_sign(a: np.ndarray, maxiter: int = SIGN_MAXITER, tol: float = SIGN_TOL) -> tuple[np.ndarray, int]:
    """Newton iteration S <- (S + S^-1)/2 with determinant scaling in the early phase."""
    s = np.array(a, dtype=complex)
    n = s.shape[0]
    prev = np.inf
    for it in range(1, maxiter + 1):
        sinv = np.linalg.inv(s)
        mu = 1.0
        if prev > 1e-2:
            det = abs(np.linalg.det(s))
            if det > 0 and np.isfinite(det):
                mu = det ** (-1.0 / n)
        new = 0.5 * (mu * s + sinv / mu)
        delta = np.linalg.norm(new - s, 1)
        s = new
        if delta <= tol * max(1.0, np.linalg.norm(s, 1)):
            return s, it
        # rounding floor: quadratic phase has stopped making progress
        if prev < 1e-9 and delta >= prev:
            return s, it
        prev = delta
    raise NonConvergence(f"matrix sign iteration did not converge in {maxiter} steps (last step {prev:.2e})")


def pos_projector(amat: np.ndarray, tol: float = DEFAULT_TOL) -> SpectralProjector:
    """Projector onto the generalized eigenspaces of ``amat`` with Re(lambda) > 0."""
    amat = np.asarray(amat, dtype=complex)
    eig = np.linalg.eigvals(amat)  # LAPACK Hessenberg + shifted QR
    gap = float(np.min(np.abs(eig.real))) if eig.size else np.inf
    if gap < tol:
        raise ImaginaryAxisEigenvalue(f"eigenvalue within {gap:.2e} of the imaginary axis (tol {tol:.1e})")
    s, its = matrix_sign(amat)
    pi = 0.5 * (np.eye(amat.shape[0]) + s)
    return SpectralProjector(pi, gap, int(np.sum(eig.real > 0)), its)


def xi(rep, sign: int = 1) -> np.ndarray:
    """Xi_{+-} = (Id +- gamma0) / 2."""
    return 0.5 * (np.eye(rep.ell) + sign * rep.gamma0)


# -- per-mode operator data ---------------------------------------------------

def _mode(k, model) -> tuple[int, ...]:
    k = tuple(int(x) for x in np.atleast_1d(k)) if model.n_tangential else ()
    if len(k) != model.n_tangential:
        raise ValueError(f"mode {k} needs {model.n_tangential} entries")
    return k


def mode_potential(model: DiracModel, k) -> Radial:
    """C_k with P = Theta_m d_r + C_k on the Fourier mode k."""
    k = _mode(k, model)
    c = model.psi_P
    for a, th in enumerate(model.rep.tangential):
        if k[a]:
            c = c + Radial({-1: (1j * k[a] * th)[None]}, th.shape)
        c = c + th @ model.omega[a]
    return c


def mode_potential_dual(model: DiracModel, k) -> Radial:
    """C~_k with P~ = -Theta_m^T d_r + C~_k on the dual mode k."""
    k = _mode(k, model)
    c = model.psi_P.T
    for a, th in enumerate(model.rep.tangential):
        tt = th.T
        if k[a]:
            c = c + Radial({-1: (-1j * k[a] * tt)[None]}, th.shape)
        c = c + tt @ model.omega[a].T
    return c


def tangential_part(model: DiracModel, component: int, k) -> np.ndarray:
    """-gamma_m gamma_a (i k_a + omega_a) at the boundary, where exp(f) = 1."""
    k = _mode(k, model)
    gm = model.gamma_m(component)
    om = model.omega_at(float(component))
    out = np.zeros((model.ell, model.ell), dtype=complex)
    for a, th in enumerate(model.rep.tangential):
        out -= gm @ th @ (1j * k[a] * np.eye(model.ell) + om[a])
    return out


def boundary_A(model: DiracModel, component: int, k) -> np.ndarray:
    return tangential_part(model, component, k) + model.psi_A[component]


def sharp_A(model: DiracModel, component: int, k) -> np.ndarray:
    """gamma_m^T A^T gamma_m^T, acting on the dual mode -k."""
    gm = model.gamma_m(component)
    return gm.T @ boundary_A(model, component, k).T @ gm.T


def psi_A_sharp(model: DiracModel, component: int) -> np.ndarray:
    """Endomorphism part of A^#: A^# minus its connection/derivative part on V*."""
    gm_d = -model.gamma_m(component).T
    om = model.omega_at(float(component))
    deriv = np.zeros((model.ell, model.ell), dtype=complex)
    for a, th in enumerate(model.rep.tangential):
        deriv -= gm_d @ (-th.T) @ (-om[a].T)
    return sharp_A(model, component, _mode(np.zeros(model.n_tangential, int), model)) - deriv


def dual_model(model: DiracModel) -> DiracModel:
    """Model for (P~, A^#) on the dual bundle; the geometry is unchanged."""
    return replace(
        model,
        rep=model.rep.dual(),
        omega=tuple(-w.T for w in model.omega),
        psi_P=model.psi_P.T,
        psi_A=tuple(psi_A_sharp(model, c) for c in COMPONENTS),
    )


# -- projectors (cached per model, component and mode) ---------------------------

_CACHE: "weakref.WeakKeyDictionary[DiracModel, dict]" = weakref.WeakKeyDictionary()


def _cached(model, key, build):
    store = _CACHE.setdefault(model, {})
    if key not in store:
        store[key] = build()
    return store[key]


def projector_A(model: DiracModel, component: int, k, tol: float = DEFAULT_TOL) -> SpectralProjector:
    k = _mode(k, model)

    def build():
        try:
            return pos_projector(boundary_A(model, component, k), tol)
        except ImaginaryAxisEigenvalue as exc:
            raise ImaginaryAxisEigenvalue(f"A at component {component}, mode {k}: {exc}") from None

    return _cached(model, ("A", component, k, tol), build)


def projector_sharp(model: DiracModel, component: int, k, tol: float = DEFAULT_TOL) -> SpectralProjector:
    """Pi^+ of A^#, for the dual mode -k."""
    k = _mode(k, model)

    def build():
        try:
            return pos_projector(sharp_A(model, component, k), tol)
        except ImaginaryAxisEigenvalue as exc:
            raise ImaginaryAxisEigenvalue(f"A# at component {component}, mode {k}: {exc}") from None

    return _cached(model, ("A#", component, k, tol), build)


# -- differential operators ------------------------------------------------------

def apply_P(model: DiracModel, phi: Field) -> Field:
    th_m = model.rep.normal
    fp = model.profile.d1
    return phi.map(lambda k, v: th_m @ v.deriv(fp) + mode_potential(model, k) @ v)


def apply_P_dual(model: DiracModel, rho: Field) -> Field:
    th_m = model.rep.normal
    fp = model.profile.d1
    return rho.map(lambda k, v: -(th_m.T @ v.deriv(fp)) + mode_potential_dual(model, k) @ v)


def apply_D(model: DiracModel, phi: Field) -> Field:
    return apply_P(model, apply_P(model, phi))


def apply_D_dual(model: DiracModel, rho: Field) -> Field:
    return apply_P_dual(model, apply_P_dual(model, rho))


def _residuals(model, field, pfield, proj) -> dict[int, tuple[float, float]]:
    out = {}
    for c in COMPONENTS:
        r = float(c)
        fv = model.profile(r)
        a = b = 0.0
        for k, v in field.modes.items():
            pi = proj(c, k)
            a = max(a, float(np.linalg.norm(pi @ v(r, fv))))
            if k in pfield.modes:
                b = max(b, float(np.linalg.norm(pi @ pfield.modes[k](r, fv))))
        out[c] = (a, b)
    return out


def apply_B(model: DiracModel, phi: Field, tol: float = DEFAULT_TOL) -> dict[int, tuple[float, float]]:
    """Per component: (max_k |Pi_A^+ phi_k|, max_k |Pi_A^+ (P phi)_k|) at the boundary."""
    return _residuals(model, phi, apply_P(model, phi),
                      lambda c, k: projector_A(model, c, k, tol).matrix)


def apply_B_dual(model: DiracModel, rho: Field, tol: float = DEFAULT_TOL) -> dict[int, tuple[float, float]]:
    """Same for B~ = Pi_{A#}^+ + Pi_{A#}^+ P~ on the dual side (rho mode j pairs with k = -j)."""
    return _residuals(model, rho, apply_P_dual(model, rho),
                      lambda c, j: projector_sharp(model, c, tuple(-x for x in j), tol).matrix)


def compatible_field(model: DiracModel, degree: int, k=None, rng=None, dual: bool = False,
                     extra=None) -> Field:
    """Random polynomial field (one mode) satisfying B phi = 0, or B~ rho = 0 if ``dual``.

    ``extra`` is an optional list of (r, projector) pairs imposing further
    pointwise conditions.
    """
    rng = np.random.default_rng(rng)
    k = _mode((0,) * model.n_tangential if k is None else k, model)
    mdl = dual_model(model) if dual else model
    ell = model.ell
    th_m = mdl.rep.normal
    pot = mode_potential(mdl, k)
    rows = []
    n = degree + 1
    for c in COMPONENTS:
        r = float(c)
        fv = model.profile(r)
        if dual:
            pi = projector_sharp(model, c, tuple(-x for x in k)).matrix
        else:
            pi = projector_A(model, c, k).matrix
        powers = np.array([r ** j for j in range(n)])
        dpowers = np.array([j * r ** (j - 1) if j else 0.0 for j in range(n)])
        val = np.kron(powers[None, :], np.eye(ell))
        der = np.kron(dpowers[None, :], th_m) + pot(r, fv) @ val
        rows += [pi @ val, pi @ der]
    for r, pi in extra or ():
        powers = np.array([r ** j for j in range(n)])
        rows.append(pi @ np.kron(powers[None, :], np.eye(ell)))
    basis = scipy.linalg.null_space(np.vstack(rows))
    if basis.shape[1] == 0:
        raise ValueError("no nonzero compatible field of this degree")
    coef = basis @ (rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1]))
    coef = coef.reshape(n, ell)
    cls = DualField if dual else Field
    return cls({k: Radial.poly(coef)}, ell, model.n_tangential)
