"""Closed-form heat content coefficients beta_0, beta_1, beta_2 and the identities they obey.

Spectral conditions B = Pi_A^+ (+) Pi_A^+ P, mixed conditions
Xi_+ phi = 0, Xi_-(nabla_{e_m} + S) phi = 0, the closed circle, and the
structural identities (Green formula, duality symmetry, recursion, sign
invariance, dimension lift) used as checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, pi, sqrt
from typing import Mapping

import numpy as np

from .clifford import CliffordRep
from .errors import BoundaryIncompatible
from .fields import Field, integrate_boundary, integrate_M, trace
from .model import COMPONENTS, CircleModel, DiracModel, ModelError, assemble_flat_model, second_ff
from .radial import Radial
from .spectral import (
    DEFAULT_TOL,
    apply_B,
    apply_D,
    apply_D_dual,
    apply_P,
    apply_P_dual,
    boundary_A,
    dual_model,
    mode_potential,
    projector_A,
    projector_sharp,
    psi_A_sharp,
    sharp_A,
    xi,
)

__all__ = [
    "CONSTANTS",
    "CoefficientResult",
    "beta_spectral",
    "beta_mixed",
    "beta_closed",
    "weight_one",
    "normal_connection",
    "equivalent_mixed_S",
    "reduce_to_interval",
    "greens_terms",
    "greens_defect",
    "symmetry_defect",
    "recursion_defect",
    "sign_defect",
    "lift_dimension",
    "lift_field",
]

# universal constants of the beta_1 and beta_2 formulas
CONSTANTS = {
    "c0": -2.0 / sqrt(pi),
    "c2": 0.5,
    "c3": 0.5,
    "c4": -0.5,
    "c5": -0.5,
}


@dataclass(frozen=True)
class CoefficientResult:
    n: int
    interior: complex
    boundary: tuple  # one entry per boundary component (r = 0, r = 1)

    @property
    def value(self) -> complex:
        return self.interior + sum(self.boundary)

    def as_dict(self) -> dict:
        v = self.value
        return {
            "n": self.n,
            "value": [v.real, v.imag],
            "interior": [complex(self.interior).real, complex(self.interior).imag],
            "boundary": [[complex(b).real, complex(b).imag] for b in self.boundary],
        }


def _neg(k):
    return tuple(-x for x in k)


def _paired(phi: Field, rho: Field):
    return [k for k in phi.modes if _neg(k) in rho.modes]


def _bdry(model, c, pointwise: complex) -> complex:
    return integrate_boundary(model, {c: pointwise})


def _check_n(n):
    if n not in (0, 1, 2):
        raise ValueError(f"only n in (0, 1, 2) is available, got {n}")


def weight_one(model: DiracModel, component: int, k) -> np.ndarray:
    """Endomorphism c2 (A + A~#) + c3 L + c4 (gamma_m psi_P - psi_P gamma_m) + c5 (psi_A + psi~_A#)."""
    c = CONSTANTS
    r = float(component)
    gm = model.gamma_m(component)
    psi_p = model.psi_P(r, model.profile(r))
    a = boundary_A(model, component, k)
    a_sharp_t = sharp_A(model, component, k).T
    lmat = second_ff(model, component) * np.eye(model.ell)
    return (c["c2"] * (a + a_sharp_t) + c["c3"] * lmat
            + c["c4"] * (gm @ psi_p - psi_p @ gm)
            + c["c5"] * (model.psi_A[component] + psi_A_sharp(model, component).T))


def beta_spectral(n: int, phi: Field, rho: Field, model: DiracModel, tol: float = DEFAULT_TOL) -> CoefficientResult:
    """beta_n for spectral boundary conditions, n = 0, 1, 2."""
    _check_n(n)
    if n == 0:
        return CoefficientResult(0, integrate_M(phi, rho, model), (0j, 0j))
    keys = _paired(phi, rho)
    if n == 1:
        out = []
        for c in COMPONENTS:
            pv, rv = trace(phi, model.profile, c), trace(rho, model.profile, c)
            s = 0j
            for k in keys:
                pa = projector_A(model, c, k, tol).matrix
                ps = projector_sharp(model, c, k, tol).matrix
                s += (ps @ rv[_neg(k)]) @ (pa @ pv[k])
            out.append(CONSTANTS["c0"] * _bdry(model, c, s))
        return CoefficientResult(1, 0j, tuple(out))

    interior = -integrate_M(apply_D(model, phi), rho, model)
    p_phi, p_rho = apply_P(model, phi), apply_P_dual(model, rho)
    out = []
    for c in COMPONENTS:
        gm = model.gamma_m(c)
        pv, rv = trace(phi, model.profile, c), trace(rho, model.profile, c)
        ppv, prv = trace(p_phi, model.profile, c), trace(p_rho, model.profile, c)
        s = 0j
        for k in keys:
            j = _neg(k)
            pa = projector_A(model, c, k, tol).matrix
            ps = projector_sharp(model, c, k, tol).matrix
            zero = np.zeros(model.ell)
            s -= rv[j] @ (gm @ pa @ ppv.get(k, zero))
            s -= prv.get(j, zero) @ (gm @ pa @ pv[k])
            s += (ps @ rv[j]) @ (weight_one(model, c, k) @ pa @ pv[k])
        out.append(_bdry(model, c, s))
    return CoefficientResult(2, interior, tuple(out))


# -- mixed conditions -----------------------------------------------------------

def normal_connection(model: DiracModel, r: float) -> np.ndarray:
    """Normal component omega_r of the connection determined by D = P^2.

    Writing D = -d_r^2 + B d_r + (tangential, zeroth order), the connection
    is omega_r = -(B + (m-1) f') / 2; B = Theta_m C + C Theta_m does not
    depend on the Fourier mode.
    """
    th_m = model.rep.normal
    cmat = mode_potential(model, (0,) * model.n_tangential)(r, model.profile(r))
    bmat = th_m @ cmat + cmat @ th_m
    return -0.5 * (bmat + (model.m - 1) * model.profile.prime(r) * np.eye(model.ell))


def equivalent_mixed_S(model: DiracModel, component: int) -> np.ndarray:
    """S for which the mixed conditions coincide with the spectral ones on radial data.

    Valid when Pi_A^+ = Xi_+ on the zero mode, i.e. A = delta2 gamma0 with delta2 > 0.
    """
    r = float(component)
    cmat = mode_potential(model, (0,) * model.n_tangential)(r, model.profile(r))
    return -model.eps(component) * (model.rep.normal @ cmat + normal_connection(model, r))


def _s_matrix(S, component):
    if isinstance(S, Mapping):
        return np.asarray(S[component], dtype=complex)
    return np.asarray(S, dtype=complex)


def beta_mixed(n: int, phi: Field, rho: Field, model: DiracModel, S) -> CoefficientResult:
    """beta_n for Xi_+ phi = 0, Xi_-(nabla_{e_m} + S) phi = 0.

    ``S`` is a matrix used on both components or a mapping component -> matrix.
    """
    _check_n(n)
    if n == 0:
        return CoefficientResult(0, integrate_M(phi, rho, model), (0j, 0j))
    xp, xm = xi(model.rep, 1), xi(model.rep, -1)
    keys = _paired(phi, rho)
    if n == 1:
        out = []
        for c in COMPONENTS:
            pv, rv = trace(phi, model.profile, c), trace(rho, model.profile, c)
            s = sum(((xp.T @ rv[_neg(k)]) @ (xp @ pv[k]) for k in keys), 0j)
            out.append(CONSTANTS["c0"] * _bdry(model, c, s))
        return CoefficientResult(1, 0j, tuple(out))

    interior = -integrate_M(apply_D(model, phi), rho, model)
    fp = model.profile.d1
    dphi = phi.map(lambda k, v: v.deriv(fp))
    drho = rho.map(lambda k, v: v.deriv(fp))
    out = []
    for c in COMPONENTS:
        eps = model.eps(c)
        r = float(c)
        om = normal_connection(model, r)
        smat = _s_matrix(S, c)
        lval = second_ff(model, c)
        pv, rv = trace(phi, model.profile, c), trace(rho, model.profile, c)
        dpv, drv = trace(dphi, model.profile, c), trace(drho, model.profile, c)
        zero = np.zeros(model.ell)
        s = 0j
        for k in keys:
            j = _neg(k)
            nab_phi = eps * (dpv.get(k, zero) + om @ pv[k])
            nab_rho = eps * (drv.get(j, zero) - om.T @ rv[j])
            s += rv[j] @ (xm @ (nab_phi + smat @ pv[k]))
            s += 0.5 * lval * (rv[j] @ (xp @ pv[k]))
            s -= nab_rho @ (xp @ pv[k])
        out.append(_bdry(model, c, s))
    return CoefficientResult(2, interior, tuple(out))


def reduce_to_interval(model: DiracModel) -> DiracModel:
    """One-dimensional operator D_0 on [0, 1] acting on radial data of a flat model."""
    if model.regime != "flat" or not model.profile.is_flat():
        raise ModelError("interval reduction is implemented for flat models")
    rep = CliffordRep(model.rep.normal[None], model.rep.gamma0)
    return assemble_flat_model(1, rep, model.delta1, model.delta2)


def radial_restriction(field: Field) -> Field:
    """Zero mode of a field viewed as data on the interval."""
    k0 = (0,) * field.n_tangential
    modes = {(): field.modes[k0]} if k0 in field.modes else {}
    return type(field)(modes, field.ell, 0)


# -- closed circle ----------------------------------------------------------------

def beta_closed(n: int, phi: Field, rho: Field, model: CircleModel) -> complex:
    """beta_n on the circle: 0 for odd n, (-1)^j / j! int <D^j phi, rho> for n = 2j.

    Fields carry one tangential mode index and r-independent coefficients.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n % 2:
        return 0j
    j = n // 2
    total = 0j
    for k, v in phi.modes.items():
        kk = _neg(k)
        if kk not in rho.modes:
            continue
        dj = np.linalg.matrix_power(model.symbol(k[0]) @ model.symbol(k[0]), j)
        total += rho.modes[kk](0.0) @ (dj @ v(0.0))
    return complex((-1) ** j / factorial(j) * 2 * pi * total)


# -- identities -------------------------------------------------------------------

def greens_terms(phi: Field, rho: Field, model: DiracModel, tol: float = DEFAULT_TOL) -> tuple[complex, complex]:
    """Both sides of int <D phi, rho> - <phi, D~ rho> = -int_dM {...} in projector form."""
    lhs = integrate_M(apply_D(model, phi), rho, model) - integrate_M(phi, apply_D_dual(model, rho), model)
    p_phi, p_rho = apply_P(model, phi), apply_P_dual(model, rho)
    keys = sorted(set(_paired(phi, rho)) | set(_paired(p_phi, rho)) | set(_paired(phi, p_rho)))
    rhs = 0j
    for c in COMPONENTS:
        gm = model.gamma_m(c)
        pv, rv = trace(phi, model.profile, c), trace(rho, model.profile, c)
        ppv, prv = trace(p_phi, model.profile, c), trace(p_rho, model.profile, c)
        zero = np.zeros(model.ell)
        s = 0j
        for k in keys:
            j = _neg(k)
            pa = projector_A(model, c, k, tol).matrix
            ps = projector_sharp(model, c, k, tol).matrix
            f0, f1 = pv.get(k, zero), ppv.get(k, zero)
            r0, r1 = rv.get(j, zero), prv.get(j, zero)
            s += r0 @ (gm @ pa @ f1)
            s += (gm.T @ ps @ r0) @ f1
            s += (gm.T @ ps @ r1) @ f0
            s += r1 @ (gm @ pa @ f0)
        rhs -= _bdry(model, c, s)
    return complex(lhs), complex(rhs)


def greens_defect(phi: Field, rho: Field, model: DiracModel, tol: float = DEFAULT_TOL) -> float:
    lhs, rhs = greens_terms(phi, rho, model, tol)
    return abs(lhs - rhs)


def symmetry_defect(n: int, phi: Field, rho: Field, model: DiracModel) -> float:
    """|beta_n(phi, rho, D, B) - beta_n(rho, phi, D~, B~)|."""
    a = beta_spectral(n, phi, rho, model).value
    b = beta_spectral(n, rho, phi, dual_model(model)).value
    return abs(a - b)


def recursion_defect(phi: Field, rho: Field, model: DiracModel, bc_tol: float = 1e-10) -> float:
    """|beta_2(phi, rho) + beta_0(D phi, rho)|, requiring B phi = 0."""
    res = apply_B(model, phi)
    worst = max(max(v) for v in res.values())
    if worst > bc_tol:
        raise BoundaryIncompatible(f"B phi does not vanish (residual {worst:.2e})")
    b2 = beta_spectral(2, phi, rho, model).value
    b0 = beta_spectral(0, apply_D(model, phi), rho, model).value
    return abs(b2 + b0)


def sign_defect(n: int, phi: Field, rho: Field, model: DiracModel) -> float:
    """|beta_n for P| - |beta_n for -P|; the boundary operator A is unchanged."""
    from .model import flip_sign

    return abs(beta_spectral(n, phi, rho, model).value - beta_spectral(n, phi, rho, flip_sign(model)).value)


# -- lift to M x S^1 ----------------------------------------------------------------

def _blk(a, b):
    z = np.zeros_like(a)
    return np.block([[a, z], [z, b]])


def lift_dimension(model: DiracModel) -> DiracModel:
    """Model on M x S^1 with doubled fiber, P = diag(P_0, -P_0) + J d_theta.

    J = [[0, -Id], [Id, 0]] squares to -Id and anticommutes with the doubled
    generators; the new grading is diag(gamma0, -gamma0).
    """
    if not model.profile.is_flat():
        raise ModelError("dimension lift is implemented for flat models")
    ell = model.ell
    eye = np.eye(ell)
    jmat = np.block([[0 * eye, -eye], [eye, 0 * eye]])
    th = model.rep.theta
    tang = [_blk(t, -t) for t in th[:-1]] + [jmat]
    theta = np.array(tang + [_blk(th[-1], -th[-1])])
    rep = CliffordRep(theta, _blk(model.rep.gamma0, -model.rep.gamma0))

    def rblk(x: Radial, sign: int) -> Radial:
        terms = {j: np.array([_blk(ci, sign * ci) for ci in c]) for j, c in x.terms.items()}
        return Radial(terms, (2 * ell, 2 * ell))

    omega = tuple(rblk(w, 1) for w in model.omega) + (Radial.zeros((2 * ell, 2 * ell)),)
    return DiracModel(
        rep=rep,
        profile=model.profile,
        omega=omega,
        psi_P=rblk(model.psi_P, -1),
        psi_A=tuple(_blk(p, p) for p in model.psi_A),
        regime="flat-lift",
        laa_sign=model.laa_sign,
        delta1=model.delta1,
        delta2=model.delta2,
        twist=model.twist + (0.0,),
    )


def lift_field(field: Field, scale: float = 1.0) -> Field:
    """(u, 0) in the doubled fiber, constant in the new angle, times ``scale``."""
    ell = field.ell
    modes = {}
    for k, v in field.modes.items():
        terms = {j: np.concatenate([c, np.zeros_like(c)], axis=1) * scale for j, c in v.terms.items()}
        modes[k + (0,)] = Radial(terms, (2 * ell,))
    return type(field)(modes, 2 * ell, field.n_tangential + 1)
