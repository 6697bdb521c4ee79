"""Model problems on T^{m-1} x [0, 1] with metric exp(2 f(r)) dtheta^2 + dr^2.

Two regimes are supported:

* flat-twisted: f == 0, P = Theta_m d_r + Theta_a d_a + delta1 Theta_m gamma0,
  written with the compatible connection omega_a = rho_a Id;
* warped-compatible: delta1 = 0, connection omega_a = f'/2 gamma_m gamma_a.

Every model stores its connection and endomorphism data explicitly, so derived
structures (the dual model, sign flip, dimension lift) are models as well.
Frame indices run 0..m-1; the last index is the radial direction.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .clifford import CliffordRep
from .radial import Radial, polyder, polyval

__all__ = [
    "WarpProfile",
    "BoundaryComponent",
    "DiracModel",
    "CircleModel",
    "ModelError",
    "assemble_flat_model",
    "assemble_warped_model",
    "christoffel",
    "connection_defects",
    "second_ff",
    "flip_sign",
    "COMPONENTS",
]

COMPONENTS = (0, 1)
PROFILE_TOL = 1e-14


class ModelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WarpProfile:
    """Polynomial warp f(r) = sum_n coeffs[n] r^n with f(0) = f(1) = 0."""

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        object.__setattr__(self, "coeffs", c)
        for r in (0.0, 1.0):
            if abs(self(r)) > PROFILE_TOL:
                raise ModelError(f"warp profile must vanish at r={r:g}, got f={self(r):.3e}")

    @classmethod
    def from_roots_scale(cls, scale: float) -> "WarpProfile":
        """f = scale * r (1 - r)."""
        return cls(np.array([0.0, scale, -scale]))

    def __call__(self, r):
        return polyval(self.coeffs, r).real

    @property
    def d1(self) -> np.ndarray:
        return polyder(self.coeffs).real

    @property
    def d2(self) -> np.ndarray:
        return polyder(self.d1).real

    def prime(self, r):
        return polyval(self.d1, r).real

    def is_flat(self) -> bool:
        return not np.any(self.coeffs)


@dataclass(frozen=True)
class BoundaryComponent:
    location: int  # 0 or 1
    eps: int  # +1 at r = 0, -1 at r = 1: the inward normal is eps * d_r
    laa: float


def _eps(component: int) -> int:
    if component not in COMPONENTS:
        raise ModelError(f"boundary component must be 0 or 1, got {component}")
    return 1 if component == 0 else -1


@dataclass(frozen=True, eq=False)
class DiracModel:
    """All data defining P = gamma_i nabla_{e_i} + psi_P and A on both boundary components.

    ``omega[a]`` is the connection 1-form evaluated on the orthonormal frame
    vector e_a = exp(-f) d_a; omega(e_m) = 0 in every supported regime.
    ``psi_A[c]`` is the endomorphism part of A on component c.
    """

    rep: CliffordRep
    profile: WarpProfile
    omega: tuple
    psi_P: Radial
    psi_A: tuple
    regime: str
    laa_sign: int = -1
    delta1: float = 0.0
    delta2: float = 0.0
    twist: tuple = ()

    @property
    def m(self) -> int:
        return self.rep.m

    @property
    def ell(self) -> int:
        return self.rep.ell

    @property
    def n_tangential(self) -> int:
        return self.m - 1

    def eps(self, component: int) -> int:
        return _eps(component)

    def gamma_m(self, component: int) -> np.ndarray:
        """gamma(inward unit normal) on the given component."""
        return _eps(component) * self.rep.normal

    @property
    def boundary(self) -> tuple[BoundaryComponent, BoundaryComponent]:
        return tuple(BoundaryComponent(c, _eps(c), second_ff(self, c)) for c in COMPONENTS)

    def density(self) -> Radial:
        """Volume density g = exp((m-1) f)."""
        return Radial({self.m - 1: np.ones(1)}, ())

    def omega_at(self, r: float) -> np.ndarray:
        """Frame connection matrices omega(e_a) at radius r, shape (m-1, ell, ell)."""
        fv = self.profile(r)
        return np.array([w(r, fv) for w in self.omega]).reshape(self.m - 1, self.ell, self.ell)


@dataclass(frozen=True, eq=False)
class CircleModel:
    """Closed model: the circle of length 2 pi with P = Theta_1 d_theta + psi."""

    rep: CliffordRep
    psi: np.ndarray

    def __post_init__(self):
        if self.rep.m != 1:
            raise ModelError("circle model needs a rank-one Clifford structure")
        object.__setattr__(self, "psi", np.asarray(self.psi, dtype=complex))

    @property
    def ell(self) -> int:
        return self.rep.ell

    def symbol(self, k: int) -> np.ndarray:
        """P acting on the Fourier mode exp(i k theta)."""
        return 1j * k * self.rep.theta[0] + self.psi


def _check_rep(m: int, rep: CliffordRep):
    if rep.m != m:
        raise ModelError(f"representation has m={rep.m}, model needs m={m}")


def assemble_flat_model(m: int, rep: CliffordRep, delta1: float, delta2: float,
                        twist=None) -> DiracModel:
    """Flat model with the twisted compatible connection omega_a = twist_a Id."""
    _check_rep(m, rep)
    twist = tuple(float(x) for x in (np.zeros(m - 1) if twist is None else twist))
    if len(twist) != m - 1:
        raise ModelError(f"need {m - 1} twist constants, got {len(twist)}")
    if delta1 < 0:
        raise ModelError("delta1 must be >= 0")
    ell = rep.ell
    eye = np.eye(ell)
    th_m, g0 = rep.normal, rep.gamma0
    omega = tuple(Radial.const(t * eye) for t in twist)
    psi_P = delta1 * th_m @ g0 - sum((t * th for t, th in zip(twist, rep.tangential)),
                                     np.zeros((ell, ell)))
    psi_A = []
    for c in COMPONENTS:
        twist_part = sum((t * th_m @ th for t, th in zip(twist, rep.tangential)),
                         np.zeros((ell, ell)))
        psi_A.append(delta2 * g0 + _eps(c) * twist_part)
    return DiracModel(rep, WarpProfile(), omega, Radial.const(psi_P), tuple(psi_A),
                      regime="flat", delta1=float(delta1), delta2=float(delta2), twist=twist)


def assemble_warped_model(m: int, rep: CliffordRep, profile: WarpProfile, delta2: float,
                          laa_sign: int = -1) -> DiracModel:
    """Warped product with the compatible connection omega_a = f'/2 gamma_m gamma_a."""
    _check_rep(m, rep)
    if m < 2 and not profile.is_flat():
        raise ModelError("a nontrivial warp needs m >= 2")
    th_m, g0 = rep.normal, rep.gamma0
    fp = profile.d1
    omega = tuple(Radial.poly(0.5 * np.multiply.outer(fp, th_m @ th)) for th in rep.tangential)
    psi_P = Radial.poly(-0.5 * (m - 1) * np.multiply.outer(fp, th_m))
    psi_A = tuple(-0.5 * (m - 1) * _eps(c) * profile.prime(float(c)) * np.eye(rep.ell)
                  + delta2 * g0 for c in COMPONENTS)
    return DiracModel(rep, profile, omega, psi_P, psi_A, regime="warped", laa_sign=laa_sign,
                      delta1=0.0, delta2=float(delta2), twist=())


def second_ff(model: DiracModel, component: int) -> float:
    """Trace L_aa of the second fundamental form with respect to the inward normal.

    ``model.laa_sign`` selects the orientation convention; -1 is the one under
    which the coefficient formulas reproduce the heat flow.
    """
    m = model.m
    return float(model.laa_sign * _eps(component) * (m - 1) * model.profile.prime(float(component)))


def flip_sign(model: DiracModel) -> DiracModel:
    """Replace P by -P; the connection and A are unchanged."""
    return replace(model, rep=model.rep.negated(), psi_P=-model.psi_P)


@dataclass(frozen=True)
class Christoffel:
    upper: np.ndarray  # upper[i, j, k] = Gamma_{ij}^k
    lower: np.ndarray  # lower[i, j, k] = Gamma_{ijk} = g_{kl} Gamma_{ij}^l


def christoffel(model: DiracModel, r: float) -> Christoffel:
    """Levi-Civita symbols of exp(2f) dtheta^2 + dr^2 in coordinates (theta_1.., r).

    Computed from the metric derivatives directly.
    """
    m = model.m
    f, fp = model.profile(r), model.profile.prime(r)
    g = np.diag([np.exp(2 * f)] * (m - 1) + [1.0])
    ginv = np.diag(1.0 / np.diag(g))
    dg = np.zeros((m, m, m))  # dg[l, i, j] = d_l g_ij
    dg[m - 1, : m - 1, : m - 1] = np.eye(m - 1) * 2 * fp * np.exp(2 * f)
    # Gamma_{ijk} = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij)
    lower = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    upper = np.einsum("ijl,lk->ijk", lower, ginv)
    return Christoffel(upper=upper, lower=lower)


def connection_defects(model: DiracModel, r: float) -> np.ndarray:
    """Max-norm of gamma_{j;i} = d_i gamma_j - Gamma_ij^k gamma_k + [omega_i, gamma_j].

    Uses coordinate gammas gamma_a = exp(f) Theta_a, gamma_m = Theta_m and the
    coordinate connection omega_a = exp(f) omega(e_a). Returns an (m, m) array
    indexed by (i, j).
    """
    m = model.m
    f, fp = model.profile(r), model.profile.prime(r)
    ef = np.exp(f)
    th = model.rep.theta
    gam = np.array([ef * th[a] for a in range(m - 1)] + [th[m - 1]])
    dgam = np.zeros_like(gam)  # only d_r is nonzero
    dgam[: m - 1] = fp * gam[: m - 1]
    om = np.zeros_like(gam)
    if m > 1:
        om[: m - 1] = ef * model.omega_at(r)
    G = christoffel(model, r).upper
    out = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            d = dgam[j] if i == m - 1 else 0 * dgam[j]
            val = d - np.einsum("k,kab->ab", G[i, j], gam) + om[i] @ gam[j] - gam[j] @ om[i]
            out[i, j] = np.abs(val).max()
    return out
