"""Clifford module structures: generators Theta_1..Theta_m and a grading gamma_0.

Matrices are complex numpy arrays. Covectors are stored as plain vectors and
paired bilinearly with vectors, so the formal dual of an endomorphism is its
transpose (not its conjugate transpose).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import ceil

import numpy as np

__all__ = ["CliffordRep", "build_rep", "dual_endo", "relation_defect", "anticommutator"]

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def anticommutator(a, b):
    return a @ b + b @ a


def _kron_all(mats):
    return reduce(np.kron, mats)


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """Generators ``theta[i]`` with theta_i theta_j + theta_j theta_i = -2 delta_ij
    and a grading ``gamma0`` (gamma0^2 = Id) anticommuting with every theta_i.

    The last generator ``theta[m-1]`` plays the role of the normal direction.
    """

    theta: np.ndarray  # shape (m, ell, ell)
    gamma0: np.ndarray  # shape (ell, ell)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=complex)
        if theta.ndim != 3 or theta.shape[1] != theta.shape[2]:
            raise ValueError(f"theta must have shape (m, ell, ell), got {theta.shape}")
        gamma0 = np.asarray(self.gamma0, dtype=complex)
        if gamma0.shape != theta.shape[1:]:
            raise ValueError("gamma0 shape does not match generators")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "gamma0", gamma0)

    @property
    def m(self) -> int:
        return self.theta.shape[0]

    @property
    def ell(self) -> int:
        return self.theta.shape[1]

    @property
    def normal(self) -> np.ndarray:
        """Theta_m, the generator attached to the radial direction."""
        return self.theta[-1]

    @property
    def tangential(self) -> np.ndarray:
        return self.theta[:-1]

    def negated(self) -> "CliffordRep":
        """Representation of the leading symbol of -P."""
        return CliffordRep(-self.theta, self.gamma0)

    def conjugated(self, u: np.ndarray) -> "CliffordRep":
        """Change of basis X -> U X U^{-1}."""
        uinv = np.linalg.inv(u)
        return CliffordRep(u @ self.theta @ uinv, u @ self.gamma0 @ uinv)

    def dual(self) -> "CliffordRep":
        """Structure induced on the dual bundle: gamma -> -gamma^T, gamma0 -> gamma0^T."""
        return CliffordRep(-np.transpose(self.theta, (0, 2, 1)), self.gamma0.T)


def _hermitian_generators(n: int) -> list[np.ndarray]:
    """2n mutually anticommuting Hermitian involutions on (C^2)^{x n}, plus chirality."""
    gens = []
    for j in range(n):
        head = [_Z] * j
        tail = [_I2] * (n - j - 1)
        gens.append(_kron_all(head + [_X] + tail))
        gens.append(_kron_all(head + [_Y] + tail))
    gens.append(_kron_all([_Z] * n))
    return gens


def build_rep(m: int) -> CliffordRep:
    """Deterministic representation of rank 2^ceil((m+1)/2).

    Theta_i = i * Gamma_i for the Jordan-Wigner generators and gamma0 is the
    (real, diagonal) chirality matrix, i.e. gamma0 = i * Theta_{m+1} with
    Theta_{m+1} = -i * chirality.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    n = ceil((m + 1) / 2)
    gens = _hermitian_generators(n)
    theta = np.array([1j * g for g in gens[:m]])
    return CliffordRep(theta, gens[-1].copy())


def dual_endo(e: np.ndarray) -> np.ndarray:
    """Formal dual of an endomorphism under the bilinear pairing: the transpose."""
    return np.swapaxes(np.asarray(e), -1, -2)


def relation_defect(rep: CliffordRep) -> float:
    """Max-norm violation of the Clifford, grading and anticommutation relations."""
    ell = rep.ell
    eye = np.eye(ell)
    worst = 0.0
    for i in range(rep.m):
        for j in range(rep.m):
            target = -2.0 * eye if i == j else 0.0 * eye
            worst = max(worst, np.abs(anticommutator(rep.theta[i], rep.theta[j]) - target).max())
        worst = max(worst, np.abs(anticommutator(rep.gamma0, rep.theta[i])).max())
    worst = max(worst, np.abs(rep.gamma0 @ rep.gamma0 - eye).max())
    return float(worst)
