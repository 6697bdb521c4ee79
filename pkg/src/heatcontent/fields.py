"""Sections of V (Field) and V* (DualField) as finite Fourier sums of radial functions.

A field is ``sum_k exp(i k.theta) u_k(r)`` with ``u_k`` a :class:`Radial` of
vector shape ``(ell,)``. Covectors are stored as plain vectors; the pairing
<phi, rho> = rho . phi is bilinear, so modes pair only when k_rho = -k_phi.
"""
from __future__ import annotations

from typing import Callable, Mapping

import numpy as np

from .radial import Radial

__all__ = [
    "Field",
    "DualField",
    "d_r",
    "d_theta",
    "trace",
    "boundary_pairing",
    "integrate_M",
    "integrate_boundary",
    "gauss_nodes",
]

TWO_PI = 2.0 * np.pi


class Field:
    """Finite Fourier sum of vector-valued radial functions."""

    def __init__(self, modes: Mapping[tuple, Radial], ell: int | None = None, n_tangential: int | None = None):
        self.modes: dict[tuple[int, ...], Radial] = {}
        for k, v in modes.items():
            k = tuple(int(x) for x in k)
            if n_tangential is None:
                n_tangential = len(k)
            if len(k) != n_tangential:
                raise ValueError(f"mode {k} has wrong length, expected {n_tangential}")
            if ell is None:
                ell = v.shape[0]
            if v.shape != (ell,):
                raise ValueError(f"mode {k}: coefficient shape {v.shape}, expected ({ell},)")
            if not v.iszero():
                self.modes[k] = self.modes[k] + v if k in self.modes else v
        if ell is None or n_tangential is None:
            raise ValueError("ell and n_tangential required for an empty field")
        self.modes = dict(sorted(self.modes.items()))
        self.ell = ell
        self.n_tangential = n_tangential

    @classmethod
    def constant(cls, vec, n_tangential: int = 0, k=None):
        """Constant (in r) vector, optionally in a single Fourier mode ``k``."""
        vec = np.asarray(vec, dtype=complex)
        k = (0,) * n_tangential if k is None else tuple(k)
        return cls({k: Radial.const(vec)}, vec.shape[0], n_tangential)

    @classmethod
    def polynomial(cls, coeffs, n_tangential: int = 0, k=None):
        """``coeffs[n]`` is the vector coefficient of r^n."""
        coeffs = np.asarray(coeffs, dtype=complex)
        k = (0,) * n_tangential if k is None else tuple(k)
        return cls({k: Radial.poly(coeffs)}, coeffs.shape[1], n_tangential)

    def _like(self, modes):
        return type(self)(modes, self.ell, self.n_tangential)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        modes = dict(self.modes)
        for k, v in other.modes.items():
            modes[k] = modes[k] + v if k in modes else v
        return self._like(modes)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, s):
        return self._like({k: v * s for k, v in self.modes.items()})

    __rmul__ = __mul__

    def map(self, fn: Callable[[tuple, Radial], Radial]):
        return self._like({k: fn(k, v) for k, v in self.modes.items()})

    def scaled_by(self, scalar: Radial):
        """Pointwise product with a scalar radial function."""
        return self._like({k: scalar * v for k, v in self.modes.items()})

    def iszero(self) -> bool:
        return not self.modes

    def __repr__(self):
        return f"{type(self).__name__}(ell={self.ell}, modes={list(self.modes)})"


class DualField(Field):
    """Section of the dual bundle V*; same storage as :class:`Field`."""


def d_r(field: Field, profile) -> Field:
    fp = profile.d1
    return field.map(lambda k, v: v.deriv(fp))


def d_theta(field: Field, a: int) -> Field:
    return field.map(lambda k, v: v * (1j * k[a]))


def trace(field: Field, profile, component: int) -> dict[tuple, np.ndarray]:
    r = float(component)
    fv = profile(r)
    return {k: v(r, fv) for k, v in field.modes.items()}


def boundary_pairing(phi_vals: Mapping[tuple, np.ndarray], rho_vals: Mapping[tuple, np.ndarray]) -> complex:
    """sum_k rho_{-k} . phi_k for pointwise (per mode) boundary values."""
    total = 0j
    for k in sorted(phi_vals):
        kk = tuple(-x for x in k)
        if kk in rho_vals:
            total += complex(np.dot(rho_vals[kk], phi_vals[k]))
    return total


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_nodes(n: int = 64, panels: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [0, 1]."""
    key = (n, panels)
    if key not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        edges = np.linspace(0.0, 1.0, panels + 1)
        xs, ws = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            xs.append(0.5 * (b - a) * x + 0.5 * (a + b))
            ws.append(0.5 * (b - a) * w)
        _GL_CACHE[key] = (np.concatenate(xs), np.concatenate(ws))
    return _GL_CACHE[key]


def _check_pair(phi: Field, rho: Field, model):
    if phi.ell != model.ell or rho.ell != model.ell:
        raise ValueError(f"fiber dimension mismatch: model ell={model.ell}, fields {phi.ell}, {rho.ell}")
    if phi.n_tangential != model.m - 1 or rho.n_tangential != model.m - 1:
        raise ValueError(f"mode dimension mismatch: model needs {model.m - 1}")


def integrate_M(phi: Field, rho: Field, model, nodes: int = 64, panels: int = 2) -> complex:
    """int_M <phi, rho> dx with dx = g dr dtheta and g = exp((m-1) f)."""
    _check_pair(phi, rho, model)
    r, w = gauss_nodes(nodes, panels)
    fv = model.profile(r)
    g = np.exp((model.m - 1) * fv)
    total = 0j
    for k, v in phi.modes.items():
        kk = tuple(-x for x in k)
        if kk not in rho.modes:
            continue
        integrand = np.einsum("ni,ni->n", rho.modes[kk](r, fv), v(r, fv))
        total += np.sum(w * g * integrand)
    return complex(TWO_PI ** (model.m - 1) * total)


def integrate_boundary(model, pairing: Callable[[int], complex] | Mapping[int, complex]) -> complex:
    """int_{dM} of a pointwise pairing, given per component (dy = g dtheta)."""
    get = pairing.get if isinstance(pairing, Mapping) else pairing
    total = 0j
    for c in (0, 1):
        val = get(c)
        if val is None:
            continue
        g = np.exp((model.m - 1) * model.profile(float(c)))
        total += g * val
    return complex(TWO_PI ** (model.m - 1) * total)
