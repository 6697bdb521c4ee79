"""Exact radial functions of the form  sum_j exp(j * f(r)) * p_j(r).

``p_j`` are polynomials with array-valued (vector or matrix) coefficients and
``f`` is the warp profile. The class is closed under addition, matrix products
and d/dr, which is all the operators on the model geometries need.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

__all__ = ["Radial", "polyval", "polyder", "polymul"]


def polyval(coeffs: np.ndarray, r) -> np.ndarray:
    """Evaluate an ascending-coefficient polynomial with array coefficients.

    Returns shape ``r.shape + coeffs.shape[1:]``.
    """
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape + coeffs.shape[1:], dtype=complex)
    rr = r.reshape(r.shape + (1,) * (coeffs.ndim - 1))
    for c in coeffs[::-1]:
        out = out * rr + c
    return out


def polyder(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.shape[0] <= 1:
        return np.zeros((1,) + coeffs.shape[1:], dtype=complex)
    powers = np.arange(1, coeffs.shape[0]).reshape((-1,) + (1,) * (coeffs.ndim - 1))
    return coeffs[1:] * powers


def polymul(a: np.ndarray, b: np.ndarray, op=np.matmul) -> np.ndarray:
    """Product of two polynomials whose coefficients combine through ``op``."""
    probe = op(a[0], b[0])
    out = np.zeros((a.shape[0] + b.shape[0] - 1,) + np.shape(probe), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            out[i + j] += op(a[i], b[j])
    return out


def _padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(a.shape[0], b.shape[0])
    s = np.zeros((n,) + a.shape[1:], dtype=complex)
    s[: a.shape[0]] += a
    s[: b.shape[0]] += b
    return s


def _trim(c: np.ndarray) -> np.ndarray:
    n = c.shape[0]
    while n > 1 and not np.any(c[n - 1]):
        n -= 1
    return c[:n]


class Radial:
    """Finite sum of ``exp(j f(r)) p_j(r)`` keyed by the integer ``j``."""

    __slots__ = ("terms", "shape")
    __array_ufunc__ = None  # make ndarray @ Radial defer to __rmatmul__

    def __init__(self, terms: Mapping[int, np.ndarray], shape: tuple[int, ...] | None = None):
        clean = {}
        for j, c in terms.items():
            c = np.asarray(c, dtype=complex)
            if c.ndim == 0:
                c = c.reshape(1)
            if shape is None:
                shape = c.shape[1:]
            elif c.shape[1:] != tuple(shape):
                raise ValueError(f"inconsistent coefficient shape {c.shape[1:]} vs {shape}")
            c = _trim(c)
            if np.any(c):
                clean[int(j)] = c
        if shape is None:
            raise ValueError("shape required for an empty Radial")
        self.terms = dict(sorted(clean.items()))
        self.shape = tuple(shape)

    # -- construction -------------------------------------------------------
    @classmethod
    def zeros(cls, shape) -> "Radial":
        return cls({}, tuple(shape))

    @classmethod
    def const(cls, value) -> "Radial":
        value = np.asarray(value, dtype=complex)
        return cls({0: value[None]}, value.shape)

    @classmethod
    def poly(cls, coeffs, exp_index: int = 0) -> "Radial":
        """``exp(exp_index f) * sum_n coeffs[n] r^n``."""
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls({exp_index: coeffs}, coeffs.shape[1:])

    # -- algebra ------------------------------------------------------------
    def __add__(self, other: "Radial") -> "Radial":
        if not isinstance(other, Radial):
            return NotImplemented
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        terms = {j: c.copy() for j, c in self.terms.items()}
        for j, c in other.terms.items():
            terms[j] = _padd(terms[j], c) if j in terms else c
        return Radial(terms, self.shape)

    def __neg__(self) -> "Radial":
        return Radial({j: -c for j, c in self.terms.items()}, self.shape)

    def __sub__(self, other: "Radial") -> "Radial":
        return self + (-other)

    def __mul__(self, s) -> "Radial":
        if isinstance(s, Radial):
            return self._combine(s, np.multiply)
        return Radial({j: c * s for j, c in self.terms.items()}, self.shape)

    __rmul__ = __mul__

    def _combine(self, other: "Radial", op) -> "Radial":
        terms: dict[int, np.ndarray] = {}
        shape = None
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                prod = polymul(a, b, op)
                shape = prod.shape[1:]
                key = i + j
                terms[key] = _padd(terms[key], prod) if key in terms else prod
        if shape is None:
            shape = np.shape(op(np.zeros(self.shape), np.zeros(other.shape)))
        return Radial(terms, shape)

    def __matmul__(self, other) -> "Radial":
        if isinstance(other, Radial):
            return self._combine(other, np.matmul)
        other = np.asarray(other, dtype=complex)
        return Radial({j: c @ other for j, c in self.terms.items()},
                      np.shape(np.zeros(self.shape) @ np.zeros(other.shape)))

    def __rmatmul__(self, other) -> "Radial":
        other = np.asarray(other, dtype=complex)
        return Radial({j: np.array([other @ ci for ci in c]) for j, c in self.terms.items()},
                      np.shape(np.zeros(other.shape) @ np.zeros(self.shape)))

    @property
    def T(self) -> "Radial":
        return Radial({j: np.swapaxes(c, -1, -2) for j, c in self.terms.items()},
                      self.shape[:-2] + (self.shape[-1], self.shape[-2]))

    def iszero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((c.shape[0] - 1 for c in self.terms.values()), default=0)

    # -- calculus -----------------------------------------------------------
    def deriv(self, fprime: np.ndarray) -> "Radial":
        """d/dr, given the ascending coefficients of f'."""
        fprime = np.asarray(fprime, dtype=complex)
        out = Radial.zeros(self.shape)
        for j, c in self.terms.items():
            piece = Radial({j: polyder(c)}, self.shape)
            if j != 0:
                piece = piece + Radial({j: polymul(fprime, c, np.multiply) * j}, self.shape)
            out = out + piece
        return out

    def __call__(self, r, fvals=None) -> np.ndarray:
        """Evaluate at radii ``r`` given ``fvals = f(r)`` (needed if any j != 0)."""
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape + self.shape, dtype=complex)
        for j, c in self.terms.items():
            val = polyval(c, r)
            if j != 0:
                if fvals is None:
                    raise ValueError("warp values required to evaluate exponential terms")
                w = np.exp(j * np.asarray(fvals, dtype=float))
                val = val * w.reshape(w.shape + (1,) * len(self.shape))
            out = out + val
        return out

    def __repr__(self) -> str:
        return f"Radial(shape={self.shape}, exps={list(self.terms)}, degree={self.degree})"
