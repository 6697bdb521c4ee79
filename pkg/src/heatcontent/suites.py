"""Built-in fixture grid and invariant suites used by ``verify`` and the tests."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .clifford import build_rep, dual_endo, relation_defect
from .coeffs import (
    CONSTANTS,
    beta_spectral,
    greens_terms,
    lift_dimension,
    lift_field,
    recursion_defect,
    sign_defect,
    symmetry_defect,
    weight_one,
)
from .errors import ImaginaryAxisEigenvalue
from .fields import DualField, Field, integrate_M
from .model import (
    COMPONENTS,
    WarpProfile,
    assemble_flat_model,
    assemble_warped_model,
    connection_defects,
    second_ff,
)
from .radial import Radial
from .spectral import (
    apply_D,
    apply_D_dual,
    compatible_field,
    projector_A,
    projector_sharp,
    psi_A_sharp,
)

__all__ = ["Check", "SUITES", "run_suite", "duality_grid", "identity_fixtures", "random_field"]


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)


def random_field(rng, ell, degree, n_tangential=0, modes=None, cls=Field):
    modes = modes or [(0,) * n_tangential]
    out = {}
    for k in modes:
        c = rng.standard_normal((degree + 1, ell)) + 1j * rng.standard_normal((degree + 1, ell))
        out[tuple(k)] = Radial.poly(c)
    return cls(out, ell, n_tangential)


def _ks(m, kmax=3):
    """Modes k in Z^{m-1} with |k| <= kmax."""
    if m == 1:
        return [()]
    rng = range(-kmax, kmax + 1)
    return [k for k in itertools.product(rng, repeat=m - 1) if np.linalg.norm(k) <= kmax]


def duality_grid():
    """(model, component, k) over m in {1,2,3}, |k| <= 3, delta2 in {0.3, 1, 2.7}, both components."""
    for m in (1, 2, 3):
        rep = build_rep(m)
        for d2 in (0.3, 1.0, 2.7):
            models = [assemble_flat_model(m, rep, 0.5, d2, [0.3] * (m - 1))]
            if m > 1:
                models.append(assemble_warped_model(m, rep, WarpProfile.from_roots_scale(0.4), d2))
            for model in models:
                for c in COMPONENTS:
                    for k in _ks(m):
                        yield model, c, k


def algebra_checks() -> list[Check]:
    out = []
    for m in range(1, 6):
        out.append(Check(f"clifford relations m={m}", relation_defect(build_rep(m)), 1e-14))
    rng = np.random.default_rng(7)
    rep = build_rep(3)
    worst = 0.0
    for _ in range(20):
        i, j = rng.integers(0, 3, 2)
        e, f = rep.theta[i] @ rep.gamma0, rep.theta[j] + rng.standard_normal()
        worst = max(worst, np.abs(dual_endo(e @ f) - dual_endo(f) @ dual_endo(e)).max(),
                    np.abs(dual_endo(dual_endo(e)) - e).max())
    out.append(Check("transpose is an involutive anti-homomorphism", worst, 1e-14))
    worst_dual = worst_idem = 0.0
    skipped = 0
    for model, c, k in duality_grid():
        try:
            pa = projector_A(model, c, k).matrix
            ps = projector_sharp(model, c, k).matrix
        except ImaginaryAxisEigenvalue:
            skipped += 1
            continue
        gm = model.gamma_m(c)
        eye = np.eye(model.ell)
        worst_dual = max(worst_dual, np.abs((eye - pa.T) @ gm.T - gm.T @ ps).max())
        worst_idem = max(worst_idem, np.abs(pa @ pa - pa).max(), np.abs(ps @ ps - ps).max())
    note = f"{skipped} singular (component, mode) cases skipped"
    out.append(Check("(Id - Pi^T) gamma^T = gamma^T Pi#", worst_dual, 1e-12, note))
    out.append(Check("projectors idempotent", worst_idem, 1e-12))
    return out


def _structure_models():
    for m in (1, 2, 3):
        rep = build_rep(m)
        yield assemble_flat_model(m, rep, 0.5, 0.7)
        if m > 1:
            yield assemble_flat_model(m, rep, 0.5, 0.7, [0.3] * (m - 1))
            yield assemble_warped_model(m, rep, WarpProfile.from_roots_scale(0.4), 0.7)


def structure_checks() -> list[Check]:
    out = []
    worst_2c = worst_sum = worst_conn = 0.0
    for model in _structure_models():
        for c in COMPONENTS:
            gm = model.gamma_m(c)
            lval = second_ff(model, c)
            eye = np.eye(model.ell)
            pas = psi_A_sharp(model, c)
            worst_2c = max(worst_2c, np.abs(pas - gm.T @ model.psi_A[c].T @ gm.T - lval * eye).max())
            expect = lval * eye + 2 * model.delta2 * model.rep.gamma0
            if model.twist:
                th = model.rep.theta
                expect = expect + 2 * model.eps(c) * sum(t * th[-1] @ th[a] for a, t in enumerate(model.twist))
            worst_sum = max(worst_sum, np.abs(model.psi_A[c] + pas.T - expect).max())
        for r in 0.5 - 0.5 * np.cos(np.pi * (np.arange(10) + 0.5) / 10):
            worst_conn = max(worst_conn, connection_defects(model, r).max())
    out.append(Check("psi_A# = gamma^T psi_A^T gamma^T + L Id", worst_2c, 1e-13))
    out.append(Check("psi_A + psi~_A# = L Id + 2 delta2 gamma0 (+ twist terms)", worst_sum, 1e-13))
    out.append(Check("compatible connection: nabla gamma = 0", worst_conn, 1e-12))
    return out


def identity_fixtures():
    """Models with data used by the identity suite: (label, model, modes)."""
    r1, r2 = build_rep(1), build_rep(2)
    prof = WarpProfile.from_roots_scale(0.4)
    yield "flat m=1 d1=0", assemble_flat_model(1, r1, 0.0, 1.0), [()]
    yield "flat m=1 d1=0.7", assemble_flat_model(1, r1, 0.7, 1.5), [()]
    yield "twisted m=2", assemble_flat_model(2, r2, 0.5, 0.3, [0.3]), [(0,), (1,), (-2,)]
    yield "warped m=2", assemble_warped_model(2, r2, prof, 0.3), [(0,), (1,), (-1,)]
    yield "warped m=3", assemble_warped_model(3, build_rep(3), prof, 0.3), [(0, 0), (1, -1)]


def identity_checks(seed: int = 11) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for label, model, modes in identity_fixtures():
        ntan = model.n_tangential
        g_def = s_def = sg_def = r_def = l_def = 0.0
        for _ in range(3):
            phi = random_field(rng, model.ell, 4, ntan, modes)
            rho = random_field(rng, model.ell, 4, ntan, [tuple(-x for x in k) for k in modes], DualField)
            lhs, rhs = greens_terms(phi, rho, model)
            g_def = max(g_def, abs(lhs - rhs))
            for n in (0, 1, 2):
                s_def = max(s_def, symmetry_defect(n, phi, rho, model))
                sg_def = max(sg_def, sign_defect(n, phi, rho, model))
            k = modes[0]
            f = compatible_field(model, 6, k, rng)
            r_def = max(r_def, recursion_defect(f, rho, model))
            r_def = max(r_def, abs(beta_spectral(1, f, rho, model).value))
            g = compatible_field(model, 6, tuple(-x for x in k), rng, dual=True)
            l_def = max(l_def, abs(integrate_M(apply_D(model, f), g, model)
                                   - integrate_M(f, apply_D_dual(model, g), model)))
        out += [
            Check(f"Green formula [{label}]", g_def, 1e-10),
            Check(f"compatible pair interior identity [{label}]", l_def, 1e-10),
            Check(f"duality symmetry [{label}]", s_def, 1e-10),
            Check(f"recursion [{label}]", r_def, 1e-10),
            Check(f"P -> -P invariance [{label}]", sg_def, 1e-10),
        ]
        if model.regime == "flat" and not model.twist:
            lift = lift_dimension(model)
            phi = random_field(rng, model.ell, 3, ntan, modes)
            rho = random_field(rng, model.ell, 3, ntan, modes, DualField)
            lphi, lrho = lift_field(phi), lift_field(rho, 1 / (2 * np.pi))
            d = max(abs(beta_spectral(n, phi, rho, model).value - beta_spectral(n, lphi, lrho, lift).value)
                    for n in (0, 1, 2))
            out.append(Check(f"dimension lift [{label}]", d, 1e-12))
    return out


def constants_checks() -> list[Check]:
    from math import pi, sqrt

    expected = {"c0": -2 / sqrt(pi), "c2": 0.5, "c3": 0.5, "c4": -0.5, "c5": -0.5}
    out = [Check(f"constant {k}", abs(CONSTANTS[k] - v), 0.0) for k, v in expected.items()]
    worst = 0.0
    for m in (2, 3, 4):
        rep = build_rep(m)
        for scale, d2 in ((0.4, 1.0), (-1.3, 0.3), (2.0, 2.7)):
            model = assemble_warped_model(m, rep, WarpProfile.from_roots_scale(scale), d2)
            for c in COMPONENTS:
                k = (0,) * (m - 1)
                worst = max(worst, np.abs(weight_one(model, c, k) @ projector_A(model, c, k).matrix).max())
    out.append(Check("weight-one endomorphism kills Pi^+ phi (warped, radial)", worst, 1e-12))
    return out


SUITES = {
    "algebra": lambda: algebra_checks(),
    "identities": lambda: structure_checks() + identity_checks(),
    "constants": lambda: constants_checks(),
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for key in ("algebra", "identities", "constants") for c in SUITES[key]()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name]()


def _vec(ell, entries):
    v = np.zeros(ell)
    for i, x in entries.items():
        v[i] = x
    return v


def oracle_fixtures() -> dict:
    """Named (model, phi, rho) triples used for engine-versus-oracle runs."""
    r1, r2 = build_rep(1), build_rep(2)
    ep, em = _vec(2, {0: 1.0}), _vec(2, {1: 1.0})
    a, b = np.array([0.7, -0.4]), np.array([0.3, 1.1])
    out = {}
    for d1 in (0.0, 0.5, 1.0):
        for d2 in (0.5, 1.5):
            model = assemble_flat_model(1, r1, d1, d2)
            for tag, u, w in (("e+", ep, ep), ("e-", em, em), ("mixed", a, b)):
                out[f"flat d1={d1} d2={d2} {tag}"] = (model, Field.constant(u), DualField.constant(w))
    # rho vanishes to second order at r = 1 so only the r = 0 component contributes
    e0, e3 = _vec(4, {0: 1.0}), _vec(4, {3: 1.0})
    w = e0 + 0.5 * e3
    out["twisted m=2"] = (
        assemble_flat_model(2, r2, 0.5, 1.0, [0.3]),
        Field.constant(e0 + 0.3 * _vec(4, {1: 1.0}), 1),
        DualField.polynomial(np.array([w, -2 * w, w]), 1),
    )
    prof = WarpProfile.from_roots_scale(0.4)
    out["warped m=2"] = (assemble_warped_model(2, r2, prof, 1.0), Field.constant(e0, 1), DualField.constant(e0, 1))
    return out
