import numpy as np
import pytest

from heatcontent.clifford import build_rep
from heatcontent.model import (
    ModelError,
    WarpProfile,
    assemble_flat_model,
    assemble_warped_model,
    christoffel,
    connection_defects,
    flip_sign,
    second_ff,
)
from heatcontent.spectral import psi_A_sharp

CHEB = 0.5 - 0.5 * np.cos(np.pi * (np.arange(10) + 0.5) / 10)


def test_profile_must_vanish_at_ends():
    with pytest.raises(ModelError):
        WarpProfile(np.array([0.0, 0.4, -0.3]))
    WarpProfile.from_roots_scale(0.4)


def test_flat_untwisted_has_zero_psi_P():
    m = assemble_flat_model(2, build_rep(2), 0.0, 1.0)
    assert m.psi_P.iszero()


@pytest.mark.parametrize("mdim", [1, 2, 3])
def test_flat_commutator_of_psi_P(mdim):
    rep = build_rep(mdim)
    m = assemble_flat_model(mdim, rep, 0.5, 1.0)
    gm = rep.normal
    psi = m.psi_P(0.3)
    assert np.abs(gm @ psi - psi @ gm + 2 * 0.5 * rep.gamma0).max() <= 1e-14


def test_flat_twisted_psi_P_commutator_and_psi_A_sum():
    rep = build_rep(2)
    m = assemble_flat_model(2, rep, 0.5, 0.8, [0.3])
    th1, gm = rep.theta[0], rep.normal
    psi = m.psi_P(0.0)
    assert np.abs(gm @ psi - psi @ gm - (-2 * 0.5 * rep.gamma0 - 2 * 0.3 * gm @ th1)).max() <= 1e-14
    for c, eps in ((0, 1), (1, -1)):
        pa = m.psi_A[c]
        assert np.abs(pa + gm @ pa @ gm - (2 * 0.8 * rep.gamma0 + 2 * eps * 0.3 * gm @ th1)).max() <= 1e-14


def test_warped_with_zero_profile_matches_flat():
    rep = build_rep(2)
    w = assemble_warped_model(2, rep, WarpProfile(), 0.7)
    f = assemble_flat_model(2, rep, 0.0, 0.7)
    assert w.psi_P.iszero()
    for c in (0, 1):
        assert np.allclose(w.psi_A[c], f.psi_A[c])
    assert np.allclose(w.omega_at(0.4), f.omega_at(0.4))


def test_warped_psi_P_vanishes_at_critical_point():
    m = assemble_warped_model(2, build_rep(2), WarpProfile.from_roots_scale(1.0), 0.0)
    assert np.abs(m.psi_P(0.5, m.profile(0.5))).max() <= 1e-15
    assert np.allclose(m.psi_P(0.0), -0.5 * m.rep.normal)


@pytest.mark.parametrize("mdim", [2, 3, 4])
def test_warped_psi_A_and_delta1(mdim):
    prof = WarpProfile.from_roots_scale(0.4)
    m = assemble_warped_model(mdim, build_rep(mdim), prof, 1.2)
    assert m.delta1 == 0.0
    for c, eps in ((0, 1), (1, -1)):
        expect = -0.5 * eps * (mdim - 1) * prof.prime(c) * np.eye(m.ell) + 1.2 * m.rep.gamma0
        assert np.allclose(m.psi_A[c], expect, atol=1e-15)


@pytest.mark.parametrize("builder", [
    lambda: assemble_warped_model(2, build_rep(2), WarpProfile.from_roots_scale(0.4), 1.0),
    lambda: assemble_warped_model(3, build_rep(3), WarpProfile(np.array([0, 1.0, 0.5, -1.5])), 0.3),
    lambda: assemble_flat_model(3, build_rep(3), 0.5, 1.0, [0.3, -0.2]),
])
def test_connection_compatibility(builder):
    m = builder()
    assert max(connection_defects(m, r).max() for r in CHEB) <= 1e-12


def test_christoffel_values():
    m = assemble_warped_model(2, build_rep(2), WarpProfile.from_roots_scale(1.0), 0.0)
    G = christoffel(m, 0.0)
    # index order (theta_1, r); f'(0) = 1
    assert G.upper[1, 0, 0] == pytest.approx(1.0)
    assert G.upper[0, 1, 0] == pytest.approx(1.0)
    assert G.upper[0, 0, 1] == pytest.approx(-1.0)  # -exp(2f) f' at f = 0
    flat = assemble_flat_model(2, build_rep(2), 0.0, 1.0)
    assert not np.any(christoffel(flat, 0.3).upper)


def test_christoffel_symmetry_random_r():
    m = assemble_warped_model(3, build_rep(3), WarpProfile.from_roots_scale(0.7), 0.0)
    rng = np.random.default_rng(0)
    for r in rng.random(5):
        low = christoffel(m, r).lower
        assert np.allclose(low, low.transpose(1, 0, 2))
        # Gamma_{mab} = -Gamma_{abm}
        assert np.allclose(low[2, :2, :2], -low[:2, :2, 2])


def test_second_ff_values_and_identity():
    prof = WarpProfile.from_roots_scale(0.4)
    m = assemble_warped_model(2, build_rep(2), prof, 1.0)
    assert abs(second_ff(m, 0)) == pytest.approx(0.4)
    assert second_ff(m, 0) == pytest.approx(-0.4)
    assert second_ff(m, 1) == pytest.approx(-0.4)
    assert second_ff(assemble_flat_model(2, build_rep(2), 0.0, 1.0), 0) == 0.0
    for c in (0, 1):
        lhs = m.psi_A[c] + psi_A_sharp(m, c).T
        rhs = second_ff(m, c) * np.eye(4) + 2 * 1.0 * m.rep.gamma0
        assert np.abs(lhs - rhs).max() <= 1e-13


def test_flip_sign_involution():
    m = assemble_flat_model(2, build_rep(2), 0.5, 1.0, [0.3])
    ff = flip_sign(flip_sign(m))
    assert np.array_equal(ff.rep.theta, m.rep.theta)
    assert np.allclose(ff.psi_P(0.2), m.psi_P(0.2))
    assert np.array_equal(flip_sign(m).psi_A[0], m.psi_A[0])


def test_regime_guards():
    with pytest.raises(ModelError):
        assemble_flat_model(2, build_rep(3), 0.0, 1.0)
    with pytest.raises(ModelError):
        assemble_flat_model(2, build_rep(2), 0.0, 1.0, [0.1, 0.2])
    with pytest.raises(ModelError):
        assemble_warped_model(1, build_rep(1), WarpProfile.from_roots_scale(0.4), 1.0)


def test_boundary_components():
    m = assemble_warped_model(2, build_rep(2), WarpProfile.from_roots_scale(0.4), 1.0)
    b0, b1 = m.boundary
    assert (b0.location, b0.eps, b1.location, b1.eps) == (0, 1, 1, -1)
    flat = assemble_flat_model(1, build_rep(1), 0.0, 1.0)
    assert all(b.laa == 0 for b in flat.boundary)
