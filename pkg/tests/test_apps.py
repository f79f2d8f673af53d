"""Tests for the three application simulators."""

import math
import warnings

import numpy as np
import pytest
import scipy.linalg

from trotterion.apps import (CDConfig, ChainConfig, KMConfig, Protocol,
                             cd_beta, cd_hamiltonians, cd_run, chain_error,
                             chain_gate_count, chain_heff, chain_hoppings,
                             chain_simulate, f_r_signed, flat_band_coupling,
                             km_commutator_check, km_gate_count, km_hoppings,
                             km_nnn_identities, km_simulate,
                             phases_wrap_consistently, schedule,
                             schedule_rate)
from trotterion.bases import AccuracyWarning, f_r
from trotterion.errors import DomainError, InvalidInputError
from trotterion.formula import GeneratorPair
from trotterion.matcore import commutator, spectral_norm


# ---------------------------------------------------------------- ramp driving

def test_schedule_endpoints_and_midpoint():
    assert schedule(0.0, 1.0) == 0.0
    assert abs(schedule(1.0, 1.0) - 1.0) <= 1e-15
    # nested sin^2 ramp passes through 1/2 exactly at mid-ramp
    assert abs(schedule(0.5, 1.0) - 0.5) <= 1e-15
    grid = np.linspace(0.0, 1.0, 101)
    vals = [schedule(t, 1.0) for t in grid]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_schedule_rate_matches_finite_difference():
    tau = 1.7
    h = 1e-6
    for t in (0.1, 0.33, 0.5, 0.77, 1.2, 1.6):
        fd = (schedule(t + h, tau) - schedule(t - h, tau)) / (2.0 * h)
        assert abs(schedule_rate(t, tau) - fd) <= 1e-6
    # both endpoint rates vanish, so the ramp turns on and off smoothly
    assert schedule_rate(0.0, tau) == 0.0
    assert abs(schedule_rate(tau, tau)) <= 1e-12


def test_cd_hamiltonians_structure():
    cfg = CDConfig(J=-1.0, hz=5.0, tau=1.0, n_steps=10)
    h_a, h_b = cd_hamiltonians(cfg, 1.0)
    assert np.allclose(h_a, 0.0)
    h_a, h_b = cd_hamiltonians(cfg, 0.3)
    assert np.allclose(h_a, h_a.conj().T)
    assert np.allclose(h_b, h_b.conj().T)
    vals = np.linalg.eigvalsh(h_b)
    assert np.allclose(vals, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)
    assert spectral_norm(commutator(h_a, h_b)) > 0.1


def test_cd_beta_on_the_sample_grid():
    cfg = CDConfig(J=-1.0, hz=5.0, tau=1.0, n_steps=100)
    assert cd_beta(cfg, 0.0) == 0.0
    dt = cfg.tau / cfg.n_steps
    betas = [cd_beta(cfg, k * dt) for k in range(cfg.n_steps)]
    assert all(math.isfinite(b) for b in betas)
    # the weight turns on, peaks inside the ramp, and is tiny near the end
    assert max(betas) > 1e-3
    with pytest.raises(DomainError):
        cd_beta(cfg, cfg.tau)
    with pytest.raises(DomainError):
        cd_beta(cfg, -0.01)


def test_cd_run_fidelity_properties():
    n_steps = 20
    base = CDConfig(J=-1.0, hz=5.0, tau=1.0, n_steps=n_steps)
    cd_points = cd_run(base)
    tr_points = cd_run(CDConfig(J=-1.0, hz=5.0, tau=1.0, n_steps=n_steps,
                                protocol=Protocol.TROTTER))
    for points in (cd_points, tr_points):
        assert len(points) == n_steps + 1
        assert points[0].fidelity == 1.0
        assert all(-1e-10 <= p.fidelity <= 1.0 + 1e-10 for p in points)
        assert not any(p.degenerate for p in points)
        ts = [p.t for p in points]
        assert np.allclose(ts, np.linspace(0.0, 1.0, n_steps + 1))
    assert cd_points[-1].fidelity > tr_points[-1].fidelity
    assert cd_points[-1].fidelity > 0.9


def test_cd_step_product_is_unitary():
    # accumulate the corrected-protocol step matrices over a full ramp and
    # confirm the overall evolution preserves norm
    cfg = CDConfig(J=-1.0, hz=5.0, tau=1.0, n_steps=100)
    dt = cfg.tau / cfg.n_steps
    total = np.eye(4, dtype=complex)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        for k in range(cfg.n_steps):
            h_a, h_b = cd_hamiltonians(cfg, schedule(k * dt, cfg.tau))
            R = cd_beta(cfg, k * dt) / dt
            gens = GeneratorPair(-1j * h_a, -1j * h_b)
            total = f_r(R).evaluate(gens, dt) @ total
    assert spectral_norm(total.conj().T @ total - np.eye(4)) <= 1e-10


def test_cd_exact_coefficients_agree_with_closed_form():
    cfg = CDConfig(J=-1.0, hz=5.0, tau=1.0, n_steps=10)
    closed = cd_run(cfg)
    solved = cd_run(cfg, exact_coefficients=True)
    # at dt = 0.1 the per-step weight is large, so the closed form is
    # already near the solved coefficients
    for p, q in zip(closed, solved):
        assert abs(p.fidelity - q.fidelity) <= 1e-2


def test_cd_config_validation():
    with pytest.raises(InvalidInputError):
        CDConfig(J=1.0, hz=1.0, tau=0.0, n_steps=10)
    with pytest.raises(InvalidInputError):
        CDConfig(J=1.0, hz=1.0, tau=math.inf, n_steps=10)
    with pytest.raises(InvalidInputError):
        CDConfig(J=1.0, hz=1.0, tau=1.0, n_steps=0)
    with pytest.raises(InvalidInputError):
        CDConfig(J=1.0, hz=1.0, tau=1.0, n_steps=10, protocol="cd")


# ---------------------------------------------------------------- hopping chain

def test_chain_hoppings_structure():
    cfg = ChainConfig(L=4, t1=1.0, t2=0.5, T=1.0)
    h0, h1 = chain_hoppings(cfg)
    want0 = np.zeros((4, 4))
    want0[0, 1] = want0[1, 0] = want0[2, 3] = want0[3, 2] = 1.0
    assert np.array_equal(h0.real, want0)
    assert np.array_equal(h0.imag, np.zeros((4, 4)))
    # the odd half carries the periodic wrap bond
    assert h1[3, 0] == 1.0 and h1[0, 3] == 1.0
    assert h1[1, 2] == 1.0
    # disjoint 2x2 bond blocks square to the identity
    assert np.allclose(h0 @ h0, np.eye(4))
    assert np.allclose(h1 @ h1, np.eye(4))


def test_chain_commutator_is_nnn_only():
    cfg = ChainConfig(L=6, t1=1.0, t2=0.5, T=1.0)
    h0, h1 = chain_hoppings(cfg)
    c = 1j * commutator(h0, h1)
    assert c[0, 2] == 1j
    assert c[1, 3] == -1j
    for j in range(6):
        for k in range(6):
            dist = min((j - k) % 6, (k - j) % 6)
            if dist != 2:
                assert abs(c[j, k]) <= 1e-14


def test_chain_heff_properties():
    cfg = ChainConfig(L=6, t1=1.3, t2=0.5, T=1.0)
    heff = chain_heff(cfg)
    assert np.allclose(heff, heff.conj().T, atol=1e-14)
    flat = chain_heff(ChainConfig(L=6, t1=1.3, t2=0.0, T=1.0))
    h0, h1 = chain_hoppings(cfg)
    assert np.array_equal(flat, 1.3 * (h0 + h1))


def test_chain_simulate_slope_and_decay():
    cfg = ChainConfig(L=6, t1=1.0, t2=0.5, T=1.0)
    res = chain_simulate(cfg)
    assert abs(res.slope - (-1.0)) <= 0.15
    errs = [e for _, e in res.rows]
    assert all(b <= a * 1.05 or a < 1e-8 for a, b in zip(errs, errs[1:]))
    # decay consistent with 1/n on the default grid
    assert errs[-1] <= errs[0] * (res.rows[0][0] / res.rows[-1][0]) * 1.5


def test_chain_gate_count_and_single_n():
    cfg = ChainConfig(L=6, t1=1.0, t2=0.5, T=1.0, n=16)
    assert chain_gate_count(cfg, 16) == 3 * 16 * 6
    res = chain_simulate(cfg)
    assert len(res.rows) == 1
    assert res.rows[0][0] == 16.0
    assert res.rows[0][1] == chain_error(cfg, 16)


def test_chain_negative_weight_uses_reflected_step():
    # flipping the sign of the diagonal amplitude sends the per-step weight
    # through the reflected branch and the run still converges
    cfg = ChainConfig(L=6, t1=1.0, t2=-0.5, T=1.0)
    res = chain_simulate(cfg, ns=(8, 16, 32, 64))
    assert abs(res.slope - (-1.0)) <= 0.2
    errs = [e for _, e in res.rows]
    assert errs[-1] < errs[0]


def test_chain_config_validation():
    with pytest.raises(InvalidInputError):
        ChainConfig(L=5, t1=1.0, t2=0.5, T=1.0)
    with pytest.raises(InvalidInputError):
        ChainConfig(L=2, t1=1.0, t2=0.5, T=1.0)
    with pytest.raises(InvalidInputError):
        ChainConfig(L=6, t1=0.0, t2=0.5, T=1.0)
    with pytest.raises(InvalidInputError):
        ChainConfig(L=6, t1=1.0, t2=0.5, T=-1.0)
    with pytest.raises(InvalidInputError):
        ChainConfig(L=6, t1=1.0, t2=0.5, T=1.0, n=0)
    cfg = ChainConfig(L=6, t1=1.0, t2=0.5, T=1.0)
    with pytest.raises(InvalidInputError):
        chain_simulate(cfg, ns=(16, 8))
    with pytest.raises(InvalidInputError):
        chain_simulate(cfg, ns=())
    with pytest.raises(InvalidInputError):
        chain_simulate(cfg, ns=(0, 8))


def test_f_r_signed_branches():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        assert f_r_signed(0.3).steps == f_r(0.3).steps
        neg = f_r_signed(-1.0)
        pos = f_r(1.0)
    assert neg.steps == tuple(reversed(pos.steps))
    # the reflected step keeps the third-order defect of the original
    a = -1j * np.array([[0, 1], [1, 0]], dtype=complex)
    b = -1j * np.array([[1, 0], [0, -1]], dtype=complex)
    pair = GeneratorPair(a, b, np.zeros((2, 2), dtype=complex))
    comm = a @ b - b @ a

    def err(x):
        want = scipy.linalg.expm(x * (a + b) - x**2 * comm)
        return spectral_norm(neg.evaluate(pair, x) - want)

    ratio = err(2e-3) / err(1e-3)
    assert 6.0 <= ratio <= 10.0


# ---------------------------------------------------------------- flux lattice

def test_km_bond_partition_covers_hopping():
    cfg = KMConfig(Lx=4, Ly=4, J=1.5, phi=0.0, T=1.0, boundary="torus")
    h1, h2, h3, h4 = km_hoppings(cfg)
    # zero flux: the four colors sum to -J times the plain torus adjacency
    adj = np.zeros((16, 16))
    for m in range(4):
        for n in range(4):
            i = m * 4 + n
            adj[((m + 1) % 4) * 4 + n, i] += 1.0
            adj[i, ((m + 1) % 4) * 4 + n] += 1.0
            adj[m * 4 + (n + 1) % 4, i] += 1.0
            adj[i, m * 4 + (n + 1) % 4] += 1.0
    assert np.allclose(h1 + h2 + h3 + h4, -1.5 * adj)
    # each bond lives in exactly one color
    for x, y in ((h1, h2), (h1, h3), (h1, h4), (h2, h3), (h2, h4), (h3, h4)):
        assert np.all((np.abs(x) > 0) + (np.abs(y) > 0) < 2)


def test_km_vertical_bonds_are_real():
    cfg = KMConfig(Lx=4, Ly=4, J=1.0, phi=np.pi / 4, T=1.0, boundary="torus")
    _, _, h3, h4 = km_hoppings(cfg)
    assert np.allclose(h3.imag, 0.0)
    assert np.allclose(h4.imag, 0.0)


def test_km_diagonal_bond_identities():
    cfg = KMConfig(Lx=4, Ly=4, J=1.0, phi=np.pi / 4, T=1.0, boundary="torus")
    assert km_commutator_check(cfg) <= 1e-12
    idents = km_nnn_identities(cfg)
    assert set(idents) == {"h1h3", "h1h4", "h2h3", "h2h4", "combined"}
    for lhs, rhs in idents.values():
        assert spectral_norm(lhs - rhs) <= 1e-12
        assert np.allclose(lhs, lhs.conj().T, atol=1e-12)
    # identities also hold with open boundaries at arbitrary flux
    open_cfg = KMConfig(Lx=5, Ly=4, J=0.8, phi=0.7, T=1.0, boundary="open")
    assert km_commutator_check(open_cfg) <= 1e-12


def test_km_zero_flux_kills_diagonal_bonds():
    cfg = KMConfig(Lx=4, Ly=4, J=1.0, phi=0.0, T=1.0, boundary="torus")
    h1, h2, h3, h4 = km_hoppings(cfg)
    assert spectral_norm(-1j * commutator(h1 - h2, h3 - h4)) <= 1e-12


def test_km_identities_scale_as_j_squared():
    base = KMConfig(Lx=4, Ly=4, J=1.0, phi=np.pi / 4, T=1.0, boundary="torus")
    doubled = KMConfig(Lx=4, Ly=4, J=2.0, phi=np.pi / 4, T=1.0,
                       boundary="torus")
    for key, (lhs1, _) in km_nnn_identities(base).items():
        lhs2, rhs2 = km_nnn_identities(doubled)[key]
        assert np.allclose(lhs2, 4.0 * lhs1, atol=1e-12)
        assert np.allclose(rhs2, 4.0 * lhs1, atol=1e-12)


def test_flat_band_coupling_value_and_domain():
    got = flat_band_coupling(1.0, math.pi / 4)
    assert abs(got - 0.33053365722755496) <= 1e-15
    want = math.exp(0.25 * math.pi / 4 - 0.5 * math.pi) / (
        2.0 * math.sin(math.pi / 8))
    assert abs(got - want) <= 1e-15
    with pytest.raises(InvalidInputError):
        flat_band_coupling(1.0, 0.0)
    with pytest.raises(InvalidInputError):
        flat_band_coupling(1.0, 4.0 * math.pi)
    with pytest.raises(InvalidInputError):
        flat_band_coupling(0.0, math.pi / 4)


def test_phase_wrap_predicate_and_auto_boundary():
    assert phases_wrap_consistently(8, math.pi / 4)
    assert not phases_wrap_consistently(4, math.pi / 4)
    assert phases_wrap_consistently(3, 2.0 * math.pi / 3)
    # auto resolves to torus exactly when the row phases close
    closed = KMConfig(Lx=3, Ly=8, J=1.0, phi=math.pi / 4, T=1.0)
    torus = KMConfig(Lx=3, Ly=8, J=1.0, phi=math.pi / 4, T=1.0,
                     boundary="torus")
    for got, want in zip(km_hoppings(closed), km_hoppings(torus)):
        assert np.array_equal(got, want)
    clipped = KMConfig(Lx=3, Ly=4, J=1.0, phi=math.pi / 4, T=1.0)
    opened = KMConfig(Lx=3, Ly=4, J=1.0, phi=math.pi / 4, T=1.0,
                      boundary="open")
    for got, want in zip(km_hoppings(clipped), km_hoppings(opened)):
        assert np.array_equal(got, want)


def test_km_simulate_slope_and_gates():
    cfg = KMConfig(Lx=4, Ly=4, J=1.0, phi=np.pi / 4, T=1.0, boundary="torus")
    res = km_simulate(cfg)
    assert abs(res.slope - (-1.0)) <= 0.15
    errs = [e for _, e in res.rows]
    assert all(b <= a * 1.05 or a < 1e-8 for a, b in zip(errs, errs[1:]))
    assert km_gate_count(cfg, 32) == 7 * 32


def test_km_config_validation():
    with pytest.raises(InvalidInputError):
        KMConfig(Lx=2, Ly=4, J=1.0, phi=1.0, T=1.0)
    with pytest.raises(InvalidInputError):
        KMConfig(Lx=4, Ly=4, J=1.0, phi=1.0, T=0.0)
    with pytest.raises(InvalidInputError):
        KMConfig(Lx=4, Ly=4, J=1.0, phi=1.0, T=1.0, n=0)
    with pytest.raises(InvalidInputError):
        KMConfig(Lx=4, Ly=4, J=1.0, phi=1.0, T=1.0, boundary="klein")
    cfg = KMConfig(Lx=4, Ly=4, J=1.0, phi=np.pi / 4, T=1.0, boundary="torus")
    with pytest.raises(InvalidInputError):
        km_simulate(cfg, ns=(32, 16))
