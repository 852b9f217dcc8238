import numpy as np
import pytest

from uscsim.hilbert import (FockTruncation, SystemParams, build_hamiltonian,
                            hamiltonian_matrix, parity_matrix)
from uscsim.spectrum import (EigensolverError, diagonalize, level_curves,
                             pair_splitting)


def resonant_params(theta, e_q=1.0):
    return SystemParams(delta=e_q * np.cos(theta), eps=e_q * np.sin(theta))


def test_uncoupled_ladder():
    sol = diagonalize(build_hamiltonian(SystemParams(delta=1.0), FockTruncation(32)), 4)
    assert np.allclose(sol.energies, [-0.5, 0.5, 0.5, 1.5], atol=1e-12)


def test_doubling_oracle():
    p = SystemParams(delta=1.0, lam=1.0)
    e1 = diagonalize(hamiltonian_matrix(p, 64), 2).energies
    e2 = diagonalize(hamiltonian_matrix(p, 128), 2).energies
    assert np.max(np.abs(e1 - e2)) < 1e-8


def test_unitary_similarity_invariance(rng):
    p = SystemParams(delta=0.7, eps=0.2, lam=0.5)
    h = hamiltonian_matrix(p, 12)
    dim = h.shape[0]
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    h2 = q @ h @ q.conj().T
    e1 = diagonalize(h, 6).energies
    e2 = diagonalize(h2, 6).energies
    assert np.max(np.abs(e1 - e2)) < 1e-10


def test_residuals_and_orthonormality():
    p = SystemParams(delta=1.0, eps=0.1, lam=0.8)
    h = hamiltonian_matrix(p, 40)
    sol = diagonalize(h, 8)
    res = np.linalg.norm(h @ sol.states - sol.states * sol.energies, axis=0)
    assert np.all(res < 1e-9 * np.linalg.norm(h))
    gram = sol.states.conj().T @ sol.states
    assert np.max(np.abs(gram - np.eye(8))) < 1e-10


def test_diagonalize_rejects_nonhermitian():
    with pytest.raises(EigensolverError):
        diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)
    with pytest.raises(ValueError):
        diagonalize(np.eye(4), 9)


def test_eigenstate_parity_at_degeneracy_point():
    p = SystemParams(delta=1.0, lam=1.0)
    tr = FockTruncation(64)
    sol = diagonalize(build_hamiltonian(p, tr), 6, p)
    pi_op = parity_matrix(64)
    pars = [np.real(np.vdot(sol.states[:, k], pi_op @ sol.states[:, k]))
            for k in range(6)]
    assert np.all(np.abs(np.abs(pars) - 1.0) < 1e-8)
    # splitting pairs carry opposite parity
    assert pars[0] * pars[1] < 0


class TestLevelCurves:
    def test_lam_zero_column_is_uncoupled(self):
        table = level_curves(resonant_params(0.0), np.array([0.0, 0.5]), levels=6)
        assert np.allclose(table.energy_matrix[0],
                           [-0.5, 0.5, 0.5, 1.5, 1.5, 2.5], atol=1e-10)

    def test_large_coupling_pair_degeneracy_resonant(self):
        # the deepest pairs are degenerate to 1e-3 already at lam = 2.5; the
        # higher pairs reach that level slightly deeper into strong coupling
        table = level_curves(resonant_params(0.0), np.array([2.5]), levels=4)
        e25 = table.energy_matrix[0]
        assert np.all(e25[1::2] - e25[0::2] < 1e-3)
        table = level_curves(resonant_params(0.0), np.array([3.2]), levels=8)
        e = table.energy_matrix[0]
        pair_gaps = e[1::2] - e[0::2]
        assert np.all(pair_gaps < 1e-3)
        mid = (e[1::2] + e[0::2]) / 2.0
        assert np.allclose(np.diff(mid), 1.0, atol=1e-3)

    def test_alternating_gaps_with_small_bias(self):
        delta = 1.0 / np.sqrt(1.01)
        p = SystemParams(delta=delta, eps=0.1 * delta)
        table = level_curves(p, np.array([2.5]), levels=8)
        gaps = np.diff(table.energy_matrix[0])
        assert np.allclose(gaps[0::2], p.eps, atol=5e-3)
        assert np.allclose(gaps[1::2], 1.0 - p.eps, atol=5e-3)

    def test_ground_energy_nonincreasing_in_lam(self):
        grid = np.linspace(0.0, 2.0, 9)
        table = level_curves(SystemParams(delta=1.0), grid, levels=1)
        e0 = table.energy_matrix[:, 0]
        assert np.all(np.diff(e0) <= 1e-12)

    def test_rejects_bad_grid(self):
        with pytest.raises(ValueError):
            level_curves(resonant_params(0.0), np.array([1.0, 0.5]), levels=2)

    def test_threads_match_serial(self):
        grid = np.linspace(0.0, 1.0, 5)
        t1 = level_curves(resonant_params(0.3), grid, levels=4, threads=1)
        t2 = level_curves(resonant_params(0.3), grid, levels=4, threads=3)
        assert np.array_equal(t1.energy_matrix, t2.energy_matrix)


class TestPairSplitting:
    def test_minimum_at_first_laguerre_zero(self):
        # hbar*omega0/E_q = 10, pair n=1: zero of L_1[(2 lam)^2] at lam = 0.5
        p = SystemParams(delta=0.1)
        grid = np.linspace(0.3, 0.7, 81)
        s = pair_splitting(p, grid, 1)
        lam_min = grid[int(np.argmin(s))]
        assert abs(lam_min - 0.5) < 0.02

    def test_gaussian_slope_resonant(self):
        grid = np.linspace(1.5, 2.5, 11)
        s = pair_splitting(resonant_params(0.0), grid, 0)
        slope = np.polyfit(grid ** 2, np.log(s), 1)[0]
        assert abs(slope + 2.0) < 0.1

    def test_plateau_at_eps(self):
        delta = 1.0 / np.sqrt(1.01)
        p = SystemParams(delta=delta, eps=0.1 * delta)
        s = pair_splitting(p, np.array([2.3, 2.5]), 0)
        assert np.all(np.abs(s - p.eps) / p.eps < 0.05)

    def test_floor_reported_as_zero(self):
        s = pair_splitting(resonant_params(0.0), np.array([4.2, 4.3]), 0)
        assert np.all(s == 0.0)

    def test_always_nonnegative(self):
        grid = np.linspace(0.0, 2.0, 9)
        for n in (0, 1):
            assert np.all(pair_splitting(resonant_params(0.5), grid, n) >= 0.0)

    def test_eq_units(self):
        p = SystemParams(delta=0.1)
        s_w = pair_splitting(p, np.array([0.2]), 0, unit="omega0")
        s_q = pair_splitting(p, np.array([0.2]), 0, unit="eq")
        assert s_q[0] == pytest.approx(s_w[0] / 0.1, rel=1e-12)
