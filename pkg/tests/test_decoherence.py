import numpy as np
import pytest

from conftest import make_eigensolution, product_state
from uscsim import approx
from uscsim.decoherence import (NoiseChannel, RatePair,
                                away_from_degeneracy_dephasing, localized_basis,
                                rates, well_dephasing_element, worked_example)
from uscsim.hilbert import (FockTruncation, SystemParams, build_hamiltonian,
                            choose_truncation)
from uscsim.nonclassical import reduce
from uscsim.spectrum import diagonalize


FOCK_DIM = 12
PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)   # sigma_x = +1, qubit ground for H_q
MINUS = np.array([1.0, -1.0]) / np.sqrt(2.0)


@pytest.fixture(scope="module")
def supercritical_eigs():
    p = SystemParams(delta=10.0, lam=3.5)   # hbar*omega0/Delta = 0.1
    trunc = choose_truncation(p, 6)
    return p, diagonalize(build_hamiltonian(p, trunc), 6, params=p)


class TestNoiseChannel:
    def test_constant_spectrum(self):
        ch = NoiseChannel("sigma_z", 0.37)
        assert ch.s_at(0.0) == 0.37
        assert ch.s_at(5.0) == 0.37

    def test_tabulated_interpolation_and_flat_extrapolation(self):
        ch = NoiseChannel("oscillator_x", (np.array([0.0, 1.0, 2.0]),
                                           np.array([1.0, 2.0, 4.0])))
        assert ch.s_at(0.5) == pytest.approx(1.5)
        assert ch.s_at(10.0) == 4.0     # flat beyond the table
        assert ch.s_at(-1.0) == 1.0

    def test_rejects_negative_density(self):
        with pytest.raises(ValueError):
            NoiseChannel("sigma_z", -1.0)
        with pytest.raises(ValueError):
            NoiseChannel("sigma_z", (np.array([0.0, 1.0]), np.array([1.0, -2.0])))

    def test_rejects_unknown_operator(self):
        with pytest.raises(ValueError):
            NoiseChannel("sigma_y", 1.0)


class TestGoldenRuleRates:
    def test_sigma_z_product_pair(self):
        # |0,+> and |0,->: relaxation element 1, no dephasing
        hi = product_state(MINUS, 0, FOCK_DIM)
        lo = product_state(PLUS, 0, FOCK_DIM)
        eigs = make_eigensolution([lo, hi], [-0.5, 0.5])
        ch = NoiseChannel("sigma_z", 0.37)
        pair = rates(eigs, ch, 1, 0)
        assert pair.matrix_element_sq == pytest.approx(1.0, abs=1e-12)
        assert pair.diag_difference_sq == pytest.approx(0.0, abs=1e-12)
        assert pair.relaxation == pytest.approx(np.pi / 2 * 0.37, rel=1e-12)
        assert pair.dephasing == 0.0

    def test_oscillator_ladder_law(self):
        # free-oscillator matrix elements: |<n-1|(a+a^dag)|n>|^2 = n
        ch = NoiseChannel("oscillator_x", 1.0)
        for n in (1, 3, 7):
            hi = product_state(PLUS, n, FOCK_DIM)
            lo = product_state(PLUS, n - 1, FOCK_DIM)
            eigs = make_eigensolution([lo, hi], [n - 1.0, float(n)])
            pair = rates(eigs, ch, 1, 0)
            assert pair.matrix_element_sq == pytest.approx(float(n), abs=1e-12)
            assert pair.diag_difference_sq == pytest.approx(0.0, abs=1e-12)

    def test_oscillator_channel_no_pure_dephasing(self):
        ch = NoiseChannel("oscillator_x", 1.0)
        hi = product_state(MINUS, 2, FOCK_DIM)
        lo = product_state(PLUS, 5, FOCK_DIM)
        eigs = make_eigensolution([lo, hi], [0.0, 1.0])
        assert rates(eigs, ch, 1, 0).dephasing == 0.0

    def test_away_from_degeneracy_consistency(self):
        # sigma_z diag difference between |n,up> and |n,down> is 2 -> 4 pi S0
        s0 = 0.37
        up = product_state([1.0, 0.0], 2, FOCK_DIM)
        down = product_state([0.0, 1.0], 2, FOCK_DIM)
        eigs = make_eigensolution([down, up], [0.0, 1.0])
        pair = rates(eigs, NoiseChannel("sigma_z", s0), 1, 0)
        assert pair.dephasing == pytest.approx(away_from_degeneracy_dephasing(s0),
                                               rel=1e-12)
        assert away_from_degeneracy_dephasing(s0) == pytest.approx(
            4.0 * np.pi * s0, rel=1e-15)

    def test_exact_eigenbasis_nonresonant(self):
        # true eigenstates at lam=0 away from resonance are product states
        p = SystemParams(delta=0.3)
        eigs = diagonalize(build_hamiltonian(p, FockTruncation(10)), 4, params=p)
        pair = rates(eigs, NoiseChannel("sigma_z", 1.0), 1, 0)   # |0,-> <- |0,+>
        assert pair.matrix_element_sq == pytest.approx(1.0, abs=1e-10)
        assert pair.diag_difference_sq == pytest.approx(0.0, abs=1e-10)

    def test_index_validation(self):
        p = SystemParams(delta=0.3)
        eigs = diagonalize(build_hamiltonian(p, FockTruncation(10)), 3, params=p)
        ch = NoiseChannel("sigma_z", 1.0)
        with pytest.raises(ValueError):
            rates(eigs, ch, 1, 1)
        with pytest.raises(ValueError):
            rates(eigs, ch, 0, 1)   # wrong energy ordering
        with pytest.raises(ValueError):
            rates(eigs, ch, 5, 0)

    def test_rates_nonnegative(self, rng):
        ch = NoiseChannel("oscillator_x", (np.linspace(0, 5, 6), rng.uniform(0, 2, 6)))
        p = SystemParams(delta=0.7, eps=0.2, lam=0.9)
        eigs = diagonalize(build_hamiltonian(p, FockTruncation(24)), 5, params=p)
        for i in range(1, 5):
            pair = rates(eigs, ch, i, 0)
            assert pair.relaxation >= 0.0 and pair.dephasing >= 0.0

    def test_basis_covariance(self, rng):
        # |<i|A|j>| is invariant under a global unitary applied to states and A
        p = SystemParams(delta=0.7, eps=0.1, lam=0.8)
        eigs = diagonalize(build_hamiltonian(p, FockTruncation(12)), 4, params=p)
        op = NoiseChannel("oscillator_x", 1.0).operator_matrix(12)
        dim = op.shape[0]
        q, _ = np.linalg.qr(rng.normal(size=(dim, dim))
                            + 1j * rng.normal(size=(dim, dim)))
        vi, vj = eigs.states[:, 2], eigs.states[:, 0]
        before = abs(np.vdot(vi, op @ vj))
        after = abs(np.vdot(q @ vi, (q @ op @ q.conj().T) @ (q @ vj)))
        assert after == pytest.approx(before, abs=1e-10)


class TestLocalizedBasis:
    def test_requires_supercritical_and_degeneracy_point(self):
        p = SystemParams(delta=10.0, lam=0.5)
        eigs = diagonalize(build_hamiltonian(p, FockTruncation(32)), 2, params=p)
        with pytest.raises(approx.RegimeError):
            localized_basis(eigs)
        p2 = SystemParams(delta=10.0, eps=0.5, lam=3.5)
        eigs2 = diagonalize(build_hamiltonian(p2, choose_truncation(p2, 2)), 2,
                            params=p2)
        with pytest.raises(approx.RegimeError):
            localized_basis(eigs2)

    def test_localized_states_sit_at_the_wells(self, supercritical_eigs):
        p, eigs = supercritical_eigs
        right, left = localized_basis(eigs, 0)
        n_max = eigs.states.shape[0] // 2 - 1
        a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
        x_full = np.kron(np.eye(2), (a + a.T) / 2.0)
        sz_full = np.kron(np.diag([1.0, -1.0]), np.eye(n_max + 1))
        big_x = approx.double_well_x0(p) * np.sqrt(p.mass * p.omega0 / 2.0)
        for state, sign in ((right, +1), (left, -1)):
            x_mean = np.real(np.vdot(state.amplitudes, x_full @ state.amplitudes))
            z_mean = np.real(np.vdot(state.amplitudes, sz_full @ state.amplitudes))
            assert abs(x_mean - sign * big_x) / big_x < 0.05
            assert abs(z_mean) > 0.9
            assert np.sign(z_mean) == -sign   # x = -g sigma_z/(m omega0^2)

    def test_orthonormal_pair(self, supercritical_eigs):
        _, eigs = supercritical_eigs
        right, left = localized_basis(eigs, 0)
        assert abs(np.linalg.norm(right.amplitudes) - 1.0) < 1e-12
        assert abs(right.overlap(left)) < 1e-10

    def test_reduced_qubits_nearly_pure_and_opposite(self, supercritical_eigs):
        _, eigs = supercritical_eigs
        right, left = localized_basis(eigs, 0)
        sz = np.diag([1.0, -1.0])
        zs, purities = [], []
        for st in (right, left):
            rho_q = reduce(st, "qubit")
            purities.append(rho_q.purity())
            zs.append(rho_q.expectation(sz))
        assert min(purities) > 0.9
        assert zs[0] * zs[1] < 0.0

    def test_eigenbasis_hides_dephasing_localized_reveals_it(self, supercritical_eigs):
        from uscsim.decoherence import parity_resolved_pair

        p, eigs = supercritical_eigs
        op = NoiseChannel("oscillator_x", 1.0).operator_matrix(
            eigs.states.shape[0] // 2 - 1)
        even, odd = parity_resolved_pair(eigs, 0)
        v0, v1 = even.amplitudes, odd.amplitudes
        diag0 = np.real(np.vdot(v0, op @ v0))
        diag1 = np.real(np.vdot(v1, op @ v1))
        cross = abs(np.vdot(v0, op @ v1))
        assert abs(diag0) < 1e-9 and abs(diag1) < 1e-9   # parity forbids
        assert cross > 1.0                               # large within the pair
        rep = well_dephasing_element(p, eigs)
        assert rep.element_sq_numeric > 100.0            # manifest dephasing


class TestWellDephasing:
    def test_matches_analytic_element(self, supercritical_eigs):
        p, eigs = supercritical_eigs
        rep = well_dephasing_element(p, eigs)
        analytic = 8.0 * p.mass * p.omega0 * approx.double_well_x0(p) ** 2
        assert rep.element_sq_analytic == pytest.approx(analytic, rel=1e-12)
        assert abs(rep.element_sq_numeric - rep.element_sq_analytic) \
            / rep.element_sq_analytic < 0.10

    def test_shifted_ladder_relaxation_element(self, supercritical_eigs):
        p, eigs = supercritical_eigs
        rep = well_dephasing_element(p, eigs)
        assert abs(rep.ladder_element_numeric - rep.ladder_element_free) \
            / rep.ladder_element_free < 0.05

    def test_element_small_near_threshold(self):
        # x0 -> 0 at the critical point, so the analytic element vanishes
        lam_c = approx.critical_coupling(SystemParams(delta=10.0))
        p = SystemParams(delta=10.0, lam=lam_c * 1.02)
        x0 = approx.double_well_x0(p)
        assert 8.0 * x0 ** 2 < 8.0   # much smaller than the deep value ~190

    def test_element_grows_with_coupling(self):
        vals = []
        for lam in (2.4, 2.8, 3.2, 3.5):
            p = SystemParams(delta=10.0, lam=lam)
            eigs = diagonalize(build_hamiltonian(p, choose_truncation(p, 6)), 6,
                               params=p)
            vals.append(well_dephasing_element(p, eigs).element_sq_numeric)
        assert all(a < b for a, b in zip(vals, vals[1:]))


class TestWorkedExample:
    def test_reference_numbers(self):
        rep = worked_example()
        assert abs(rep.entropy - 0.85) < 0.02
        assert abs(rep.level_splitting - 0.138) < 0.005
        assert rep.well_element_sq == 40.0

    def test_dephasing_band_inside_quoted_scale(self):
        rep = worked_example()
        lo, hi = rep.dephasing_band_mhz
        assert rep.quoted_band_mhz[0] <= lo <= hi <= rep.quoted_band_mhz[1]
        assert rep.dephasing_ratio_range == (40.0, 400.0)

    def test_provenance_tags_present(self):
        rep = worked_example()
        assert set(rep.provenance) >= {"entropy", "level_splitting",
                                       "well_element_sq", "dephasing_band_mhz"}
