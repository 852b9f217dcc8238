"""Shared helpers for the test suite."""

import numpy as np
import pytest
from scipy.linalg import expm

from uscsim.hilbert import SystemParams
from uscsim.spectrum import EigenSolution


def annihilation(n_max):
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)


def displacement(alpha, n_max):
    """Brute-force displacement operator exp(alpha a^dag - alpha* a)."""
    a = annihilation(n_max)
    return expm(alpha * a.conj().T - np.conjugate(alpha) * a)


def product_state(qubit_amps, fock_index, fock_dim):
    """|qubit> (x) |n> on the composite space, qubit index outer."""
    q = np.asarray(qubit_amps, dtype=complex)
    q = q / np.linalg.norm(q)
    osc = np.zeros(fock_dim, dtype=complex)
    osc[fock_index] = 1.0
    return np.kron(q, osc)


def make_eigensolution(states, energies, params=None):
    """Assemble an EigenSolution from explicit column states (for rate checks)."""
    mat = np.column_stack(states)
    return EigenSolution(energies=np.asarray(energies, dtype=float), states=mat,
                         params=params, n_max=mat.shape[0] // 2 - 1)


def local_minima(fn, lo, hi, samples=4001):
    """(x, f(x)) at interior local minima of a sampled function."""
    xs = np.linspace(lo, hi, samples)
    vals = np.asarray(fn(xs))
    out = []
    for i in range(1, samples - 1):
        if vals[i] < vals[i - 1] and vals[i] < vals[i + 1]:
            out.append((xs[i], vals[i]))
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250810)
