"""Ground-state reduced density matrices and nonclassicality quantifiers.

Phase-space conventions: Q and W are functions of the dimensionless
quadratures (X, P) with alpha = X + iP, normalized so that the Riemann sum
over the plane is 1.  The Wigner function is computed in the Fock basis from
the displaced-parity form W(alpha) = (2/pi) Tr[rho D(alpha) Pi D^dag(alpha)],
which gives the vacuum peak 2/pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np

from .hilbert import (HBAR, FockTruncation, PureState, SystemParams,
                      build_hamiltonian, choose_truncation, coherent_amplitudes,
                      parity_matrix)
from .spectrum import diagonalize

# Splitting below which the ground pair counts as degenerate and the parity
# branch is rotated explicitly; eigh mixes the pair at amplitude
# ~ eps_machine*||H||/gap, so this must sit well above machine precision.
DEGENERACY_TOL = 1e-8
EIGENVALUE_FLOOR = 1e-14    # density-matrix eigenvalues below this contribute 0 entropy
ONSET_LAMBDA_MAX = 6.0      # onset search window lam/(hbar*omega0) in [0, 6]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Reduced state of one subsystem: Hermitian, unit trace, PSD."""

    dim: int
    entries: np.ndarray
    subsystem: str  # 'oscillator' | 'qubit'

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries shape {entries.shape} != ({self.dim}, {self.dim})")
        if self.subsystem not in ("oscillator", "qubit"):
            raise ValueError(f"subsystem must be 'oscillator' or 'qubit', got {self.subsystem!r}")
        object.__setattr__(self, "entries", entries)

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def expectation(self, op: np.ndarray) -> float:
        return float(np.real(np.trace(self.entries @ op)))


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Q or Wigner values on a rectangular (X, P) grid; values[i, j] <-> (x[i], p[j])."""

    kind: str
    x_grid: np.ndarray
    p_grid: np.ndarray
    values: np.ndarray

    def integral(self) -> float:
        dx = self.x_grid[1] - self.x_grid[0]
        dp = self.p_grid[1] - self.p_grid[0]
        return float(np.sum(self.values) * dx * dp)


@dataclass(frozen=True)
class SqueezingReport:
    """Quadrature squeezing parameters and the variance product."""

    s_x: float
    s_p: float
    k_product: float
    mean_x: float
    mean_p: float


def default_grid(p: SystemParams, points: int = 201):
    """Default phase-space window, widened with the coupling-induced displacement."""
    half = 6.0 + 2.0 * p.lam_ratio
    x = np.linspace(-half, half, points)
    return x, x.copy()


def ground_state(p: SystemParams, trunc: FockTruncation | None = None) -> PureState:
    """Ground state of the full Hamiltonian.

    At eps = 0 the returned state has definite parity; on a (numerically)
    degenerate ground pair the even-parity combination is selected so that
    reduced quantities are deterministic.
    """
    if trunc is None:
        trunc = choose_truncation(p, 2)
    h = build_hamiltonian(p, trunc)
    sol = diagonalize(h, 2, params=p) if 2 * trunc.dim >= 2 else None
    vec = sol.states[:, 0]
    if p.eps == 0.0:
        vec = _even_parity_branch(sol, trunc)
    return PureState.from_unnormalized(vec)


def _even_parity_branch(sol, trunc: FockTruncation) -> np.ndarray:
    """Rotate a near-degenerate ground pair to parity eigenstates, keep the even one."""
    pi_op = parity_matrix(trunc.n_max)
    v0 = sol.states[:, 0]
    gap = abs(sol.energies[1] - sol.energies[0])
    if gap > DEGENERACY_TOL * max(1.0, abs(sol.energies[0])):
        return v0
    v1 = sol.states[:, 1]
    block = np.array([[np.vdot(v0, pi_op @ v0), np.vdot(v0, pi_op @ v1)],
                      [np.vdot(v1, pi_op @ v0), np.vdot(v1, pi_op @ v1)]])
    vals, vecs = np.linalg.eigh(block)
    coeff = vecs[:, int(np.argmax(vals))]   # eigenvalue closest to +1
    return coeff[0] * v0 + coeff[1] * v1


def reduce(state: PureState, keep: str) -> DensityMatrix:
    """Partial trace of a composite pure state down to one subsystem."""
    if state.dim % 2 != 0:
        raise ValueError(f"composite dimension {state.dim} is not 2*(n_max+1)")
    fock_dim = state.dim // 2
    c = state.amplitudes.reshape(2, fock_dim)
    if keep == "oscillator":
        rho = c.T @ c.conj()
        return DensityMatrix(fock_dim, 0.5 * (rho + rho.conj().T), "oscillator")
    if keep == "qubit":
        rho = c @ c.conj().T
        return DensityMatrix(2, 0.5 * (rho + rho.conj().T), "qubit")
    raise ValueError(f"keep must be 'oscillator' or 'qubit', got {keep!r}")


def _require_oscillator(rho: DensityMatrix):
    if rho.subsystem != "oscillator":
        raise ValueError("phase-space functions require an oscillator density matrix")


def q_function(rho: DensityMatrix, x_grid, p_grid, chunk: int = 8192) -> PhaseSpaceField:
    """Husimi Q(X, P) = <alpha|rho|alpha>/pi with alpha = X + iP.

    Uses exact coherent-state coefficients up to rho's dimension, which makes
    the expectation exact for the stored state even far out on the grid.
    """
    _require_oscillator(rho)
    x_grid = np.asarray(x_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    xx, pp = np.meshgrid(x_grid, p_grid, indexing="ij")
    alpha = (xx + 1j * pp).ravel()
    dim = rho.dim
    out = np.empty(alpha.size)
    for start in range(0, alpha.size, chunk):
        al = alpha[start:start + chunk]
        c = np.empty((dim, al.size), dtype=complex)
        c[0] = np.exp(-0.5 * np.abs(al) ** 2)
        for n in range(1, dim):
            c[n] = c[n - 1] * al / sqrt(n)
        out[start:start + chunk] = np.real(np.einsum("ik,ik->k", c.conj(),
                                                     rho.entries @ c)) / pi
    values = out.reshape(xx.shape)
    return PhaseSpaceField("Q", x_grid, p_grid, values)


def wigner_function(rho: DensityMatrix, x_grid, p_grid,
                    chunk: int = 8192) -> PhaseSpaceField:
    """Wigner function from the displaced-parity Fock series.

    W(alpha) = (2/pi) sum_n (-1)^n <n|D^dag(alpha) rho D(alpha)|n>, evaluated
    by iterating normalized Laguerre recurrences over the rho diagonals with
    the Gaussian folded in, so no intermediate overflows for grids out to
    |alpha|^2 of several hundred.
    """
    _require_oscillator(rho)
    x_grid = np.asarray(x_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    xx, pp = np.meshgrid(x_grid, p_grid, indexing="ij")
    alpha = (xx + 1j * pp).ravel()
    out = np.empty(alpha.size)
    for start in range(0, alpha.size, chunk):
        out[start:start + chunk] = _wigner_series(rho.entries, alpha[start:start + chunk])
    values = out.reshape(xx.shape)
    return PhaseSpaceField("Wigner", x_grid, p_grid, values)


def _wigner_series(rho: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Displaced-parity series, vectorized over a batch of phase-space points.

    With B = 2*alpha and y = |B|^2,
      W = (2/pi) sum_j c_j Re[ w_j * sum_k (-1)^k rho[k+j, k] T_k^j(y) ],
    where w_j = e^(-y/4) conj(B)^j / sqrt(j!), T_k^j = e^(-y/4) * normalized
    Laguerre sqrt(j!k!/(k+j)!) L_k^j(y), and c_j = 1 for j = 0 else 2.
    Folding the Gaussian into both factors keeps every intermediate bounded.
    """
    dim = rho.shape[0]
    b = 2.0 * alpha
    y = np.abs(b) ** 2
    gauss = np.exp(-0.25 * y)
    w = gauss.astype(complex)           # w_j, starting at j = 0
    total = np.zeros(alpha.size)
    for j in range(dim):
        if j > 0:
            w = w * b.conj() / sqrt(j)
        # T_k^j recurrence over k, Gaussian folded into the start value.
        t_prev = gauss.copy()
        t_cur = gauss * (1.0 + j - y) / sqrt(1.0 + j) if dim - j > 1 else None
        acc = rho[j, 0] * t_prev
        if dim - j > 1:
            acc = acc - rho[1 + j, 1] * t_cur
        for k in range(1, dim - j - 1):
            t_next = ((2 * k + 1 + j - y) * t_cur / sqrt((k + 1) * (k + j + 1))
                      - sqrt(k * (k + j) / ((k + 1.0) * (k + j + 1))) * t_prev)
            t_prev, t_cur = t_cur, t_next
            acc = acc + ((-1.0) ** (k + 1)) * rho[k + 1 + j, k + 1] * t_cur
        term = np.real(w * acc)
        total += term if j == 0 else 2.0 * term
    return (2.0 / pi) * total


def position_marginal(rho: DensityMatrix, x_grid) -> np.ndarray:
    """|psi(X)|^2 marginal of rho in the dimensionless quadrature X.

    Uses the stable three-term recurrence for normalized oscillator
    eigenfunctions; integrates to 1 over X.  Matches the P-sum of the Wigner
    function.
    """
    _require_oscillator(rho)
    x = np.asarray(x_grid, dtype=float)
    xi = sqrt(2.0) * x
    dim = rho.dim
    phi = np.empty((dim, x.size))
    phi[0] = (2.0 / pi) ** 0.25 * np.exp(-x ** 2)
    if dim > 1:
        phi[1] = sqrt(2.0) * xi * phi[0]
    for n in range(2, dim):
        phi[n] = sqrt(2.0 / n) * xi * phi[n - 1] - sqrt((n - 1.0) / n) * phi[n - 2]
    return np.real(np.einsum("ik,ij,jk->k", phi, rho.entries, phi))


def squeezing(rho: DensityMatrix, p: SystemParams | None = None) -> SqueezingReport:
    """Quadrature squeezing s_x, s_p and the uncertainty product K.

    s = 4*Var - 1 in the dimensionless quadratures; K = Var(x)Var(p) in
    physical units equals (hbar^2/4)(1+s_x)(1+s_p) independently of m*omega0.
    Mean values are converted with the canonical parameters when given.
    """
    _require_oscillator(rho)
    dim = rho.dim
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    x_op = (a + a.T) / 2.0
    p_op = (a - a.T) / 2.0j
    mean_x = rho.expectation(x_op)
    mean_p = rho.expectation(p_op)
    var_x = rho.expectation(x_op @ x_op) - mean_x ** 2
    var_p = rho.expectation(p_op @ p_op) - mean_p ** 2
    s_x = 4.0 * var_x - 1.0
    s_p = 4.0 * var_p - 1.0
    k = (HBAR ** 2 / 4.0) * (1.0 + s_x) * (1.0 + s_p)
    m_omega = 1.0 if p is None else p.mass * p.omega0
    return SqueezingReport(
        s_x=s_x, s_p=s_p, k_product=k,
        mean_x=mean_x * sqrt(2.0 * HBAR / m_omega),
        mean_p=mean_p * sqrt(2.0 * HBAR * m_omega),
    )


def entanglement_entropy(state: PureState) -> float:
    """Qubit-oscillator entanglement of a composite pure state, in bits.

    S = -Tr(rho_q log2 rho_q) of the reduced qubit state; ranges over [0, 1].
    """
    rho_q = reduce(state, "qubit").entries
    vals = np.linalg.eigvalsh(rho_q)
    vals = vals[vals > EIGENVALUE_FLOOR]
    return float(-np.sum(vals * np.log2(vals)))


def entropy_of_ground_state(p: SystemParams,
                            trunc: FockTruncation | None = None) -> float:
    return entanglement_entropy(ground_state(p, trunc))


def onset_coupling(p_base: SystemParams, s_target: float,
                   scan_points: int = 25, tol: float = 1e-4) -> float:
    """Smallest coupling at which the ground-state entropy reaches `s_target`.

    Brackets the crossing on a coarse scan over lam/(hbar*omega0) in
    [0, 6] (the entropy is monotone increasing there at eps = 0; a warning is
    raised if the scan says otherwise), then bisects.
    """
    if not (0.0 < s_target < 1.0):
        raise ValueError("s_target must lie in (0, 1)")
    lam_max = ONSET_LAMBDA_MAX * HBAR * p_base.omega0
    grid = np.linspace(0.0, lam_max, scan_points)
    entropies = np.array([entropy_of_ground_state(p_base.with_lam(float(l)))
                          for l in grid])
    if np.any(np.diff(entropies) < -1e-6):
        import warnings
        warnings.warn("ground-state entropy is not monotone over the onset scan",
                      stacklevel=2)
    above = np.nonzero(entropies >= s_target)[0]
    if above.size == 0 or above[0] == 0:
        raise ValueError(
            f"entropy target {s_target} not bracketed for lam/(hbar*omega0) in"
            f" [0, {ONSET_LAMBDA_MAX}]")
    lo, hi = grid[above[0] - 1], grid[above[0]]
    while hi - lo > tol * HBAR * p_base.omega0:
        mid = 0.5 * (lo + hi)
        if entropy_of_ground_state(p_base.with_lam(mid)) >= s_target:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
