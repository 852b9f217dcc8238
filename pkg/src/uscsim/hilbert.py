"""Canonical units, parameters, and operators on the truncated qubit-oscillator space.

Conventions used throughout the package:

* hbar = 1 and mass = 1 by default; energies are quoted in units of
  hbar*omega0 unless stated otherwise.
* The qubit Hamiltonian is -(delta/2) sigma_x - (eps/2) sigma_z, with
  sigma_z |up> = +|up>.  The qubit gap is E_q = sqrt(delta^2 + eps^2) and
  the mixing angle is theta = arctan(eps/delta).
* The oscillator is described either through (a, a^dag) or through the
  dimensionless quadratures X = (a + a^dag)/2, P = (a - a^dag)/(2i), so
  [X, P] = i/2 on the untruncated space.
* The coupling appears as lam * (a + a^dag) * sigma_z, equivalently
  g * x * sigma_z with g = lam * sqrt(2*m*omega0/hbar).
* Composite states live on the qubit (x) Fock product space with index
  ordering q*(n_max+1) + n, i.e. the qubit is the slow (outer) index.
  The zero-point energy hbar*omega0/2 is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import atan2, ceil, sqrt

import numpy as np

HBAR = 1.0

TRUNCATION_CEILING = 4096


class TruncationError(RuntimeError):
    """Raised when no admissible Fock truncation exists (ceiling exceeded)."""


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the coupled qubit-oscillator system.

    All values are in canonical units (hbar = 1); `omega0` sets the energy
    unit hbar*omega0 = omega0 for the default choice omega0 = 1.
    """

    delta: float
    eps: float = 0.0
    omega0: float = 1.0
    lam: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError(f"qubit gap delta must be positive, got {self.delta}")
        if self.omega0 <= 0:
            raise ValueError(f"oscillator frequency omega0 must be positive, got {self.omega0}")
        if self.lam < 0:
            raise ValueError(f"coupling lam must be nonnegative, got {self.lam}")
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")

    @property
    def e_q(self) -> float:
        """Qubit energy splitting sqrt(delta^2 + eps^2)."""
        return sqrt(self.delta ** 2 + self.eps ** 2)

    @property
    def theta(self) -> float:
        """Mixing angle arctan(eps/delta), in (-pi/2, pi/2)."""
        return atan2(self.eps, self.delta)

    @property
    def g(self) -> float:
        """Coupling in position language: g = lam * sqrt(2*m*omega0/hbar)."""
        return self.lam * sqrt(2.0 * self.mass * self.omega0 / HBAR)

    @property
    def lam_ratio(self) -> float:
        """Dimensionless coupling lam/(hbar*omega0)."""
        return self.lam / (HBAR * self.omega0)

    def with_lam(self, lam: float) -> "SystemParams":
        return replace(self, lam=lam)

    def with_eps(self, eps: float) -> "SystemParams":
        return replace(self, eps=eps)

    @classmethod
    def from_g(cls, delta, eps, omega0, g, mass=1.0) -> "SystemParams":
        """Build from the position-language coupling g instead of lam."""
        lam = g * sqrt(HBAR / (2.0 * mass * omega0))
        return cls(delta=delta, eps=eps, omega0=omega0, lam=lam, mass=mass)


@dataclass(frozen=True)
class FockTruncation:
    """Fock-space truncation policy: keep indices 0..n_max (dimension n_max+1)."""

    n_max: int
    convergence_tol: float = 1e-10
    auto: bool = False

    def __post_init__(self):
        if self.n_max < 8:
            raise ValueError(f"n_max must be >= 8, got {self.n_max}")
        if not (0.0 < self.convergence_tol <= 1e-4):
            raise ValueError(
                f"convergence_tol must lie in (0, 1e-4], got {self.convergence_tol}"
            )

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Dense operator on a truncated space, tagged with a human-readable label."""

    dim: int
    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries shape {entries.shape} != ({self.dim}, {self.dim})")
        object.__setattr__(self, "entries", entries)

    def dagger(self) -> "TruncatedOperator":
        return TruncatedOperator(self.dim, self.entries.conj().T, self.label + "^dag")

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            return TruncatedOperator(self.dim, self.entries @ other.entries,
                                     f"{self.label}@{other.label}")
        return self.entries @ other


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector, either on one subsystem or on the product space."""

    dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.dim:
            raise ValueError(f"amplitude vector has size {amps.size}, expected {self.dim}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state not normalized: ||psi|| = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps.size, amps / norm)

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


# -- qubit matrices (sigma_z basis: index 0 = |up>, 1 = |down>) --------------

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |up><down|
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |down><up|
QUBIT_IDENTITY = np.eye(2, dtype=complex)


def annihilation_matrix(n_max: int) -> np.ndarray:
    """Truncated annihilation operator: <n|a|n+1> = sqrt(n+1) for n < n_max."""
    n = np.arange(1, n_max + 1, dtype=float)
    return np.diag(np.sqrt(n), k=1).astype(complex)


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """All elementary operators for a given truncation, plus tensor lifts."""

    trunc: FockTruncation
    a: TruncatedOperator
    adag: TruncatedOperator
    x_quad: TruncatedOperator        # X = (a + a^dag)/2
    p_quad: TruncatedOperator        # P = (a - a^dag)/(2i)
    number: TruncatedOperator
    fock_identity: TruncatedOperator
    sigma_x: TruncatedOperator
    sigma_y: TruncatedOperator
    sigma_z: TruncatedOperator
    sigma_plus: TruncatedOperator
    sigma_minus: TruncatedOperator
    qubit_identity: TruncatedOperator

    @property
    def fock_dim(self) -> int:
        return self.trunc.dim

    @property
    def full_dim(self) -> int:
        return 2 * self.trunc.dim

    def lift_qubit(self, op: TruncatedOperator) -> TruncatedOperator:
        """Lift a 2x2 qubit operator to the product space (op x 1_fock)."""
        if op.dim != 2:
            raise ValueError("lift_qubit expects a 2x2 operator")
        return TruncatedOperator(self.full_dim,
                                 np.kron(op.entries, np.eye(self.fock_dim)),
                                 f"{op.label}(x)1")

    def lift_oscillator(self, op: TruncatedOperator) -> TruncatedOperator:
        """Lift a Fock-space operator to the product space (1_q x op)."""
        if op.dim != self.fock_dim:
            raise ValueError("lift_oscillator expects an operator on the Fock space")
        return TruncatedOperator(self.full_dim, np.kron(np.eye(2), op.entries),
                                 f"1(x){op.label}")


def build_operators(trunc: FockTruncation) -> OperatorSet:
    """Construct ladder/quadrature/Pauli operators for the given truncation."""
    if trunc.n_max < 8:
        raise ValueError(f"n_max must be >= 8, got {trunc.n_max}")
    a = annihilation_matrix(trunc.n_max)
    adag = a.conj().T
    dim = trunc.dim
    return OperatorSet(
        trunc=trunc,
        a=TruncatedOperator(dim, a, "a"),
        adag=TruncatedOperator(dim, adag, "a^dag"),
        x_quad=TruncatedOperator(dim, (a + adag) / 2.0, "X"),
        p_quad=TruncatedOperator(dim, (a - adag) / 2.0j, "P"),
        number=TruncatedOperator(dim, adag @ a, "n"),
        fock_identity=TruncatedOperator(dim, np.eye(dim, dtype=complex), "1_fock"),
        sigma_x=TruncatedOperator(2, SIGMA_X, "sigma_x"),
        sigma_y=TruncatedOperator(2, SIGMA_Y, "sigma_y"),
        sigma_z=TruncatedOperator(2, SIGMA_Z, "sigma_z"),
        sigma_plus=TruncatedOperator(2, SIGMA_PLUS, "sigma_+"),
        sigma_minus=TruncatedOperator(2, SIGMA_MINUS, "sigma_-"),
        qubit_identity=TruncatedOperator(2, QUBIT_IDENTITY, "1_q"),
    )


def hamiltonian_matrix(p: SystemParams, n_max: int) -> np.ndarray:
    """Raw Hamiltonian matrix on the 2*(n_max+1) product space.

    H = -(delta/2) sigma_x - (eps/2) sigma_z + omega0 a^dag a
        + lam (a + a^dag) sigma_z
    with the zero-point term omitted.  All entries are real.
    """
    fock_dim = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, fock_dim, dtype=float)), k=1)
    x2 = a + a.T                      # a + a^dag, real
    num = np.diag(np.arange(fock_dim, dtype=float))
    eye_f = np.eye(fock_dim)
    sx = SIGMA_X.real
    sz = SIGMA_Z.real
    h = (-(p.delta / 2.0) * np.kron(sx, eye_f)
         - (p.eps / 2.0) * np.kron(sz, eye_f)
         + HBAR * p.omega0 * np.kron(np.eye(2), num)
         + p.lam * np.kron(sz, x2))
    return h


def build_hamiltonian(p: SystemParams, trunc: FockTruncation) -> TruncatedOperator:
    """Full Hamiltonian as a TruncatedOperator; Hermitian by construction."""
    h = hamiltonian_matrix(p, trunc.n_max)
    return TruncatedOperator(2 * trunc.dim, h.astype(complex), "H")


def parity_matrix(n_max: int) -> np.ndarray:
    """Parity operator Pi = sigma_x (x) exp(i pi a^dag a); commutes with H at eps=0."""
    fock_parity = np.diag((-1.0) ** np.arange(n_max + 1))
    return np.kron(SIGMA_X.real, fock_parity)


def choose_truncation(p: SystemParams, requested_levels: int,
                      convergence_tol: float = 1e-10, auto: bool = False,
                      ceiling: int = TRUNCATION_CEILING) -> FockTruncation:
    """Pick a Fock truncation adequate for the lowest `requested_levels` states.

    The displaced wells sit at alpha ~ lam/(hbar*omega0), i.e. about alpha^2
    mean photons; a headroom factor of 8 on alpha^2 plus linear and constant
    margins covers the tails.  With auto=True the truncation is doubled until
    the requested eigenvalues are stable to `convergence_tol` (relative).
    """
    if requested_levels < 1:
        raise ValueError(f"requested_levels must be >= 1, got {requested_levels}")
    r = p.lam_ratio
    n = max(32, ceil(8.0 * r * r + 10.0 * r + 2 * requested_levels + 20))
    if n > ceiling:
        raise TruncationError(
            f"required n_max {n} exceeds ceiling {ceiling} (lam/(hbar*omega0) = {r:g})")
    if not auto:
        return FockTruncation(n_max=n, convergence_tol=convergence_tol, auto=False)

    from scipy.linalg import eigh

    def lowest(n_max):
        h = hamiltonian_matrix(p, n_max)
        return eigh(h, eigvals_only=True, subset_by_index=[0, requested_levels - 1])

    prev = lowest(n)
    while True:
        if 2 * n > ceiling:
            raise TruncationError(
                f"auto truncation did not converge below ceiling {ceiling}")
        cur = lowest(2 * n)
        scale = np.maximum(np.abs(cur), 1.0)
        if np.max(np.abs(cur - prev) / scale) < convergence_tol:
            return FockTruncation(n_max=n, convergence_tol=convergence_tol, auto=True)
        n *= 2
        prev = cur


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Exact (untruncated) coherent-state coefficients c_n for n < dim.

    Computed by the stable recurrence c_n = c_{n-1} * alpha / sqrt(n); all
    intermediates are bounded by 1 in magnitude.
    """
    c = np.empty(dim, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        c[n] = c[n - 1] * alpha / sqrt(n)
    return c


def coherent_state(alpha: complex, trunc: FockTruncation) -> PureState:
    """Truncated coherent state |alpha> = exp(alpha a^dag - alpha* a)|0>.

    Rejects amplitudes whose Poisson tail would not fit the truncation
    (|alpha|^2 <= n_max/4); the surviving tail mass is below 1e-10 there.
    """
    if abs(alpha) ** 2 > trunc.n_max / 4.0:
        raise ValueError(
            f"|alpha|^2 = {abs(alpha)**2:g} too large for n_max = {trunc.n_max}"
            " (need |alpha|^2 <= n_max/4)")
    c = coherent_amplitudes(alpha, trunc.dim)
    return PureState.from_unnormalized(c)


def qubit_oscillator_state(qubit_amps, osc_amps) -> PureState:
    """Product state (qubit x oscillator) in the composite index convention."""
    q = np.asarray(qubit_amps, dtype=complex).reshape(2)
    o = np.asarray(osc_amps, dtype=complex).reshape(-1)
    return PureState.from_unnormalized(np.kron(q, o))
