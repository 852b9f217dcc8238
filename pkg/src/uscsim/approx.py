"""Closed-form approximations: weak coupling, adiabatic oscillator/qubit, semiclassics.

Four analytical treatments of the coupled system, exposed as evaluators so the
exact numerics can be cross-validated against them:

* weak coupling / rotating-wave 2x2 block near resonance,
* adiabatically adjusting oscillator (displaced-state overlaps, renormalized
  qubit gap),
* adiabatically adjusting qubit (effective potential, critical point,
  double-well geometry, WKB tunnel splitting),
* semiclassical stationary points of the constrained classical Hamiltonian.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import cos, exp, lgamma, log, pi, sqrt

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect, brentq

from .hilbert import HBAR, SystemParams


class RegimeError(ValueError):
    """Raised when an operation is evaluated outside its regime of validity."""


# -- weak coupling ------------------------------------------------------------

@dataclass(frozen=True)
class EffectiveQubit2x2:
    """Effective 2x2 block coupling two nearly degenerate product levels."""

    diag: float        # +-diag/2 on the diagonal
    offdiag: float
    basis_label: str
    rabi_frequency: float

    @property
    def splitting(self) -> float:
        """Eigenvalue separation of the 2x2 block."""
        return sqrt(self.diag ** 2 + 4.0 * self.offdiag ** 2)

    def matrix(self) -> np.ndarray:
        return np.array([[self.diag / 2.0, self.offdiag],
                         [self.offdiag, -self.diag / 2.0]])


def rwa_effective_hamiltonian(p: SystemParams, n: int) -> EffectiveQubit2x2:
    """Weak-coupling block for the near-degenerate pair |n,g>, |n-1,e>.

    diag = E_q - hbar*omega0 (the detuning), offdiag = lam*sqrt(n)*cos(theta);
    at resonance an excitation oscillates with the Rabi frequency
    2*lam*sqrt(n)*cos(theta).
    """
    if n < 1:
        raise ValueError("n must be >= 1 (number of excitations in the pair)")
    if p.lam >= 0.1 * min(p.e_q, HBAR * p.omega0):
        warnings.warn(
            f"lam = {p.lam:g} is not small compared to min(E_q, hbar*omega0)"
            " = {:g}; outside the weak-coupling regime".format(min(p.e_q, HBAR * p.omega0)),
            stacklevel=2)
    delta_det = p.e_q - HBAR * p.omega0
    off = p.lam * sqrt(n) * cos(p.theta)
    return EffectiveQubit2x2(diag=delta_det, offdiag=off,
                             basis_label=f"|{n},g>,|{n-1},e>",
                             rabi_frequency=2.0 * off)


# -- adiabatic oscillator -----------------------------------------------------

def genlaguerre_value(n: int, alpha: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^alpha(x) by upward recurrence."""
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def displaced_number_overlap(n: int, m: int, d: float) -> float:
    """Overlap <n_{sz=+1}|m_{sz=-1}> of oscillator states displaced by +-lam/(hbar w0).

    `d` is the relative displacement 2*lam/(hbar*omega0).  The two branches of
    the closed form (m >= n and m < n) differ in the sign of the displacement
    power; factorial ratios run through log-gamma so the result stays finite
    for indices up to several hundred.
    """
    if n < 0 or m < 0:
        raise ValueError("Fock indices must be nonnegative")
    if d == 0.0:
        return 1.0 if n == m else 0.0
    lo, hi = (n, m) if m >= n else (m, n)
    k = hi - lo
    log_mag = -0.5 * d * d + k * log(abs(d)) + 0.5 * (lgamma(lo + 1) - lgamma(hi + 1))
    lag = genlaguerre_value(lo, k, d * d)
    sign = (-1.0) ** k if m >= n else 1.0
    return sign * exp(log_mag) * lag


def renormalized_gap(p: SystemParams, n: int) -> float:
    """Photon-number-dependent dressed gap: Delta * exp(-d^2/2) * L_n(d^2).

    May be negative; its magnitude is the intra-pair level splitting in the
    high-frequency-oscillator regime.  Vanishes at the n zeros of L_n.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    d = 2.0 * p.lam_ratio
    return p.delta * exp(-0.5 * d * d) * genlaguerre_value(n, 0, d * d)


# -- adiabatic qubit ----------------------------------------------------------

def effective_potential(p: SystemParams, x, branch: str = "ground"):
    """Oscillator potential dressed by the fast qubit's instantaneous energy.

    V(x) = m*omega0^2*x^2/2 +- sqrt(delta^2 + (eps - 2*g*x)^2)/2, the minus
    sign for the qubit ground branch.  Accepts scalars or arrays for x.
    """
    sign = _branch_sign(branch)
    x = np.asarray(x, dtype=float)
    harmonic = 0.5 * p.mass * p.omega0 ** 2 * x ** 2
    qubit = 0.5 * np.sqrt(p.delta ** 2 + (p.eps - 2.0 * p.g * x) ** 2)
    out = harmonic + sign * qubit
    return out if out.ndim else float(out)


def _branch_sign(branch: str) -> float:
    if branch == "ground":
        return -1.0
    if branch == "excited":
        return 1.0
    raise ValueError(f"branch must be 'ground' or 'excited', got {branch!r}")


def critical_coupling(p: SystemParams) -> float:
    """lam_c = sqrt(hbar*omega0*E_q)/2, where the ground branch bifurcates."""
    return 0.5 * sqrt(HBAR * p.omega0 * p.e_q)


def is_supercritical(p: SystemParams) -> bool:
    """Exact instability condition 4*lam^2/(hbar*omega0*E_q) > 1."""
    return 4.0 * p.lam ** 2 / (HBAR * p.omega0 * p.e_q) > 1.0


def double_well_x0(p: SystemParams) -> float:
    """Minima +-x0 of the supercritical ground-branch potential at eps=0."""
    g = p.g
    val = g ** 2 / (p.mass ** 2 * p.omega0 ** 4) - p.delta ** 2 / (4.0 * g ** 2)
    if val <= 0.0:
        raise RegimeError("x0 requested below the critical point")
    return sqrt(val)


@dataclass(frozen=True)
class AdiabaticQubitReport:
    """Fast-qubit analysis of the oscillator's effective potential, one branch."""

    branch: str
    omega_tilde_sq: float
    is_supercritical: bool
    lambda_c: float
    regime_ok: bool                       # hbar*omega0 << E_q intended regime
    shifted_minimum: float | None = None  # below critical, single-well center
    x0: float | None = None               # symmetric double-well fields (eps=0)
    v_min: float | None = None
    curvature_at_min: float | None = None
    wkb_splitting: float | None = None
    epsilon_localization_threshold: float | None = None


def adiabatic_qubit_analysis(p: SystemParams, branch: str = "ground",
                             include_wkb: bool = True) -> AdiabaticQubitReport:
    """Characterize the effective potential for one qubit branch.

    Below the critical point the potential is a single well with renormalized
    frequency omega_tilde and (for eps != 0) a shifted center; above it, for
    the ground branch at eps = 0, the well geometry (x0, barrier depth,
    curvature, WKB splitting) is filled in.  The double-well fields describe
    the symmetric eps = 0 potential; the localization threshold equals the
    intra-pair WKB splitting, since a bias exceeding it localizes the
    eigenstates in one well.
    """
    sign = _branch_sign(branch)
    regime_ok = HBAR * p.omega0 <= 0.1 * p.e_q
    if not regime_ok:
        warnings.warn(
            "adiabatic-qubit analysis outside its regime (hbar*omega0 not << E_q);"
            " report computed anyway", stacklevel=2)
    omega_tilde_sq = p.omega0 ** 2 + sign * 2.0 * p.g ** 2 / (p.mass * p.e_q)
    super_crit = is_supercritical(p)
    lam_c = critical_coupling(p)
    report = AdiabaticQubitReport(
        branch=branch,
        omega_tilde_sq=omega_tilde_sq,
        is_supercritical=super_crit,
        lambda_c=lam_c,
        regime_ok=regime_ok,
    )
    if branch == "excited" or not super_crit:
        # Single well; center shifted by the bias (vanishes at eps = 0).
        shift = 0.0
        if omega_tilde_sq > 0.0:
            shift = -sign * p.eps * p.g / (p.mass * omega_tilde_sq * p.e_q)
        return _replace(report, shifted_minimum=shift)

    x0 = double_well_x0(p.with_eps(0.0))
    p0 = p.with_eps(0.0)
    v_min = float(effective_potential(p0, x0, "ground") - effective_potential(p0, 0.0, "ground"))
    curv = _curvature_at_x0(p0, x0)
    wkb = wkb_splitting(p0) if include_wkb else None
    return _replace(report, x0=x0, v_min=v_min, curvature_at_min=curv,
                    wkb_splitting=wkb, epsilon_localization_threshold=wkb)


def _replace(report: AdiabaticQubitReport, **kw) -> AdiabaticQubitReport:
    from dataclasses import replace
    return replace(report, **kw)


def _curvature_at_x0(p: SystemParams, x0: float) -> float:
    """d2V/dx2 at the symmetric well minimum; closed form for eps=0, ground."""
    ratio = p.mass * p.omega0 ** 2 * p.delta / (2.0 * p.g ** 2)
    return p.mass * p.omega0 ** 2 * (1.0 - ratio ** 2)


def wkb_splitting(p: SystemParams) -> float:
    """Tunnel splitting of the supercritical symmetric double well.

    Delta_E = (hbar*omega_well/pi) * exp(-Integral(sqrt(2m(V-E0)))/hbar) with
    E0 the local ground energy V_min + hbar*omega_well/2 and the integral
    running over the classically forbidden region between the wells.  The
    paper-level content is the exponent; the prefactor is a convention, so the
    result is an order-of-magnitude estimate.
    """
    if p.eps != 0.0:
        raise RegimeError("WKB splitting requires eps = 0 (symmetric wells)")
    if not is_supercritical(p):
        raise RegimeError("WKB splitting requested below the critical point")
    x0 = double_well_x0(p)
    curv = _curvature_at_x0(p, x0)
    omega_well = sqrt(max(curv, 0.0) / p.mass)
    e0 = float(effective_potential(p, x0, "ground")) + 0.5 * HBAR * omega_well
    v_top = float(effective_potential(p, 0.0, "ground"))
    if e0 >= v_top:
        # Local ground energy above the barrier: degenerate, no forbidden region.
        return HBAR * omega_well / pi

    def above_barrier(x):
        return float(effective_potential(p, x, "ground")) - e0

    x_turn = brentq(above_barrier, 0.0, x0, xtol=1e-14)

    def integrand(x):
        return sqrt(max(2.0 * p.mass * above_barrier(x), 0.0))

    val, _ = quad(integrand, 0.0, x_turn, epsabs=0.0, epsrel=1e-8, limit=200)
    action = 2.0 * val
    return HBAR * omega_well / pi * exp(-action / HBAR)


# -- semiclassics -------------------------------------------------------------

@dataclass(frozen=True)
class SemiclassicalSolution:
    """One stationary point of the constrained classical Hamiltonian."""

    sigma_z: float
    sigma_x: float
    x: float
    p: float
    energy: float
    stability: str          # 'stable' | 'unstable'
    branch_sign: str        # '+' | '-', the sign in the stationarity equation
    is_ground_branch: bool  # plus-branch solutions never contain the ground state


_ROOT_GRID_POINTS = 10_000
_STABILITY_EIG_TOL = 1e-9


def _stationarity_residual(p: SystemParams, sz: np.ndarray, sign: float) -> np.ndarray:
    a = 2.0 * p.g ** 2 / (p.mass * p.omega0 ** 2 * p.delta)
    return -p.eps / p.delta - (a + sign / np.sqrt(1.0 - sz ** 2)) * sz


def _complete_solution(p: SystemParams, sz: float, sign: float) -> SemiclassicalSolution:
    # Equation sign '+' corresponds to sigma_x = -sqrt(1-sz^2), '-' to +sqrt.
    sx = -sign * sqrt(max(1.0 - sz * sz, 0.0))
    x = -p.g * sz / (p.mass * p.omega0 ** 2)
    energy = (-0.5 * p.delta * sx - 0.5 * p.eps * sz
              - p.g ** 2 * sz ** 2 / (2.0 * p.mass * p.omega0 ** 2))
    stability = _classify_stability(p, sx, sz)
    return SemiclassicalSolution(
        sigma_z=sz, sigma_x=sx, x=x, p=0.0, energy=energy,
        stability=stability,
        branch_sign="+" if sign > 0 else "-",
        is_ground_branch=sign < 0,
    )


def _classify_stability(p: SystemParams, sx: float, sz: float) -> str:
    """Second variation of H on the constraint manifold at a stationary point.

    In tangent coordinates (x, u1) with u1 the in-plane spin direction and
    (p, u2) decoupled, the Hessian blocks are
      [[m*omega0^2, g*sx], [g*sx, delta/(2*sx)]],  diag(1/m, delta/(2*sx)).
    Definite blocks mean a genuine extremum (stable); an indefinite spectrum
    is a saddle (unstable).
    """
    mu2 = p.delta / (2.0 * sx)  # = -2*mu with mu the Lagrange multiplier
    block = np.array([[p.mass * p.omega0 ** 2, p.g * sx],
                      [p.g * sx, mu2]])
    eigs = np.concatenate([np.linalg.eigvalsh(block), [1.0 / p.mass, mu2]])
    signs = np.sign(eigs[np.abs(eigs) > _STABILITY_EIG_TOL])
    if signs.size and (np.all(signs > 0) or np.all(signs < 0)):
        return "stable"
    return "unstable"


def semiclassical_stationary_points(p: SystemParams) -> list[SemiclassicalSolution]:
    """All real stationary points of the classical constrained Hamiltonian.

    Roots of -eps/delta - (2g^2/(m w0^2 delta) +- 1/sqrt(1-sz^2)) sz on
    sigma_z in (-1, 1) for both equation signs, located by sign-change
    bracketing on a 1e4-point grid and refined by bisection to 1e-12; each
    root is completed to (sigma_x, x, p, energy) and classified by the
    projected Hessian.  Returns 1-4 points.
    """
    edge = 1e-9
    grid = np.linspace(-1.0 + edge, 1.0 - edge, _ROOT_GRID_POINTS)
    out: list[SemiclassicalSolution] = []
    for sign in (1.0, -1.0):
        vals = _stationarity_residual(p, grid, sign)
        roots: list[float] = []
        exact_zero = np.nonzero(vals == 0.0)[0]
        roots.extend(float(grid[i]) for i in exact_zero)
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for i in flips:
            root = bisect(lambda s: float(_stationarity_residual(p, np.asarray(s), sign)),
                          grid[i], grid[i + 1], xtol=1e-12)
            roots.append(float(root))
        for r in sorted(set(np.round(roots, 12))):
            out.append(_complete_solution(p, float(r), sign))
    return out


# -- Appendix: kinetic-energy correction --------------------------------------

@dataclass(frozen=True)
class KineticCorrectionReport:
    """Relative sizes of the adiabatic-qubit corrections to T and V."""

    kinetic_relative: float    # hbar*g^2/(m*omega0*E_q^2)
    potential_relative: float  # g^2/(m*omega0^2*E_q)
    ratio: float               # = hbar*omega0/E_q exactly


def kinetic_correction_ratio(p: SystemParams) -> KineticCorrectionReport:
    """Compare the neglected kinetic-term correction with the potential one.

    Their ratio is hbar*omega0/E_q by construction, so the kinetic correction
    is negligible exactly when the oscillator is slow compared to the qubit.
    """
    kin = HBAR * p.g ** 2 / (p.mass * p.omega0 * p.e_q ** 2)
    pot = p.g ** 2 / (p.mass * p.omega0 ** 2 * p.e_q)
    return KineticCorrectionReport(kinetic_relative=kin, potential_relative=pot,
                                   ratio=HBAR * p.omega0 / p.e_q)
