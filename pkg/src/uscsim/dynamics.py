"""Time-dependent bias sweeps, cat-state extraction, and fidelity reporting.

The propagator is piecewise-constant exponential stepping: each step applies
exp(-i H(t_mid) dt) to the state, which is exactly norm-preserving, and the
step count is doubled until the final state is converged.  Sweep protocols
start from the ground state at the initial bias and classify the post-sweep
state against coherent / squeezed / cat templates and the qubit purity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.sparse.linalg import expm_multiply

from .hilbert import (HBAR, FockTruncation, PureState, SystemParams,
                      choose_truncation, coherent_amplitudes, hamiltonian_matrix)
from .nonclassical import DensityMatrix, ground_state, reduce

CAT_CLASS_THRESHOLD = 0.8
ENTANGLED_PURITY_THRESHOLD = 0.75


class PropagationError(RuntimeError):
    """Step refinement failed to converge."""


@dataclass(frozen=True)
class SweepSchedule:
    """Bias ramp eps(t) from eps_start to eps_end over `duration` (units 1/omega0)."""

    eps_start: float
    eps_end: float
    duration: float
    shape: str = "linear"
    steps: int = 128

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("duration must be >= 0 (0 denotes the sudden limit)")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.shape not in ("linear", "smoothstep"):
            raise ValueError(f"shape must be 'linear' or 'smoothstep', got {self.shape!r}")

    def eps_at(self, u: float) -> float:
        """Bias at fractional time u in [0, 1]."""
        if self.shape == "smoothstep":
            u = u * u * (3.0 - 2.0 * u)
        return self.eps_start + (self.eps_end - self.eps_start) * u


@dataclass(frozen=True, eq=False)
class ProtocolResult:
    """Post-sweep state with its classification against reference states."""

    final_state: PureState
    fidelity_to_instantaneous_ground: float
    oscillator_state_class: str
    classification_scores: dict
    qubit_purity: float
    cat_fit_alpha: complex
    note: str


def _propagate(amps: np.ndarray, p_base: SystemParams, schedule: SweepSchedule,
               n_max: int, steps: int) -> np.ndarray:
    h0 = hamiltonian_matrix(p_base.with_eps(0.0), n_max)
    sz_full = np.kron(np.diag([1.0, -1.0]), np.eye(n_max + 1))
    dt = schedule.duration / steps
    psi = amps.astype(complex)
    for i in range(steps):
        eps = schedule.eps_at((i + 0.5) / steps)
        h = h0 - 0.5 * eps * sz_full
        psi = expm_multiply(-1j * dt * h, psi)
    return psi


def evolve(state: PureState, p_base: SystemParams, schedule: SweepSchedule,
           trunc: FockTruncation | None = None, refine_tol: float = 1e-8,
           max_doublings: int = 10) -> PureState:
    """Propagate under H(t) with eps(t) following the schedule.

    The initial step count comes from the schedule and is doubled until
    halving the time step changes the final-state overlap by < refine_tol;
    norm is preserved to machine precision by the exponential stepping.
    """
    if schedule.duration == 0.0:
        return state
    n_max = trunc.n_max if trunc is not None else state.dim // 2 - 1
    if state.dim != 2 * (n_max + 1):
        raise ValueError("state dimension does not match the truncation")
    steps = schedule.steps
    prev = _propagate(state.amplitudes, p_base, schedule, n_max, steps)
    for _ in range(max_doublings):
        steps *= 2
        cur = _propagate(state.amplitudes, p_base, schedule, n_max, steps)
        if abs(1.0 - abs(np.vdot(prev, cur))) < refine_tol:
            return PureState.from_unnormalized(cur)
        prev = cur
    raise PropagationError(
        f"time-step refinement did not converge within {max_doublings} doublings")


# -- state templates and classification ---------------------------------------

def squeezed_vacuum_amplitudes(r: float, dim: int) -> np.ndarray:
    """Fock coefficients of the squeezed vacuum S(r)|0> with real squeeze r."""
    c = np.zeros(dim, dtype=complex)
    c[0] = 1.0 / sqrt(np.cosh(r))
    t = -np.tanh(r)
    for n in range(2, dim, 2):
        # c_n / c_{n-2} = t/2 * sqrt(n(n-1)) / (n/2)
        c[n] = c[n - 2] * t * sqrt(n * (n - 1.0)) / n
    return c


def cat_amplitudes(alpha: complex, phase: float, dim: int) -> np.ndarray:
    """Normalized superposition |alpha> + e^{i phase} |-alpha>."""
    c = coherent_amplitudes(alpha, dim) + np.exp(1j * phase) * coherent_amplitudes(-alpha, dim)
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise ValueError("cat amplitudes vanished (odd cat at alpha = 0)")
    return c / norm


def _overlap(rho: np.ndarray, vec: np.ndarray) -> float:
    return float(np.real(vec.conj() @ rho @ vec))


def _fit_cat(rho: np.ndarray):
    """Best +-alpha pair for the two-blob structure of rho.

    The second moment <a^2> of a balanced two-component superposition (or
    mixture) at +-alpha equals alpha^2, so its complex square root estimates
    alpha up to overall sign; a golden-section refinement of the scale
    maximizes the weight in the even/odd cat plane.
    """
    dim = rho.shape[0]
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    a2 = complex(np.trace(rho @ (a @ a)))
    alpha0 = np.sqrt(a2)
    if abs(alpha0) < 1e-6:
        return 0.0 + 0.0j

    def neg_span(scale):
        al = alpha0 * scale
        even = cat_amplitudes(al, 0.0, dim)
        odd = cat_amplitudes(al, pi, dim)
        return -(_overlap(rho, even) + _overlap(rho, odd))

    res = minimize_scalar(neg_span, bounds=(0.7, 1.3), method="bounded",
                          options={"xatol": 1e-4})
    return alpha0 * float(res.x)


def _fit_squeezed(rho: np.ndarray) -> float:
    dim = rho.shape[0]

    def neg(r):
        return -_overlap(rho, squeezed_vacuum_amplitudes(r, dim))

    grid = np.linspace(-2.5, 2.5, 21)
    r0 = grid[int(np.argmin([neg(r) for r in grid]))]
    res = minimize_scalar(neg, bounds=(r0 - 0.3, r0 + 0.3), method="bounded",
                          options={"xatol": 1e-4})
    return float(res.x)


def classify_oscillator(rho_osc: DensityMatrix, qubit_purity: float):
    """Score the oscillator state against reference families.

    Scores are overlaps <template|rho|template>; the even and odd cat
    templates have definite photon parity and are therefore exactly
    orthogonal, so cat_even + cat_odd <= 1.  The class is 'entangled' when
    the qubit purity is low, otherwise the best-scoring template above
    threshold, with coherent taking precedence over its cat decomposition.
    """
    rho = rho_osc.entries
    dim = rho_osc.dim
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    mean_a = complex(np.trace(rho @ a))
    coherent_score = _overlap(rho, coherent_amplitudes(mean_a, dim))
    r_fit = _fit_squeezed(rho)
    squeezed_score = _overlap(rho, squeezed_vacuum_amplitudes(r_fit, dim))
    alpha = _fit_cat(rho)
    if alpha != 0:
        even_score = _overlap(rho, cat_amplitudes(alpha, 0.0, dim))
        odd_score = _overlap(rho, cat_amplitudes(alpha, pi, dim))
    else:
        even_score, odd_score = coherent_score, 0.0
    entangled_score = min(max(2.0 * (1.0 - qubit_purity), 0.0), 1.0)
    scores = {
        "coherent": coherent_score,
        "squeezed": squeezed_score,
        "cat_even": even_score,
        "cat_odd": odd_score,
        "entangled": entangled_score,
        "other": 0.0,
    }
    if qubit_purity < ENTANGLED_PURITY_THRESHOLD:
        label = "entangled"
    elif coherent_score >= CAT_CLASS_THRESHOLD and abs(alpha) < 1.0:
        label = "coherent"
    elif max(even_score, odd_score) >= CAT_CLASS_THRESHOLD and abs(alpha) >= 1.0:
        label = "cat_even" if even_score >= odd_score else "cat_odd"
    elif coherent_score >= CAT_CLASS_THRESHOLD:
        label = "coherent"
    elif squeezed_score >= CAT_CLASS_THRESHOLD:
        label = "squeezed"
    else:
        label = "other"
    scores["other"] = max(0.0, 1.0 - max(coherent_score, squeezed_score,
                                         even_score + odd_score))
    return label, scores, alpha


def intermediate_sweep_duration(p: SystemParams) -> float:
    """Geometric-mean duration: adiabatic for the qubit, fast for the oscillator.

    The two single-scale criteria (duration*E_q/hbar large, duration*omega0
    small) cannot both hold with fixed margins unless E_q/omega0 is huge, so
    the default splits the difference geometrically.
    """
    t_qubit = 20.0 * HBAR / p.e_q
    t_osc = 0.2 / p.omega0
    return sqrt(t_qubit * t_osc)


def run_protocol(p: SystemParams, schedule: SweepSchedule,
                 regime_hint: str | None = None,
                 trunc: FockTruncation | None = None) -> ProtocolResult:
    """Sweep the bias from the ground state at eps_start and classify the result.

    The fidelity is taken against the instantaneous ground state at eps_end.
    The post-sweep state is generally not stationary: once the qubit settles
    into one sigma_z sector the oscillator sits in a displaced well, so the
    classification is a snapshot at the end of the sweep.
    """
    if trunc is None:
        trunc = choose_truncation(p.with_eps(schedule.eps_start), 2)
    psi0 = ground_state(p.with_eps(schedule.eps_start), trunc)
    psi = evolve(psi0, p, schedule, trunc=trunc)
    gs_end = ground_state(p.with_eps(schedule.eps_end), trunc)
    fid = abs(psi.overlap(gs_end)) ** 2
    rho_q = reduce(psi, "qubit")
    purity = rho_q.purity()
    rho_osc = reduce(psi, "oscillator")
    label, scores, alpha = classify_oscillator(rho_osc, purity)
    note = ("post-sweep state is non-stationary: the oscillator evolves in the"
            " well shifted by the settled qubit sector")
    return ProtocolResult(
        final_state=psi,
        fidelity_to_instantaneous_ground=fid,
        oscillator_state_class=label,
        classification_scores=scores,
        qubit_purity=purity,
        cat_fit_alpha=alpha,
        note=note,
    )


def sweep_trajectory(p: SystemParams, schedule: SweepSchedule,
                     trunc: FockTruncation | None = None, samples: int = 41,
                     steps_per_sample: int = 16):
    """Propagate a sweep and record observables at evenly spaced times.

    Returns a dict of arrays: t, eps, ground_fidelity (to the instantaneous
    ground state), qubit_purity, mean_x (dimensionless <X>).
    """
    from .spectrum import diagonalize

    if trunc is None:
        trunc = choose_truncation(p.with_eps(schedule.eps_start), 2)
    n_max = trunc.n_max
    psi = ground_state(p.with_eps(schedule.eps_start), trunc).amplitudes.copy()
    h0 = hamiltonian_matrix(p.with_eps(0.0), n_max)
    sz_full = np.kron(np.diag([1.0, -1.0]), np.eye(n_max + 1))
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
    x_full = np.kron(np.eye(2), (a + a.T) / 2.0)

    out = {key: np.zeros(samples) for key in
           ("t", "eps", "ground_fidelity", "qubit_purity", "mean_x")}

    def record(idx, t_now, eps_now, vec):
        state = PureState.from_unnormalized(vec)
        gs = diagonalize(h0 - 0.5 * eps_now * sz_full, 1).states[:, 0]
        out["t"][idx] = t_now
        out["eps"][idx] = eps_now
        out["ground_fidelity"][idx] = abs(np.vdot(gs, state.amplitudes)) ** 2
        out["qubit_purity"][idx] = reduce(state, "qubit").purity()
        out["mean_x"][idx] = np.real(np.vdot(state.amplitudes, x_full @ state.amplitudes))

    record(0, 0.0, schedule.eps_at(0.0), psi)
    if schedule.duration == 0.0 or samples == 1:
        for idx in range(1, samples):
            record(idx, 0.0, schedule.eps_at(0.0), psi)
        return out
    seg = schedule.duration / (samples - 1)
    dt = seg / steps_per_sample
    for idx in range(1, samples):
        t_start = (idx - 1) * seg
        for i in range(steps_per_sample):
            u = (t_start + (i + 0.5) * dt) / schedule.duration
            h = h0 - 0.5 * schedule.eps_at(u) * sz_full
            psi = expm_multiply(-1j * dt * h, psi)
        record(idx, idx * seg, schedule.eps_at(idx * seg / schedule.duration), psi)
    return out


# -- qubit measurement / cat extraction ---------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectionOutcome:
    """One branch of a qubit measurement: conditional oscillator state + weight."""

    sign: int                       # +1 / -1 for (|q1> +- |q2>)/sqrt(2)
    probability: float
    oscillator_state: PureState | None


def cat_projection(state: PureState, qubit_basis_angle: float = 0.0):
    """Measure the qubit in the basis (|q1> +- |q2>)/sqrt(2) and collapse.

    |q1> = cos(chi/2)|up> + sin(chi/2)|down> with chi the basis angle (chi=0
    measures sigma_x).  Returns both outcomes; a zero-probability branch
    carries no state.  The weighted conditional states reassemble exactly to
    the oscillator reduced density matrix.
    """
    if state.dim % 2 != 0:
        raise ValueError("expected a composite qubit-oscillator state")
    fock_dim = state.dim // 2
    c = state.amplitudes.reshape(2, fock_dim)
    half = qubit_basis_angle / 2.0
    q1 = np.array([np.cos(half), np.sin(half)], dtype=complex)
    q2 = np.array([-np.sin(half), np.cos(half)], dtype=complex)
    outcomes = []
    for sign in (+1, -1):
        meas = (q1 + sign * q2) / sqrt(2.0)
        cond = meas.conj() @ c          # oscillator amplitudes, unnormalized
        prob = float(np.real(np.vdot(cond, cond)))
        if prob <= 1e-15:
            warnings.warn(f"measurement outcome {sign:+d} has zero probability",
                          stacklevel=2)
            outcomes.append(ProjectionOutcome(sign, prob, None))
        else:
            outcomes.append(ProjectionOutcome(
                sign, prob, PureState.from_unnormalized(cond)))
    return outcomes


def fidelity(a, b) -> float:
    """State fidelity: |<a|b>|^2 for pure states, Uhlmann for density matrices."""
    pure_a = isinstance(a, PureState)
    pure_b = isinstance(b, PureState)
    if pure_a and pure_b:
        if a.dim != b.dim:
            raise ValueError("dimension mismatch")
        return min(abs(a.overlap(b)) ** 2, 1.0)
    if pure_a != pure_b:
        psi = a if pure_a else b
        rho = b if pure_a else a
        if psi.dim != rho.dim:
            raise ValueError("dimension mismatch")
        val = np.real(psi.amplitudes.conj() @ rho.entries @ psi.amplitudes)
        return float(min(max(val, 0.0), 1.0))
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    sqrt_a = _psd_sqrt(a.entries)
    inner = _psd_sqrt(sqrt_a @ b.entries @ sqrt_a)
    val = np.real(np.trace(inner)) ** 2
    return float(min(max(val, 0.0), 1.0))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T
