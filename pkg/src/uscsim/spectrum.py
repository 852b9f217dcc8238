"""Exact diagonalization and energy-level curves versus coupling strength."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .hilbert import (FockTruncation, SystemParams, TruncatedOperator,
                      build_hamiltonian, choose_truncation, hamiltonian_matrix)

RESIDUAL_BOUND = 1e-9
SPLITTING_FLOOR = 1e-12   # splittings below this (in units of hbar*omega0) report as 0


class EigensolverError(RuntimeError):
    """Eigensolver failure or residual-bound violation."""


@dataclass(frozen=True, eq=False)
class EigenSolution:
    """Lowest-k eigenpairs: ascending energies and orthonormal column vectors."""

    energies: np.ndarray
    states: np.ndarray
    params: SystemParams | None = None
    n_max: int | None = None

    @property
    def k(self) -> int:
        return self.energies.size


@dataclass(frozen=True, eq=False)
class LevelCurveTable:
    """Energies of the lowest levels on a coupling grid (rows follow the grid)."""

    lambda_grid: np.ndarray
    level_index: tuple
    energy_matrix: np.ndarray
    metadata: dict = field(default_factory=dict)


def _solve_lowest(h: np.ndarray, k: int):
    """Lowest-k eigenpairs of a Hermitian matrix; uses the real path when possible."""
    if np.all(h.imag == 0.0):
        vals, vecs = eigh(h.real, subset_by_index=[0, k - 1])
        vecs = vecs.astype(complex)
    else:
        vals, vecs = eigh(h, subset_by_index=[0, k - 1])
    return vals, vecs


def diagonalize(H: TruncatedOperator | np.ndarray, k: int,
                params: SystemParams | None = None) -> EigenSolution:
    """Lowest-k eigenpairs of a Hermitian operator, with a residual check.

    The residual ||H v - E v|| is required to stay below 1e-9 * ||H||_F for
    every retained pair.
    """
    h = H.entries if isinstance(H, TruncatedOperator) else np.asarray(H)
    dim = h.shape[0]
    if k < 1 or k > dim:
        raise ValueError(f"k = {k} out of range for dimension {dim}")
    if np.max(np.abs(h - h.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(h))):
        raise EigensolverError("input operator is not Hermitian")
    try:
        vals, vecs = _solve_lowest(h, k)
    except np.linalg.LinAlgError as err:  # pragma: no cover - LAPACK failure
        raise EigensolverError(f"eigensolver failed: {err}") from err
    scale = np.linalg.norm(h)
    residual = np.linalg.norm(h @ vecs - vecs * vals[None, :], axis=0)
    if np.any(residual > RESIDUAL_BOUND * scale):
        raise EigensolverError(
            f"residual {residual.max():.3e} exceeds {RESIDUAL_BOUND:g} * ||H||")
    n_max = dim // 2 - 1 if dim % 2 == 0 else None
    return EigenSolution(energies=vals, states=vecs, params=params, n_max=n_max)


def _energy_unit(p: SystemParams, unit: str) -> float:
    if unit == "omega0":
        return p.omega0
    if unit == "eq":
        return p.e_q
    raise ValueError(f"unknown energy unit {unit!r} (use 'omega0' or 'eq')")


def _shared_truncation(p_base: SystemParams, lambda_grid: np.ndarray,
                       levels: int, trunc: FockTruncation | None) -> FockTruncation:
    """One truncation for a whole scan, sized for the largest coupling."""
    if trunc is not None:
        return trunc
    return choose_truncation(p_base.with_lam(float(np.max(lambda_grid))), levels)


def level_curves(p_base: SystemParams, lambda_grid, levels: int = 10,
                 unit: str = "omega0", trunc: FockTruncation | None = None,
                 threads: int = 1) -> LevelCurveTable:
    """Lowest `levels` energies for each coupling value in `lambda_grid`.

    `lambda_grid` is in absolute units (same energy unit as p_base.delta);
    energies are returned divided by hbar*omega0 or E_q per `unit`.  Grid
    points are independent and may be solved in parallel (`threads`); results
    are assembled in grid order either way.
    """
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("lambda_grid must be a nonempty 1-d array")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("lambda_grid must be strictly increasing")
    trunc = _shared_truncation(p_base, grid, levels, trunc)
    scale = _energy_unit(p_base, unit)

    def solve(lam: float):
        p = p_base.with_lam(float(lam))
        try:
            sol = diagonalize(build_hamiltonian(p, trunc), levels, params=p)
        except EigensolverError as err:
            raise EigensolverError(f"diagonalization failed at lam = {lam:g}: {err}") from err
        return sol.energies / scale

    energies = np.empty((grid.size, levels))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, row in enumerate(pool.map(solve, grid)):
                energies[i] = row
    else:
        for i, lam in enumerate(grid):
            energies[i] = solve(lam)
    return LevelCurveTable(
        lambda_grid=grid,
        level_index=tuple(range(1, levels + 1)),
        energy_matrix=energies,
        metadata={
            "theta": p_base.theta,
            "omega0_over_eq": p_base.omega0 / p_base.e_q,
            "unit": unit,
            "n_max": trunc.n_max,
        },
    )


def pair_splitting(p_base: SystemParams, lambda_grid, pair_index: int,
                   unit: str = "omega0", trunc: FockTruncation | None = None,
                   threads: int = 1) -> np.ndarray:
    """Intra-pair separation E_{2n+2} - E_{2n+1} (1-based levels) per grid point.

    Splittings below 1e-12 * hbar*omega0 are at the double-precision floor and
    are reported as exactly 0.
    """
    if pair_index < 0:
        raise ValueError("pair_index must be >= 0")
    levels = 2 * pair_index + 2
    table = level_curves(p_base, lambda_grid, levels=levels, unit=unit, trunc=trunc,
                         threads=threads)
    upper = table.energy_matrix[:, 2 * pair_index + 1]
    lower = table.energy_matrix[:, 2 * pair_index]
    split = np.maximum(upper - lower, 0.0)
    floor = SPLITTING_FLOOR * p_base.omega0 / _energy_unit(p_base, unit)
    split[split < floor] = 0.0
    return split
