"""Ultrastrong-coupling qubit-oscillator simulator."""

from .hilbert import (FockTruncation, PureState, SystemParams, TruncatedOperator,
                      build_hamiltonian, build_operators, choose_truncation,
                      coherent_state)

__all__ = [
    "FockTruncation",
    "PureState",
    "SystemParams",
    "TruncatedOperator",
    "build_hamiltonian",
    "build_operators",
    "choose_truncation",
    "coherent_state",
]

__version__ = "0.1.0"
