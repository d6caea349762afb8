"""Exact outcome distributions of per-qubit X/Z measurements, and L1 distances.

Outcome bit 0 stands for the +1 eigenvalue in either basis. X-basis qubits
are rotated into Z by a Hadamard before the probabilities are read off, so
the full 2^n outcome table is exact up to float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .oracle import ORACLE_QUBIT_CAP, OracleCapError, kron_chain
from .statevector import StateVector, measure_pauli

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
_I = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact probabilities over 2^n outcomes of a fixed per-qubit basis choice."""

    bases: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        assert abs(float(self.probs.sum()) - 1.0) < 1e-9

    @property
    def n(self) -> int:
        return len(self.bases)

    def as_mapping(self) -> dict[str, float]:
        return {f"{i:0{self.n}b}": float(p) for i, p in enumerate(self.probs)}


def parse_bases(text: str, n: int) -> tuple[str, ...]:
    """Validate a bases string like 'XXZ' against the qubit count."""
    bases = tuple(text.upper())
    if len(bases) != n:
        raise ValueError(f"bases string {text!r} has length {len(bases)}, need {n}")
    if any(b not in ("X", "Z") for b in bases):
        raise ValueError(f"bases string {text!r} may contain only X and Z")
    return bases


def exact_distribution(
    state: StateVector | np.ndarray, bases: Sequence[str], cap: int = ORACLE_QUBIT_CAP
) -> OutcomeDistribution:
    """Enumerate all 2^n outcome probabilities of measuring ``bases``.

    ``state`` may be a pure StateVector or a density matrix.
    """
    bases = tuple(bases)
    if isinstance(state, StateVector):
        n = state.n
        if n > cap:
            raise OracleCapError(f"exact enumeration capped at {cap} qubits, got {n}")
        if len(bases) != n:
            raise ValueError(f"{len(bases)} bases for {n} qubits")
        work = state.copy()
        view = work.view()
        for qubit, basis in enumerate(bases, start=1):
            if basis == "X":
                axis = np.moveaxis(view, qubit - 1, 0)
                a0 = axis[0].copy()
                axis[0] = (a0 + axis[1]) / np.sqrt(2.0)
                axis[1] = (a0 - axis[1]) / np.sqrt(2.0)
            elif basis != "Z":
                raise ValueError(f"basis must be 'X' or 'Z', got {basis!r}")
        probs = np.abs(work.amps) ** 2
    else:
        rho = np.asarray(state)
        n = rho.shape[0].bit_length() - 1
        if rho.ndim != 2 or rho.shape != (1 << n, 1 << n):
            raise ValueError(f"density matrix shape {rho.shape} is not square power of two")
        if n > cap:
            raise OracleCapError(f"exact enumeration capped at {cap} qubits, got {n}")
        if len(bases) != n:
            raise ValueError(f"{len(bases)} bases for {n} qubits")
        rot = kron_chain(_H if b == "X" else _I for b in bases)
        probs = np.real(np.diag(rot @ rho @ rot.conj().T))
    probs = np.maximum(probs, 0.0)
    return OutcomeDistribution(bases=bases, probs=probs)


def sample_outcomes(
    state: StateVector, bases: Sequence[str], shots: int, rng: np.random.Generator
) -> np.ndarray:
    """Empirical outcome counts from sequential collapsing measurements.

    Independent of exact_distribution's enumeration path, so the two
    cross-check each other.
    """
    bases = tuple(bases)
    counts = np.zeros(1 << state.n, dtype=np.int64)
    for _ in range(shots):
        work = state.copy()
        outcome = 0
        for qubit, basis in enumerate(bases, start=1):
            record, _ = measure_pauli(work, qubit, basis, rng)
            outcome = (outcome << 1) | (record.outcome == -1)
        counts[outcome] += 1
    return counts


def l1_distance(p: OutcomeDistribution, q: OutcomeDistribution) -> float:
    """Total L1 difference sum_z |p_z - q_z| (twice the total variation)."""
    if p.bases != q.bases:
        raise ValueError(f"basis mismatch: {p.bases} vs {q.bases}")
    return float(np.abs(p.probs - q.probs).sum())


def uniform_distribution(bases: Sequence[str]) -> OutcomeDistribution:
    """The trivial classical baseline: every outcome equally likely."""
    bases = tuple(bases)
    dim = 1 << len(bases)
    return OutcomeDistribution(bases=bases, probs=np.full(dim, 1.0 / dim))


def product_of_marginals(dist: OutcomeDistribution) -> OutcomeDistribution:
    """Classical baseline keeping each qubit's marginal but no correlations."""
    n = dist.n
    table = dist.probs.reshape((2,) * n)
    marginals = []
    for qubit in range(n):
        axes = tuple(a for a in range(n) if a != qubit)
        marginals.append(table.sum(axis=axes) if axes else table)
    probs = marginals[0]
    for marg in marginals[1:]:
        probs = np.kron(probs, marg)
    return OutcomeDistribution(bases=dist.bases, probs=probs)
