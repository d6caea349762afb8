"""Dense pure-state simulation of n-qubit registers.

Bit convention, shared by every module: qubit 1 is the MOST significant bit
of the amplitude index, so vertex v maps to axis v-1 of the state reshaped to
(2,)*n. Gates and measurements mutate the state in place (amplitudes are the
dominant memory cost) and return it; callers that need the original must copy
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .hypergraph import Hypergraph

DEFAULT_QUBIT_CAP = 24
NORM_TOL = 1e-9

Basis = Literal["X", "Z"]


class QubitCapError(ValueError):
    """Requested register exceeds the configured dense-simulation cap."""


@dataclass(frozen=True)
class MeasurementRecord:
    """One single-qubit Pauli measurement: basis, vertex, and ±1 outcome."""

    basis: Basis
    qubit: int
    outcome: int


@dataclass
class StateVector:
    """2**n complex amplitudes of an n-qubit pure state."""

    n: int
    amps: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def view(self) -> np.ndarray:
        """The amplitudes reshaped to one axis per qubit (vertex v = axis v-1)."""
        return self.amps.reshape((2,) * self.n)

    def dump_lines(self) -> Iterator[str]:
        """Debug dump: one `bitstring real imag` line per amplitude."""
        for idx, a in enumerate(self.amps):
            yield f"{idx:0{self.n}b} {float(a.real)!r} {float(a.imag)!r}"


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise QubitCapError(f"{n} qubits exceeds the simulation cap {cap}")


def _check_vertex(sv: StateVector, v: int) -> None:
    if not 1 <= v <= sv.n:
        raise ValueError(f"qubit {v} outside [1, {sv.n}]")


def plus_state(n: int, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """The uniform superposition on n qubits."""
    _check_cap(n, cap)
    amps = np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)
    return StateVector(n, amps)


def basis_state(n: int, bits: int | str, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """The computational basis state |bits>, bits given as int or bitstring."""
    _check_cap(n, cap)
    index = int(bits, 2) if isinstance(bits, str) else bits
    if not 0 <= index < (1 << n):
        raise ValueError(f"basis index {bits!r} outside 0..2^{n}-1")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n, amps)


def apply_generalized_cz(sv: StateVector, edge: tuple[int, ...]) -> StateVector:
    """Negate the amplitudes whose bits are 1 at every vertex of ``edge``.

    Involutive; equals CZ for |edge|=2 and CCZ for |edge|=3. Implemented as a
    conditional sign flip on a sliced view, no matrix is materialized.
    """
    for v in edge:
        _check_vertex(sv, v)
    picked = set(edge)
    sel = tuple(1 if v in picked else slice(None) for v in range(1, sv.n + 1))
    sv.view()[sel] *= -1.0
    return sv


def build_hypergraph_state(g: Hypergraph, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Apply the generalized CZ of every hyperedge to the uniform superposition.

    The amplitude of bitstring b is 2^(-n/2) times (-1) to the number of edges
    whose vertices all carry bit 1 in b.
    """
    sv = plus_state(g.n, cap=cap)
    for edge in g.sorted_edges():
        apply_generalized_cz(sv, edge)
    return sv


def apply_pauli(sv: StateVector, qubit: int, which: str) -> StateVector:
    """Apply a single-qubit Pauli X, Y, or Z in place."""
    _check_vertex(sv, qubit)
    axis = np.moveaxis(sv.view(), qubit - 1, 0)
    if which == "X":
        tmp = axis[0].copy()
        axis[0] = axis[1]
        axis[1] = tmp
    elif which == "Y":
        tmp = axis[0].copy()
        axis[0] = -1j * axis[1]
        axis[1] = 1j * tmp
    elif which == "Z":
        axis[1] *= -1.0
    else:
        raise ValueError(f"unknown Pauli {which!r}")
    return sv


def _apply_hadamard(sv: StateVector, qubit: int) -> None:
    axis = np.moveaxis(sv.view(), qubit - 1, 0)
    a0 = axis[0].copy()
    a1 = axis[1]
    inv = 2.0**-0.5
    axis[0] = (a0 + a1) * inv
    axis[1] = (a0 - a1) * inv


def measure_pauli(
    sv: StateVector, qubit: int, basis: Basis, rng: np.random.Generator
) -> tuple[MeasurementRecord, StateVector]:
    """Born-rule measurement of X or Z on one qubit, with collapse.

    The X basis is handled by rotating into Z with a Hadamard and back, so the
    +1 outcome leaves the qubit in |+> and the -1 outcome in |->.
    """
    _check_vertex(sv, qubit)
    if basis not in ("X", "Z"):
        raise ValueError(f"basis must be 'X' or 'Z', got {basis!r}")
    if abs(sv.norm() - 1.0) > 1e-6:
        raise RuntimeError(f"state norm {sv.norm()} is not 1; corrupted register")
    if basis == "X":
        _apply_hadamard(sv, qubit)
    axis = np.moveaxis(sv.view(), qubit - 1, 0)
    p_plus = float(np.sum(np.abs(axis[0]) ** 2))
    outcome = 1 if rng.random() < p_plus else -1
    kept, dropped = (0, 1) if outcome == 1 else (1, 0)
    branch_norm = np.sqrt(p_plus if outcome == 1 else 1.0 - p_plus)
    if branch_norm < NORM_TOL:
        raise RuntimeError(f"collapsed onto a branch of norm {branch_norm}; corrupted register")
    axis[dropped] = 0.0
    axis[kept] /= branch_norm
    if basis == "X":
        _apply_hadamard(sv, qubit)
    return MeasurementRecord(basis=basis, qubit=qubit, outcome=outcome), sv


def pauli_expectation(sv: StateVector, term) -> float:
    """Exact <s| term |s> for a signed X_i * prod Z_j term.

    ``term`` needs attributes ``alpha`` (sign exponent), ``x_vertex`` and
    ``z_support`` (see stabilizer.StabilizerTerm); duck-typed to keep this
    module free of upward imports.
    """
    _check_vertex(sv, term.x_vertex)
    for j in term.z_support:
        _check_vertex(sv, j)
    work = sv.copy()
    for j in term.z_support:
        apply_pauli(work, j, "Z")
    apply_pauli(work, term.x_vertex, "X")
    value = float(np.real(np.vdot(sv.amps, work.amps)))
    return -value if term.alpha else value


def state_fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 between two pure states, clipped to [0, 1] against fp overshoot."""
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} vs {b.n}")
    return float(np.clip(np.abs(np.vdot(a.amps, b.amps)) ** 2, 0.0, 1.0))


def fidelity_with(sv: StateVector, g: Hypergraph, cap: int = DEFAULT_QUBIT_CAP) -> float:
    """|<G|s>|^2 against the hypergraph state of ``g``."""
    if sv.n != g.n:
        raise ValueError(f"state has {sv.n} qubits, hypergraph has {g.n}")
    return state_fidelity(build_hypergraph_state(g, cap=cap), sv)


def apply_pauli_noise(sv: StateVector, per_qubit_prob: float, rng: np.random.Generator) -> StateVector:
    """With probability ``per_qubit_prob`` per qubit, apply a random X, Y, or Z.

    One stochastic unraveling of a depolarizing-type channel; the ensemble
    over rng draws realizes the channel itself.
    """
    if not 0.0 <= per_qubit_prob <= 1.0:
        raise ValueError(f"probability {per_qubit_prob} outside [0, 1]")
    for qubit in range(1, sv.n + 1):
        if rng.random() < per_qubit_prob:
            apply_pauli(sv, qubit, ("X", "Y", "Z")[rng.integers(3)])
    return sv
