"""Algebra of the single-vertex stabilizer test.

Each stabilizer generator of a hypergraph state is one X factor, Z factors on
the 2-edge neighbors, and CZ factors on the 3-edge neighbor pairs. Expanding
every CZ as (II + IZ + ZI - ZZ)/2 writes the generator as an average of 4^r
signed Pauli terms; the test samples one term uniformly, measures it with
single-qubit X/Z measurements, and compares the outcome product to the term's
sign.

Pair-value table, for the stored pair (j, k) with j < k: value 1 contributes
nothing, 2 contributes Z_k, 3 contributes Z_j, 4 contributes -Z_j Z_k.
Z-support updates are symmetric differences because Z^2 = I.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .hypergraph import Hypergraph, Neighborhood, neighborhood
from .statevector import StateVector, measure_pauli, pauli_expectation

DEFAULT_ENUMERATION_CAP = 10

# Maps a pair value to (sign flip, vertices whose Z toggles).
_PAIR_ACTION = {1: (0, ()), 2: (0, (1,)), 3: (0, (0,)), 4: (1, (0, 1))}

TermIndex = Mapping[tuple[int, int], int]


class EnumerationCapError(ValueError):
    """4^r term enumeration would exceed the configured cap on r."""


@dataclass(frozen=True)
class StabilizerTerm:
    """One signed Pauli term: (-1)^alpha X_{x_vertex} prod_{j in z_support} Z_j."""

    alpha: int
    x_vertex: int
    z_support: frozenset[int]

    def __post_init__(self):
        assert self.alpha in (0, 1)
        # The x vertex never acquires a Z: 2-edges cannot self-loop and
        # 3-edge pairs exclude it by construction.
        assert self.x_vertex not in self.z_support

    @property
    def sign(self) -> int:
        return -1 if self.alpha else 1


@dataclass(frozen=True)
class TestOutcome:
    """Result of one stabilizer test run."""

    term: StabilizerTerm
    x_result: int
    z_results: Mapping[int, int]
    passed: bool


def expand_term(nbhd: Neighborhood, t: TermIndex) -> StabilizerTerm:
    """Reduce a pair-value assignment to sign-exponent and Z-support form.

    The sign flips once per pair valued 4; the Z support starts at the 2-edge
    neighbors and is toggled per pair in a single pass, so the reduction is
    linear in r.
    """
    if set(t) != set(nbhd.cz_neighbors):
        raise ValueError(f"index domain {sorted(t)} does not match pairs {list(nbhd.cz_neighbors)}")
    alpha = 0
    support = set(nbhd.z_neighbors)
    for pair in nbhd.cz_neighbors:
        value = t[pair]
        if value not in _PAIR_ACTION:
            raise ValueError(f"pair value {value} for {pair} not in 1..4")
        flip, toggles = _PAIR_ACTION[value]
        alpha ^= flip
        for slot in toggles:
            support.symmetric_difference_update((pair[slot],))
    return StabilizerTerm(alpha=alpha, x_vertex=nbhd.vertex, z_support=frozenset(support))


def enumerate_terms(
    nbhd: Neighborhood, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[StabilizerTerm]:
    """All 4^r terms, in lexicographic order of the pair-value tuple.

    The cap is checked eagerly, before the first term is produced.
    """
    if nbhd.r > cap:
        raise EnumerationCapError(f"r={nbhd.r} exceeds enumeration cap {cap} (4^r terms)")

    def _terms():
        for values in itertools.product((1, 2, 3, 4), repeat=nbhd.r):
            yield expand_term(nbhd, dict(zip(nbhd.cz_neighbors, values)))

    return _terms()


def sample_term(nbhd: Neighborhood, rng: np.random.Generator) -> tuple[TermIndex, StabilizerTerm]:
    """Draw a pair-value assignment uniformly from {1,2,3,4}^r and expand it."""
    values = rng.integers(1, 5, size=nbhd.r)
    t = {pair: int(v) for pair, v in zip(nbhd.cz_neighbors, values)}
    return t, expand_term(nbhd, t)


def run_stabilizer_test(
    register: StateVector, g: Hypergraph, i: int, rng: np.random.Generator
) -> TestOutcome:
    """One stabilizer test for vertex ``i`` on a fresh register.

    Samples a term, measures vertex ``i`` in X and the Z support in ascending
    vertex order (the observables commute, so order only fixes the seed
    stream), and passes iff the outcome product matches the term's sign. The
    register is consumed: it is collapsed in place and the untested qubits are
    simply never measured.
    """
    if register.n != g.n:
        raise ValueError(f"register has {register.n} qubits, hypergraph has {g.n}")
    nbhd = neighborhood(g, i)
    _, term = sample_term(nbhd, rng)
    x_rec, _ = measure_pauli(register, i, "X", rng)
    z_results: dict[int, int] = {}
    product = x_rec.outcome
    for j in sorted(term.z_support):
        z_rec, _ = measure_pauli(register, j, "Z", rng)
        z_results[j] = z_rec.outcome
        product *= z_rec.outcome
    return TestOutcome(
        term=term,
        x_result=x_rec.outcome,
        z_results=z_results,
        passed=(product == term.sign),
    )


def _term_expectation_rho(rho: np.ndarray, term: StabilizerTerm, n: int) -> float:
    """Tr(rho s_t) from the permutation form of the Pauli string."""
    dim = 1 << n
    idx = np.arange(dim)
    x_mask = 1 << (n - term.x_vertex)
    z_mask = 0
    for j in term.z_support:
        z_mask |= 1 << (n - j)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & z_mask) & 1)
    value = float(np.real(np.sum(rho[idx, idx ^ x_mask] * signs)))
    return -value if term.alpha else value


def generator_expectation(
    state: StateVector | np.ndarray, g: Hypergraph, i: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """<g_i> on a pure state or a density matrix, via the 4^r-term expansion."""
    nbhd = neighborhood(g, i)
    if isinstance(state, StateVector):
        total = sum(pauli_expectation(state, term) for term in enumerate_terms(nbhd, cap=cap))
    else:
        rho = np.asarray(state)
        if rho.ndim != 2 or rho.shape != (1 << g.n, 1 << g.n):
            raise ValueError(f"density matrix shape {rho.shape} does not match n={g.n}")
        total = sum(_term_expectation_rho(rho, term, g.n) for term in enumerate_terms(nbhd, cap=cap))
    return total / 2**nbhd.r


def pass_probability(
    state: StateVector | np.ndarray, g: Hypergraph, i: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """Exact probability that the vertex-``i`` test passes on ``state``.

    Computed as 1/2 + <g_i> / 2^(r+1) with <g_i> from the term expansion,
    never by sampling. ``state`` may be a StateVector or a density matrix.
    """
    r = neighborhood(g, i).r
    return 0.5 + generator_expectation(state, g, i, cap=cap) / 2 ** (r + 1)
