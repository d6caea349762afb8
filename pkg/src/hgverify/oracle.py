"""Brute-force dense-matrix oracles, capped at 6 qubits.

Everything here builds explicit 2^n x 2^n matrices straight from definitions
(stabilizers by conjugating X with the edge-gate product, channels as Kraus
sums) so it stays independent of the bit-kernel implementations it certifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph, neighborhood
from .stabilizer import StabilizerTerm, enumerate_terms
from .statevector import StateVector

ORACLE_QUBIT_CAP = 6
ORACLE_ATOL = 1e-9

_I = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class OracleCapError(ValueError):
    """Dense oracle requested above the 2^n x 2^n matrix cap."""


class OracleViolation(AssertionError):
    """A stabilizer identity failed; the message names identity and indices."""


def _check_cap(n: int) -> None:
    if n > ORACLE_QUBIT_CAP:
        raise OracleCapError(f"dense oracle capped at {ORACLE_QUBIT_CAP} qubits, got {n}")


def kron_chain(mats) -> np.ndarray:
    """Tensor product, qubit 1 leftmost (most significant)."""
    out = np.eye(1, dtype=np.complex128)
    for m in mats:
        out = np.kron(out, m)
    return out


def single_qubit_matrix(n: int, v: int, m: np.ndarray) -> np.ndarray:
    _check_cap(n)
    return kron_chain(m if u == v else _I for u in range(1, n + 1))


def edge_gate_diagonal(n: int, edges) -> np.ndarray:
    """Diagonal of the product of generalized CZ gates over ``edges``."""
    _check_cap(n)
    diag = np.ones(1 << n)
    for edge in edges:
        mask = 0
        for v in edge:
            mask |= 1 << (n - v)
        idx = np.arange(1 << n)
        diag[(idx & mask) == mask] *= -1
    return diag


def hypergraph_state_vector(g: Hypergraph) -> np.ndarray:
    """|G> straight from its amplitude formula."""
    return edge_gate_diagonal(g.n, g.edges) / np.sqrt(1 << g.n)


def stabilizer_matrix(g: Hypergraph, i: int) -> np.ndarray:
    """g_i by definition: the edge-gate product conjugating X_i."""
    _check_cap(g.n)
    u = np.diag(edge_gate_diagonal(g.n, g.edges)).astype(np.complex128)
    return u @ single_qubit_matrix(g.n, i, _X) @ u


def stabilizer_matrix_local_form(g: Hypergraph, i: int) -> np.ndarray:
    """g_i in its local form: X_i, Z on 2-edge neighbors, CZ on 3-edge pairs."""
    nbhd = neighborhood(g, i)
    out = single_qubit_matrix(g.n, i, _X)
    for j in sorted(nbhd.z_neighbors):
        out = out @ single_qubit_matrix(g.n, j, _Z)
    for j, k in nbhd.cz_neighbors:
        out = out @ np.diag(edge_gate_diagonal(g.n, [(j, k)])).astype(np.complex128)
    return out


def term_matrix(term: StabilizerTerm, n: int) -> np.ndarray:
    """Dense matrix of one signed X_i * prod Z_j term."""
    _check_cap(n)
    mats = []
    for v in range(1, n + 1):
        if v == term.x_vertex:
            mats.append(_X)
        elif v in term.z_support:
            mats.append(_Z)
        else:
            mats.append(_I)
    return term.sign * kron_chain(mats)


def pure_density(sv: StateVector) -> np.ndarray:
    _check_cap(sv.n)
    return np.outer(sv.amps, sv.amps.conj())


def depolarizing_like_channel(rho: np.ndarray, n: int, per_qubit_prob: float) -> np.ndarray:
    """Exact channel matching apply_pauli_noise: per qubit, with probability p,
    a uniformly random non-identity Pauli."""
    _check_cap(n)
    if not 0.0 <= per_qubit_prob <= 1.0:
        raise ValueError(f"probability {per_qubit_prob} outside [0, 1]")
    out = np.array(rho, dtype=np.complex128)
    for v in range(1, n + 1):
        acc = (1.0 - per_qubit_prob) * out
        for pauli in (_X, _Y, _Z):
            p_mat = single_qubit_matrix(n, v, pauli)
            acc = acc + (per_qubit_prob / 3.0) * (p_mat @ out @ p_mat.conj().T)
        out = acc
    return out


def rho_fidelity_with(rho: np.ndarray, g: Hypergraph) -> float:
    """<G| rho |G>, clipped to [0, 1] against fp overshoot."""
    vec = hypergraph_state_vector(g)
    return float(np.clip(np.real(vec.conj() @ rho @ vec), 0.0, 1.0))


def rho_generator_expectations(rho: np.ndarray, g: Hypergraph) -> tuple[float, ...]:
    """Tr(rho g_i) for every vertex, from the definitional matrices."""
    return tuple(
        float(np.real(np.trace(rho @ stabilizer_matrix(g, i)))) for i in range(1, g.n + 1)
    )


@dataclass(frozen=True)
class OracleReport:
    """Max elementwise deviations of the five stabilizer identities."""

    n: int
    edge_count: int
    commutation: float
    stabilization: float
    involution: float
    projector_product: float
    expansion: float
    atol: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "edge_count": self.edge_count,
            "max_deviation": {
                "commutation": self.commutation,
                "stabilization": self.stabilization,
                "involution": self.involution,
                "projector_product": self.projector_product,
                "expansion": self.expansion,
            },
            "atol": self.atol,
        }


def oracle_checks(g: Hypergraph, atol: float = ORACLE_ATOL) -> OracleReport:
    """Certify the stabilizer identities on dense matrices.

    Checks, for every vertex (pair): commutation [g_i, g_j] = 0, stabilization
    g_i|G> = |G>, involution g_i^2 = I, the projector product
    prod (I + g_i)/2 = |G><G|, and the expansion sum_t s_t = 2^r g_i. Raises
    OracleViolation naming the identity and indices on any failure.
    """
    _check_cap(g.n)
    dim = 1 << g.n
    gen = [stabilizer_matrix(g, i) for i in range(1, g.n + 1)]
    vec = hypergraph_state_vector(g)
    eye = np.eye(dim)

    def fail(identity: str, where: str, dev: float):
        raise OracleViolation(f"{identity} violated at {where}: max deviation {dev:.3e} > {atol}")

    dev_comm = 0.0
    for a in range(g.n):
        for b in range(a + 1, g.n):
            dev = float(np.max(np.abs(gen[a] @ gen[b] - gen[b] @ gen[a])))
            dev_comm = max(dev_comm, dev)
            if dev > atol:
                fail("commutation", f"(i={a + 1}, j={b + 1})", dev)

    dev_stab = 0.0
    for a in range(g.n):
        dev = float(np.max(np.abs(gen[a] @ vec - vec)))
        dev_stab = max(dev_stab, dev)
        if dev > atol:
            fail("stabilization", f"i={a + 1}", dev)

    dev_invol = 0.0
    for a in range(g.n):
        dev = float(np.max(np.abs(gen[a] @ gen[a] - eye)))
        dev_invol = max(dev_invol, dev)
        if dev > atol:
            fail("involution", f"i={a + 1}", dev)

    product = np.eye(dim, dtype=np.complex128)
    for a in range(g.n):
        product = product @ (eye + gen[a]) / 2.0
    dev_proj = float(np.max(np.abs(product - np.outer(vec, vec.conj()))))
    if dev_proj > atol:
        fail("projector_product", "full product", dev_proj)

    dev_expand = 0.0
    for a in range(g.n):
        nbhd = neighborhood(g, a + 1)
        total = np.zeros((dim, dim), dtype=np.complex128)
        for term in enumerate_terms(nbhd):
            total += term_matrix(term, g.n)
        dev = float(np.max(np.abs(total - 2**nbhd.r * gen[a])))
        dev_expand = max(dev_expand, dev)
        if dev > atol:
            fail("expansion", f"i={a + 1}", dev)

    return OracleReport(
        n=g.n,
        edge_count=len(g.edges),
        commutation=dev_comm,
        stabilization=dev_stab,
        involution=dev_invol,
        projector_product=dev_proj,
        expansion=dev_expand,
        atol=atol,
    )
