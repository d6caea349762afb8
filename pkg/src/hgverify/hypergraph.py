"""Hypergraphs with 2- and 3-vertex edges: validation, neighborhoods, text I/O.

Vertices are labeled 1..n externally (file format, CLI, reports). Edges are
stored as strictly increasing tuples; duplicate edges are rejected rather than
cancelled, because applying the same generalized-CZ twice is the identity and
a repeated edge is almost certainly an input mistake.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence


class HypergraphError(ValueError):
    """Invalid hypergraph data (bad vertex, bad cardinality, duplicate edge)."""


class HypergraphFormatError(HypergraphError):
    """Malformed hypergraph text; the message names the offending line."""


def _canonical_edge(vertices: Sequence[int]) -> tuple[int, ...]:
    edge = tuple(sorted(vertices))
    if len(set(edge)) != len(edge):
        raise HypergraphError(f"edge {tuple(vertices)} repeats a vertex")
    if not 2 <= len(edge) <= 3:
        raise HypergraphError(f"edge {tuple(vertices)} has cardinality {len(edge)}, need 2 or 3")
    return edge


@dataclass(frozen=True)
class Hypergraph:
    """A vertex count plus a set of size-2/3 hyperedges.

    ``edges`` may be passed in any order and orientation; construction
    canonicalizes each edge to a strictly increasing tuple and rejects
    duplicates and out-of-range vertices.
    """

    n: int
    edges: frozenset[tuple[int, ...]]

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 1:
            raise HypergraphError(f"vertex count must be positive, got {n}")
        canonical = [_canonical_edge(e) for e in edges]
        seen: set[tuple[int, ...]] = set()
        for edge in canonical:
            if edge in seen:
                raise HypergraphError(f"duplicate edge {edge}")
            seen.add(edge)
            for v in edge:
                if not 1 <= v <= n:
                    raise HypergraphError(f"vertex {v} of edge {edge} outside [1, {n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(canonical))

    def sorted_edges(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, edges={sorted(self.edges)})"


@dataclass(frozen=True)
class Neighborhood:
    """Adjacency of one vertex: 2-edge partners and 3-edge partner pairs.

    ``cz_neighbors`` holds the two non-``vertex`` endpoints (j, k) of each
    size-3 edge through ``vertex``, with j < k, sorted for deterministic
    iteration. ``r`` is the number of such pairs.
    """

    vertex: int
    z_neighbors: frozenset[int]
    cz_neighbors: tuple[tuple[int, int], ...]

    @property
    def r(self) -> int:
        return len(self.cz_neighbors)


def neighborhood(g: Hypergraph, i: int) -> Neighborhood:
    """Collect the 2-edge and 3-edge neighborhoods of vertex ``i``."""
    if not 1 <= i <= g.n:
        raise HypergraphError(f"vertex {i} outside [1, {g.n}]")
    z: set[int] = set()
    pairs: set[tuple[int, int]] = set()
    for edge in g.edges:
        if i not in edge:
            continue
        others = tuple(v for v in edge if v != i)
        if len(edge) == 2:
            z.add(others[0])
        else:
            pairs.add(others)  # already sorted: edge tuples are increasing
    nbhd = Neighborhood(vertex=i, z_neighbors=frozenset(z), cz_neighbors=tuple(sorted(pairs)))
    assert nbhd.r <= comb(g.n - 1, 2)
    return nbhd


def relabel(g: Hypergraph, mapping: Mapping[int, int]) -> Hypergraph:
    """Apply a vertex permutation ``mapping`` (a bijection on 1..n)."""
    if sorted(mapping) != list(range(1, g.n + 1)) or sorted(mapping.values()) != list(range(1, g.n + 1)):
        raise HypergraphError("mapping must be a permutation of 1..n")
    return Hypergraph(g.n, [tuple(mapping[v] for v in e) for e in g.edges])


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the on-disk hypergraph format.

    Line 1 is the vertex count n. Each later non-empty line is one hyperedge
    as space-separated 1-based vertex indices. Lines starting with ``#`` are
    comments. Errors name the offending 1-based line.
    """
    n: int | None = None
    edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise HypergraphFormatError(f"line {lineno}: not a list of integers: {line!r}") from None
        if n is None:
            if len(values) != 1 or values[0] < 1:
                raise HypergraphFormatError(f"line {lineno}: first line must be a positive vertex count")
            n = values[0]
            continue
        try:
            edge = _canonical_edge(values)
        except HypergraphError as exc:
            raise HypergraphFormatError(f"line {lineno}: {exc}") from None
        for v in edge:
            if not 1 <= v <= n:
                raise HypergraphFormatError(f"line {lineno}: vertex {v} outside [1, {n}]")
        if edge in seen:
            raise HypergraphFormatError(f"line {lineno}: duplicate edge {edge}")
        seen.add(edge)
        edges.append(edge)
    if n is None:
        raise HypergraphFormatError("line 1: missing vertex count")
    return Hypergraph(n, edges)


def serialize_hypergraph(g: Hypergraph) -> str:
    """Emit the text format in canonical (sorted) edge order."""
    lines = [str(g.n)]
    lines.extend(" ".join(str(v) for v in edge) for edge in g.sorted_edges())
    return "\n".join(lines) + "\n"


def load_hypergraph(path) -> Hypergraph:
    """Read and parse a hypergraph file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())
