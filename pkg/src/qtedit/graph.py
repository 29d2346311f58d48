"""Bit-matrix graph storage.

Every row of the adjacency matrix is a Python ``int`` used as a bitset, so
row combinations (``A[u] & ~A[x]``) are single big-int operations and set
bits are scanned lowest-first with the ``x & -x`` trick.
"""
from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

#: Largest node count accepted when building a graph (an n*n bit matrix).
MAX_NODES = 20000


class Edit(NamedTuple):
    """A single edge modification on a canonical pair ``u < v``."""

    u: int
    v: int
    insertion: bool

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)

    @property
    def kind(self) -> str:
        return "insertion" if self.insertion else "deletion"


def canonical_pair(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"a node pair needs two distinct nodes, got {u} twice")
    return (u, v) if u < v else (v, u)


def iter_bits(word: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``word`` in ascending order."""
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


class BitMatrix:
    """Symmetric n x n bit matrix with a zero diagonal."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: list[int] | None = None):
        if n < 1:
            raise ValueError("a graph needs at least one node")
        if n > MAX_NODES:
            raise ValueError(
                f"{n} nodes exceed the bit-matrix limit of {MAX_NODES} nodes"
            )
        self.n = n
        self.rows = [0] * n if rows is None else rows

    def __contains__(self, pair: tuple[int, int]) -> bool:
        u, v = pair
        return bool(self.rows[u] >> v & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, pairs={self.count()})"

    def has(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def set(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        self.rows[u] |= 1 << v
        self.rows[v] |= 1 << u

    def clear(self, u: int, v: int) -> None:
        self.rows[u] &= ~(1 << v)
        self.rows[v] &= ~(1 << u)

    def copy(self):
        new = object.__new__(type(self))
        new.n = self.n
        new.rows = list(self.rows)
        return new

    def count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def pairs(self) -> Iterator[tuple[int, int]]:
        """Set pairs ``(u, v)`` with ``u < v`` in row-major order."""
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                yield (u, u + 1 + v)

    def row_bits(self, u: int) -> list[int]:
        return list(iter_bits(self.rows[u]))

    def check_invariants(self) -> None:
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            assert row >= 0 and row & ~full == 0, f"row {u} has padding bits set"
            assert not row >> u & 1, f"self-loop on {u}"
            for v in iter_bits(row):
                assert self.rows[v] >> u & 1, f"asymmetric pair ({u}, {v})"

    def _check_pair(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"pair ({u}, {v}) out of range for {self.n} nodes")


class PairMatrix(BitMatrix):
    """Marks node pairs, e.g. blocked pairs or pairs covered by a packing."""

    __slots__ = ()


class Graph(BitMatrix):
    """Undirected simple graph stored as a bit adjacency matrix."""

    __slots__ = ("m",)

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        super().__init__(n)
        self.m = 0
        for u, v in edges:
            if not self.has(u, v):
                self.set(u, v)
                self.m += 1

    def copy(self) -> "Graph":
        new = super().copy()
        new.m = self.m
        return new

    def __eq__(self, other: object) -> bool:
        return BitMatrix.__eq__(self, other)

    __hash__ = None  # type: ignore[assignment]

    def toggle(self, u: int, v: int) -> Edit:
        """Flip the pair ``{u, v}``; applying it twice restores the graph."""
        self._check_pair(u, v)
        bit_v = 1 << v
        rows = self.rows
        insertion = not rows[u] & bit_v
        rows[u] ^= bit_v
        rows[v] ^= 1 << u
        self.m += 1 if insertion else -1
        a, b = (u, v) if u < v else (v, u)
        return Edit(a, b, insertion)

    def apply(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Return a copy with every pair in ``pairs`` toggled."""
        edited = self.copy()
        for u, v in pairs:
            edited.toggle(u, v)
        return edited

    def edges(self) -> Iterator[tuple[int, int]]:
        return self.pairs()

    def neighbors(self, u: int) -> list[int]:
        return self.row_bits(u)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def check_invariants(self) -> None:
        super().check_invariants()
        assert self.m == self.count(), f"cached m={self.m} but {self.count()} edges"

    def to_numpy(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges():
            adj[u, v] = adj[v, u] = 1
        return adj

    @classmethod
    def from_numpy(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj)
        us, vs = np.nonzero(np.triu(adj, 1))
        return cls(adj.shape[0], zip(us.tolist(), vs.tolist()))


def new_graph(n: int) -> Graph:
    return Graph(n)


def scan_row_masked(
    g: BitMatrix,
    base: int,
    and_rows: Sequence[int] = (),
    and_not_rows: Sequence[int] = (),
) -> Iterator[int]:
    """Scan ``row(base) & row(a)... & ~row(b)...`` in ascending order.

    ``and_rows`` and ``and_not_rows`` hold node ids whose rows of ``g`` are
    combined with the base row; the base node itself is never reported.
    """
    word = g.rows[base]
    for a in and_rows:
        word &= g.rows[a]
    for b in and_not_rows:
        word &= ~g.rows[b]
    return iter_bits(word & ~(1 << base))


def permute_nodes(g: Graph, seed: int | None) -> tuple[Graph, list[int]]:
    """Relabel nodes with a random permutation drawn from ``numpy``'s PCG64.

    Returns the permuted graph and ``mapping`` with ``mapping[old] = new``.
    ``seed=None`` is the identity permutation.
    """
    if seed is None:
        mapping = list(range(g.n))
    else:
        mapping = np.random.default_rng(seed).permutation(g.n).tolist()
    permuted = Graph(g.n, ((mapping[u], mapping[v]) for u, v in g.edges()))
    return permuted, mapping


def invert_mapping(mapping: Sequence[int]) -> list[int]:
    inverse = [0] * len(mapping)
    for old, new in enumerate(mapping):
        inverse[new] = old
    return inverse
