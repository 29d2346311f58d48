"""Clusterings induced by editing solutions and what all solutions share.

The clustering of a solution is the set of connected components of the
edited graph.  Partitions are stored as label tuples in canonical form:
blocks are numbered in the order of their smallest node.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .graph import Graph, iter_bits

Partition = tuple  # canonical label per node


def canonical(labels: Sequence) -> Partition:
    """Relabel blocks densely by first occurrence."""
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def n_blocks(p: Partition) -> int:
    return max(p) + 1 if p else 0


def components(g: Graph) -> Partition:
    labels = [-1] * g.n
    rows = g.rows
    block = 0
    for start in range(g.n):
        if labels[start] >= 0:
            continue
        labels[start] = block
        frontier = rows[start]
        reached = 1 << start
        while frontier & ~reached:
            new = frontier & ~reached
            reached |= new
            nxt = 0
            for v in iter_bits(new):
                labels[v] = block
                nxt |= rows[v]
            frontier = nxt
        block += 1
    return tuple(labels)


def meet(partitions: Iterable[Partition]) -> Partition:
    """Coarsest common refinement: nodes share a block iff they do everywhere."""
    partitions = list(partitions)
    if not partitions:
        raise ValueError("meet of no partitions")
    n = len(partitions[0])
    if any(len(p) != n for p in partitions):
        raise ValueError("partitions cover different node counts")
    return canonical(zip(*partitions))


@dataclass
class SolutionSummary:
    k: int
    solutions: int
    clusterings: int
    min_clusters: int
    max_clusters: int
    common_insertions: int
    common_deletions: int
    common_clusters: int
    union_insertions: int
    union_deletions: int
    intersection_clusters: int

    def as_dict(self) -> dict:
        return asdict(self)


class SolutionAnalyzer:
    """Streaming accumulator over the solutions of one input graph."""

    def __init__(self, g: Graph):
        self.g = g
        self.count = 0
        self.k = None
        self.common: set | None = None
        self.union: set = set()
        self.clusterings: set = set()
        self.min_clusters = None
        self.max_clusters = None
        self.intersection: Partition | None = None

    def add(self, solution: Iterable[tuple[int, int]]) -> None:
        edits = set(solution)
        if self.k is None:
            self.k = len(edits)
        elif len(edits) != self.k:
            raise ValueError("solutions of different sizes")
        self.count += 1
        self.common = edits if self.common is None else self.common & edits
        self.union |= edits
        part = components(self.g.apply(edits))
        self.clusterings.add(part)
        c = n_blocks(part)
        self.min_clusters = c if self.min_clusters is None else min(self.min_clusters, c)
        self.max_clusters = c if self.max_clusters is None else max(self.max_clusters, c)
        self.intersection = part if self.intersection is None else meet([self.intersection, part])

    def _split(self, pairs) -> tuple[int, int]:
        ins = sum(1 for u, v in pairs if not self.g.has(u, v))
        return ins, len(pairs) - ins

    def summary(self) -> SolutionSummary:
        if not self.count:
            raise ValueError("no solutions to summarize")
        common_ins, common_del = self._split(self.common)
        union_ins, union_del = self._split(self.union)
        return SolutionSummary(
            k=self.k,
            solutions=self.count,
            clusterings=len(self.clusterings),
            min_clusters=self.min_clusters,
            max_clusters=self.max_clusters,
            common_insertions=common_ins,
            common_deletions=common_del,
            common_clusters=n_blocks(components(self.g.apply(self.common))),
            union_insertions=union_ins,
            union_deletions=union_del,
            intersection_clusters=n_blocks(self.intersection),
        )


def summarize(g: Graph, solutions: Iterable[Iterable[tuple[int, int]]]) -> SolutionSummary:
    acc = SolutionAnalyzer(g)
    for sol in solutions:
        acc.add(sol)
    return acc.summary()
