"""Packing lower bounds.

A packing is a list of forbidden subgraphs that pairwise share no pair other
than omitted or blocked ones.  Every member needs its own edit, so the
packing size is a lower bound on the remaining number of edits.
"""
from __future__ import annotations

import random
from typing import Sequence

from .graph import BitMatrix, Graph, PairMatrix
from .subgraph import PairCounters, Subgraph, is_induced, list_global, list_near

Packing = list  # list[Subgraph]

BOUND_KINDS = ("basic", "update", "local-search", "min-degree")

#: Probability of taking the least-covering candidate in a one-for-one swap.
BEST_SWAP_PROBABILITY = 0.7
#: Local search stops after this many rounds without a one-for-two swap.
MAX_STALE_ROUNDS = 5


def _pairs5(s: Subgraph):
    a, b, c, d = s
    return ((b, c), (a, b), (c, d), (a, c), (b, d))


def _fits(crow: list[int], brow: list[int], s: Subgraph) -> bool:
    for x, y in _pairs5(s):
        if crow[x] >> y & 1 and not brow[x] >> y & 1:
            return False
    return True


def _mark(crow: list[int], brow: list[int], s: Subgraph) -> None:
    for x, y in _pairs5(s):
        if not brow[x] >> y & 1:
            crow[x] |= 1 << y
            crow[y] |= 1 << x


def _unmark(crow: list[int], brow: list[int], s: Subgraph) -> None:
    for x, y in _pairs5(s):
        if not brow[x] >> y & 1:
            crow[x] &= ~(1 << y)
            crow[y] &= ~(1 << x)


def covered_matrix(packing: Sequence[Subgraph], blocked: BitMatrix) -> PairMatrix:
    """Pairs used by ``packing`` (omitted and blocked pairs excluded)."""
    cov = PairMatrix(blocked.n)
    for s in packing:
        _mark(cov.rows, blocked.rows, s)
    return cov


def packing_violations(packing: Sequence[Subgraph], g: Graph, blocked: BitMatrix) -> list[str]:
    """Audit a packing; an empty list means it is a valid lower bound."""
    problems = []
    cov = PairMatrix(g.n)
    for s in packing:
        if not is_induced(g, s):
            problems.append(f"{s} is not an induced forbidden subgraph")
        if not _fits(cov.rows, blocked.rows, s):
            problems.append(f"{s} shares a pair with another member")
        _mark(cov.rows, blocked.rows, s)
    return problems


def is_maximal(packing: Sequence[Subgraph], g: Graph, blocked: BitMatrix) -> bool:
    cov = covered_matrix(packing, blocked)
    return not any(_fits(cov.rows, blocked.rows, s) for s in list_global(g))


def basic_pack(g: Graph, blocked: BitMatrix, limit: int | None = None) -> Packing:
    """Greedy one-pass packing over the global listing.

    The result is inclusion-maximal unless ``limit`` stops it early.
    """
    cov = PairMatrix(g.n)
    crow, brow = cov.rows, blocked.rows
    members = []
    for s in list_global(g, exclude=cov):
        if _fits(crow, brow, s):
            members.append(s)
            _mark(crow, brow, s)
            if limit is not None and len(members) >= limit:
                break
    return members


def _refill(members: list, cov: PairMatrix, g: Graph, blocked: BitMatrix, seeds) -> None:
    crow, brow = cov.rows, blocked.rows
    for u, v in seeds:
        for s in list_near(g, u, v, exclude=cov):
            if _fits(crow, brow, s):
                members.append(s)
                _mark(crow, brow, s)


def update_pack(
    packing: Sequence[Subgraph],
    g: Graph,
    blocked: BitMatrix,
    pair: tuple[int, int],
    edited: bool = True,
) -> Packing:
    """Repair ``packing`` after ``pair`` was edited (or only blocked).

    An edit invalidates at most the one member using ``pair``; members that
    merely have it as their omitted pair stay forbidden subgraphs.  The
    packing is then refilled around the freed pairs and ``pair`` itself.
    """
    u, v = pair
    members = []
    removed = None
    for s in packing:
        if edited and removed is None and _uses(s, u, v):
            removed = s
        else:
            members.append(s)
    cov = covered_matrix(members, blocked)
    seeds = [pair]
    if removed is not None:
        seeds.extend((x, y) for x, y in _pairs5(removed) if (x, y) != (u, v) and (y, x) != (u, v))
    _refill(members, cov, g, blocked, seeds)
    return members


def _uses(s: Subgraph, u: int, v: int) -> bool:
    for x, y in _pairs5(s):
        if (x == u and y == v) or (x == v and y == u):
            return True
    return False


def approx_coverage(s: Subgraph, counters: PairCounters) -> int:
    """Sum of the subgraph counters over the non-omitted pairs of ``s``."""
    n = counters.n
    cnt = counters.count
    total = 0
    for x, y in _pairs5(s):
        if x > y:
            x, y = y, x
        total += cnt[x * n + y]
    return total


def local_search_improve(
    packing: Sequence[Subgraph],
    g: Graph,
    blocked: BitMatrix,
    counters: PairCounters,
    prune_at: int,
    rng: random.Random,
    best_probability: float = BEST_SWAP_PROBABILITY,
    max_stale_rounds: int = MAX_STALE_ROUNDS,
) -> Packing:
    """Grow a packing by replacing members with one or more subgraphs.

    Each round visits every member once.  A member is replaced by several
    compatible candidates when possible, otherwise swapped for a single one:
    the least covering candidate with probability ``best_probability``, a
    uniformly random one otherwise.  Stops on an unchanged round, after
    ``max_stale_rounds`` rounds without growth, or at ``prune_at`` members.
    """
    members = list(packing)
    if len(members) >= prune_at:
        return members
    brow = blocked.rows
    cov = covered_matrix(members, blocked)
    crow = cov.rows
    stale = 0
    while True:
        changed = grew = False
        i = 0
        while i < len(members):
            h = members[i]
            _unmark(crow, brow, h)
            cands = {}
            for x, y in _pairs5(h):
                if brow[x] >> y & 1:
                    continue
                for s in list_near(g, x, y, exclude=cov):
                    if s != h and s not in cands and _fits(crow, brow, s):
                        cands[s] = None
            if not cands:
                _mark(crow, brow, h)
                i += 1
                continue
            cand = list(cands)
            added = _try_grow(cand, crow, brow)
            if added:
                members[i] = added[0]
                members.extend(added[1:])
                changed = grew = True
            else:
                if rng.random() < best_probability:
                    pick = min(cand, key=lambda s: approx_coverage(s, counters))
                else:
                    pick = cand[rng.randrange(len(cand))]
                _mark(crow, brow, pick)
                members[i] = pick
                changed = True
            if len(members) >= prune_at:
                return members
            i += 1
        if not changed:
            break
        stale = 0 if grew else stale + 1
        if stale >= max_stale_rounds:
            break
    return members


def _try_grow(cand: list, crow: list[int], brow: list[int]) -> list:
    """Find a candidate plus at least one more that fit together.

    On success the returned subgraphs are marked in ``crow``.
    """
    for j, first in enumerate(cand):
        _mark(crow, brow, first)
        chosen = [first]
        for s in cand:
            if s is not first and _fits(crow, brow, s):
                _mark(crow, brow, s)
                chosen.append(s)
        if len(chosen) > 1:
            return chosen
        _unmark(crow, brow, first)
    return []


class BucketQueue:
    """Min-priority queue over small integer keys that only decrease by one.

    Each bucket is an insertion-ordered dict, so extraction is FIFO within
    the lowest non-empty bucket.
    """

    def __init__(self, keys: Sequence[int]):
        top = max(keys, default=0)
        self.buckets: list[dict[int, None]] = [{} for _ in range(top + 1)]
        self.key = list(keys)
        self.alive = [True] * len(keys)
        for item, k in enumerate(keys):
            self.buckets[k][item] = None
        self.low = 0
        self.size = len(keys)

    def __len__(self) -> int:
        return self.size

    def pop(self) -> int:
        buckets = self.buckets
        while not buckets[self.low]:
            self.low += 1
        bucket = buckets[self.low]
        item = next(iter(bucket))
        del bucket[item]
        self.alive[item] = False
        self.size -= 1
        return item

    def remove(self, item: int) -> None:
        del self.buckets[self.key[item]][item]
        self.alive[item] = False
        self.size -= 1

    def decrement(self, item: int) -> None:
        k = self.key[item]
        del self.buckets[k][item]
        k -= 1
        self.key[item] = k
        self.buckets[k][item] = None
        if k < self.low:
            self.low = k


def min_degree_pack(g: Graph, blocked: BitMatrix) -> Packing:
    """Greedy independent set on the conflict structure of all subgraphs.

    The key of a subgraph starts as the sum, over its usable pairs, of how
    many subgraphs contain that pair; the subgraph with the smallest key is
    taken, its conflicting subgraphs are dropped and the keys of their
    neighbours decrease by one per shared pair.
    """
    brow = blocked.rows
    n = g.n
    subs: list[Subgraph] = []
    incid: list[list[int]] = []
    by_pair: dict[int, list[int]] = {}
    for s in list_global(g):
        idx = len(subs)
        subs.append(s)
        mine = []
        for x, y in _pairs5(s):
            if brow[x] >> y & 1:
                continue
            if x > y:
                x, y = y, x
            key = x * n + y
            mine.append(key)
            by_pair.setdefault(key, []).append(idx)
        incid.append(mine)
    if not subs:
        return []
    keys = [sum(len(by_pair[p]) for p in mine) for mine in incid]
    queue = BucketQueue(keys)
    alive = queue.alive
    members = []
    while len(queue):
        h = queue.pop()
        members.append(subs[h])
        # drop every subgraph sharing a pair with h, then relax its pairs
        dropped = []
        for p in incid[h]:
            for other in by_pair[p]:
                if alive[other]:
                    queue.remove(other)
                    dropped.append(other)
        for gone in [h, *dropped]:
            for p in incid[gone]:
                for other in by_pair[p]:
                    if alive[other]:
                        queue.decrement(other)
    return members


class LowerBound:
    """Bound strategy: turns the inherited packing into a bound for a call."""

    def __init__(self, kind: str = "local-search", rng: random.Random | None = None):
        if kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {kind!r}; expected one of {BOUND_KINDS}")
        self.kind = kind
        self.rng = rng if rng is not None else random.Random(0)

    def initial(self, g: Graph, blocked: BitMatrix, counters: PairCounters) -> Packing:
        """Root packing: greedy pass improved by local search."""
        packing = basic_pack(g, blocked)
        return local_search_improve(packing, g, blocked, counters, g.n * g.n, self.rng)

    def at_entry(self, packing, pair, g, blocked, counters, k):
        """Packing for a call that was entered by editing ``pair`` (or None)."""
        kind = self.kind
        if kind == "basic":
            return None, len(basic_pack(g, blocked, limit=k + 1))
        if pair is not None:
            packing = update_pack(packing, g, blocked, pair, edited=True)
        return self._strengthen(packing, g, blocked, counters, k)

    def after_block(self, packing, pair, g, blocked, counters, k):
        """Packing for the remaining siblings once ``pair`` stays blocked."""
        if self.kind == "basic":
            return None, len(basic_pack(g, blocked, limit=k + 1))
        packing = update_pack(packing, g, blocked, pair, edited=False)
        return self._strengthen(packing, g, blocked, counters, k)

    def _strengthen(self, packing, g, blocked, counters, k):
        if len(packing) > k:
            return packing, len(packing)
        if self.kind == "local-search":
            packing = local_search_improve(packing, g, blocked, counters, k + 1, self.rng)
        elif self.kind == "min-degree":
            fresh = min_degree_pack(g, blocked)
            if len(fresh) > len(packing):
                packing = fresh
        return packing, len(packing)
