"""Choice of the forbidden subgraph and the order of its pairs to branch on."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .graph import BitMatrix, Graph
from .subgraph import (
    PairCounters,
    Subgraph,
    editable_pairs,
    is_induced,
    list_global,
    list_near,
)

BRANCH_KINDS = ("first", "most", "most-pruned")

SOLVED = "solved"
PRUNE = "prune"
PAIRS = "pairs"


class BranchDecision(NamedTuple):
    variant: str
    pairs: tuple = ()

    @classmethod
    def solved(cls) -> "BranchDecision":
        return cls(SOLVED)

    @classmethod
    def prune(cls) -> "BranchDecision":
        return cls(PRUNE)


@dataclass(frozen=True)
class BranchState:
    """Per-call branching memory, passed down the recursion by value.

    ``forced`` holds subgraphs that had a single editable pair when last
    observed; ``dead`` marks a subgraph whose pairs are all blocked.
    """

    forced: tuple = ()
    dead: bool = False


def observe_pair(bs: BranchState, g: Graph, pair: tuple[int, int], blocked: BitMatrix) -> BranchState:
    """Record forced or undestroyable subgraphs through a just-edited/blocked pair."""
    if bs.dead:
        return bs
    u, v = pair
    forced = None
    for s in list_near(g, u, v):
        free = editable_pairs(s, blocked)
        if not free:
            return BranchState(bs.forced, True)
        if len(free) == 1:
            if forced is None:
                forced = list(bs.forced)
            forced.append(s)
    if forced is None:
        return bs
    return BranchState(tuple(forced), False)


def select_first(g: Graph, blocked: BitMatrix, bs: BranchState | None = None) -> BranchDecision:
    """Branch on the first listed subgraph, pairs in listing order."""
    if bs is not None and bs.dead:
        return BranchDecision.prune()
    s = next(list_global(g), None)
    if s is None:
        return BranchDecision.solved()
    pairs = editable_pairs(s, blocked)
    if not pairs:
        return BranchDecision.prune()
    return BranchDecision(PAIRS, tuple(pairs))


def _forced_pair(bs: BranchState, g: Graph, blocked: BitMatrix):
    for s in bs.forced:
        if not is_induced(g, s):
            continue
        free = editable_pairs(s, blocked)
        if not free:
            return PRUNE
        if len(free) == 1:
            return free[0]
    return None


def _ordered_pairs(s: Subgraph, counters: PairCounters, blocked: BitMatrix):
    n = counters.n
    cnt = counters.count
    pairs = editable_pairs(s, blocked)
    counts = [cnt[x * n + y] for x, y in pairs]
    order = sorted(range(len(pairs)), key=lambda i: -counts[i])
    return [pairs[i] for i in order], [counts[i] for i in order]


def select_most(
    g: Graph,
    counters: PairCounters,
    bs: BranchState,
    blocked: BitMatrix,
) -> BranchDecision:
    """Branch on the subgraph whose pairs lie in the most other subgraphs.

    Candidates are the subgraphs through a pair with the maximum counter.
    Each candidate's editable pairs are sorted by decreasing counter; the
    count sequence without its last entry is compared lexicographically
    (larger wins, a proper prefix beats the longer sequence, remaining ties
    go to the smaller node tuple).
    """
    if bs.dead:
        return BranchDecision.prune()
    if counters.total == 0:
        return BranchDecision.solved()
    forced = _forced_pair(bs, g, blocked)
    if forced == PRUNE:
        return BranchDecision.prune()
    if forced is not None:
        return BranchDecision(PAIRS, (forced,))
    _, top = counters.max_pairs()
    best_key = None
    best_pairs = None
    seen = set()
    for u, v in top:
        for s in list_near(g, u, v):
            if s in seen:
                continue
            seen.add(s)
            pairs, counts = _ordered_pairs(s, counters, blocked)
            if not pairs:
                return BranchDecision.prune()
            key = (tuple(-c for c in counts[:-1]), s)
            if best_key is None or key < best_key:
                best_key = key
                best_pairs = pairs
    if best_pairs is None:
        # only reachable if the counters are out of sync with the graph
        raise RuntimeError("positive counter total but no subgraph found")
    return BranchDecision(PAIRS, tuple(best_pairs))
