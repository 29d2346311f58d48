"""Sequential branch-and-bound search for quasi-threshold editing."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .bounds import BOUND_KINDS, LowerBound, packing_violations
from .branching import (
    BRANCH_KINDS,
    PAIRS,
    PRUNE,
    SOLVED,
    BranchState,
    observe_pair,
    select_first,
    select_most,
)
from .graph import Graph, PairMatrix
from .subgraph import PairCounters

Solution = tuple  # sorted tuple of canonical (u, v) pairs


class SearchTimeout(Exception):
    """Raised inside the recursion once the wall-clock budget is used up."""


@dataclass
class SearchConfig:
    bound: str = "local-search"
    branching: str = "most-pruned"
    all_solutions: bool = False
    max_k: Optional[int] = None
    time_limit: Optional[float] = None
    seed: int = 0
    threads: int = 1
    debug: bool = False

    def __post_init__(self):
        if self.bound not in BOUND_KINDS:
            raise ValueError(f"bound must be one of {BOUND_KINDS}, got {self.bound!r}")
        if self.branching not in BRANCH_KINDS:
            raise ValueError(f"branching must be one of {BRANCH_KINDS}, got {self.branching!r}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass
class KStats:
    k: int
    calls: int = 0
    extra_bound_updates: int = 0
    pruned: int = 0
    solutions: int = 0
    seconds: float = 0.0
    finished: bool = False
    packages: int = 1

    def merge(self, other: "KStats") -> None:
        self.calls += other.calls
        self.extra_bound_updates += other.extra_bound_updates
        self.pruned += other.pruned


@dataclass
class SearchResult:
    k_opt: Optional[int]
    lower_bound: int
    solutions: list
    stats: list = field(default_factory=list)
    initial_bound: int = 0
    timed_out: bool = False
    violations: list = field(default_factory=list)

    @property
    def calls(self) -> int:
        return sum(s.calls for s in self.stats)

    @property
    def extra_bound_updates(self) -> int:
        return sum(s.extra_bound_updates for s in self.stats)

    @property
    def work(self) -> int:
        """Recursive calls plus extra bound updates, summed over all k."""
        return self.calls + self.extra_bound_updates


@dataclass
class SearchNodeState:
    """Everything needed to continue the search below one node.

    ``pending`` is the pair whose edit led into this node; the bound and
    branching call-states are those of the parent and are updated for it on
    entry.
    """

    k: int
    graph: Graph
    blocked: PairMatrix
    counters: PairCounters
    packing: Optional[list]
    branch_state: BranchState
    pending: Optional[tuple]
    edits: list


class Flag:
    """Minimal stand-in for ``threading.Event`` in single-worker runs."""

    __slots__ = ("_set",)

    def __init__(self):
        self._set = False

    def set(self) -> None:
        self._set = True

    def is_set(self) -> bool:
        return self._set


class Frame:
    """One level of the recursion path: pairs to branch on and progress."""

    __slots__ = ("k", "pairs", "index", "packing", "bs", "stolen", "blocked_here")

    def __init__(self, k, pairs, packing, bs):
        self.k = k
        self.pairs = pairs
        self.index = 0
        self.packing = packing
        self.bs = bs
        self.stolen = False
        self.blocked_here = []


class Searcher:
    """Runs the recursion below a search node on private state."""

    def __init__(self, cfg: SearchConfig, rng: random.Random | None = None):
        self.cfg = cfg
        self.bound = LowerBound(cfg.bound, rng if rng is not None else random.Random(cfg.seed))
        self.most = cfg.branching != "first"
        self.prune_early = cfg.branching == "most-pruned"
        self.debug = cfg.debug
        self.violations: list[str] = []
        self.stop = Flag()
        self.deadline: Optional[float] = None
        self.path: list[Frame] = []

    def run(self, node: SearchNodeState, sink: Callable[[Solution], None], stats: KStats) -> None:
        self.g = node.graph
        self.blocked = node.blocked
        self.counters = node.counters
        self.edits = list(node.edits)
        self.sink = sink
        self.stats = stats
        self.path = []
        self._recurse(node.k, node.packing, node.branch_state, node.pending)

    def on_enter(self) -> None:
        """Hook called at every recursion entry before the bound."""

    def _emit(self) -> None:
        self.stats.solutions += 1
        self.sink(tuple(sorted(self.edits)))
        if not self.cfg.all_solutions:
            self.stop.set()

    def _recurse(self, k: int, packing, bs: BranchState, pending) -> None:
        st = self.stats
        st.calls += 1
        if self.stop.is_set():
            return
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout
        self.on_enter()
        g, blocked, counters = self.g, self.blocked, self.counters
        if self.debug:
            entry_blocked = list(blocked.rows)
            self._audit_counters()
        if self.most and pending is not None:
            bs = observe_pair(bs, g, pending, blocked)
        packing, lb = self.bound.at_entry(packing, pending, g, blocked, counters, k)
        if self.debug and packing is not None:
            self.violations.extend(packing_violations(packing, g, blocked))
        if lb > k:
            st.pruned += 1
            return
        if self.most:
            decision = select_most(g, counters, bs, blocked)
        else:
            decision = select_first(g, blocked)
        if decision.variant == SOLVED:
            self._emit()
            return
        if decision.variant == PRUNE or k == 0:
            st.pruned += 1
            return
        frame = Frame(k, decision.pairs, packing, bs)
        self.path.append(frame)
        blocked_here = frame.blocked_here
        try:
            pairs = frame.pairs
            while frame.index < len(pairs):
                u, v = pairs[frame.index]
                frame.index += 1
                blocked.set(u, v)
                counters.block(u, v)
                blocked_here.append((u, v))
                counters.edit(g, u, v, blocked)
                self.edits.append((u, v))
                try:
                    self._recurse(k - 1, frame.packing, frame.bs, (u, v))
                finally:
                    counters.edit(g, u, v, blocked)
                    self.edits.pop()
                if frame.stolen or self.stop.is_set():
                    break
                remaining = len(pairs) - frame.index
                if remaining == 0:
                    break
                if self.most:
                    frame.bs = observe_pair(frame.bs, g, (u, v), blocked)
                    if frame.bs.dead:
                        st.pruned += 1
                        break
                # a pair inside a single subgraph cannot raise the bound
                if self.prune_early and remaining >= 2 and counters.saved[-1][1] > 1:
                    st.extra_bound_updates += 1
                    frame.packing, lb = self.bound.after_block(
                        frame.packing, (u, v), g, blocked, counters, k
                    )
                    if lb > k:
                        st.pruned += 1
                        break
        finally:
            for u, v in reversed(blocked_here):
                counters.unblock(u, v)
                blocked.clear(u, v)
            self.path.pop()
        if self.debug and blocked.rows != entry_blocked:
            self.violations.append(f"blocked pairs not restored at depth {len(self.edits)}")

    def _audit_counters(self) -> None:
        fresh = PairCounters.from_graph(self.g, self.blocked)
        if not fresh.matches(self.counters):
            self.violations.append(f"counters diverge from recount after edits {self.edits}")


def root_state(g: Graph, cfg: SearchConfig, rng: random.Random):
    """Counters, blocked matrix and root packing for ``g``."""
    g = g.copy()
    blocked = PairMatrix(g.n)
    counters = PairCounters.from_graph(g)
    packing = LowerBound(cfg.bound, rng).initial(g, blocked, counters)
    return g, blocked, counters, packing


def search_k(g: Graph, k: int, cfg: SearchConfig, sink: Callable[[Solution], None] | None = None) -> bool:
    """Whether ``g`` can be made quasi-threshold with at most ``k`` edits.

    Every reachable solution is passed to ``sink`` exactly once (only the
    first one unless ``cfg.all_solutions``).
    """
    rng = random.Random(cfg.seed)
    g, blocked, counters, packing = root_state(g, cfg, rng)
    found = []
    stats = KStats(k)

    def collect(sol):
        found.append(sol)
        if sink is not None:
            sink(sol)

    searcher = Searcher(cfg, rng)
    node = SearchNodeState(k, g, blocked, counters, packing, BranchState(), None, [])
    searcher.run(node, collect, stats)
    return bool(found)


def solve(g: Graph, cfg: SearchConfig | None = None) -> SearchResult:
    """Find the minimum number of edits by iterative deepening on ``k``."""
    cfg = cfg or SearchConfig()
    if cfg.threads > 1:
        from .parallel import run_parallel

        return run_parallel(g, cfg)
    start = time.monotonic()
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    rng = random.Random(cfg.seed)
    g, blocked, counters, packing = root_state(g, cfg, rng)
    initial = len(packing)
    searcher = Searcher(cfg, rng)
    searcher.deadline = deadline
    result = SearchResult(None, initial, [], initial_bound=initial)
    ks = itertools.count(initial) if cfg.max_k is None else range(initial, cfg.max_k + 1)
    for k in ks:
        stats = KStats(k)
        result.stats.append(stats)
        solutions: list = []
        searcher.stop = Flag()
        node = SearchNodeState(k, g, blocked, counters, packing, BranchState(), None, [])
        t0 = time.monotonic()
        try:
            searcher.run(node, solutions.append, stats)
        except SearchTimeout:
            stats.seconds = time.monotonic() - t0
            result.timed_out = True
            break
        stats.seconds = time.monotonic() - t0
        stats.finished = True
        if solutions:
            result.k_opt = k
            result.lower_bound = k
            result.solutions = sorted(solutions)
            break
        result.lower_bound = k + 1
    result.violations = searcher.violations
    return result
