"""Work-stealing parallel search over worker processes.

Workers pull work packages (self-contained search nodes) from one shared
queue.  At every recursion entry a worker checks whether the queue holds
fewer packages than there are workers; if so it splits the unexplored
siblings off the *top* of its recursion path, where the largest subtrees are
expected, until the queue holds twice as many packages as workers.
"""
from __future__ import annotations

import itertools
import multiprocessing as mp
import random
import time
import traceback
from typing import Optional

from .branching import BranchState
from .graph import Graph
from .search import (
    KStats,
    SearchConfig,
    SearchNodeState,
    SearchResult,
    SearchTimeout,
    Searcher,
    root_state,
    solve,
)


class _Shared:
    """Process-shared scheduler state; every counter is guarded by ``cond``."""

    def __init__(self, ctx, threads: int):
        self.threads = threads
        self.cond = ctx.Condition()
        self.pending = ctx.Value("i", 0, lock=False)
        self.active = ctx.Value("i", 0, lock=False)
        self.created = ctx.Value("i", 0, lock=False)
        self.shutdown = ctx.Value("b", 0, lock=False)
        self.stop = ctx.Event()
        self.tasks = ctx.Queue()
        self.results = ctx.Queue()

    def enqueue(self, packages: list) -> None:
        with self.cond:
            for pkg in packages:
                self.tasks.put(pkg)
            self.pending.value += len(packages)
            self.created.value += len(packages)
            self.cond.notify_all()


class _StealingSearcher(Searcher):
    def __init__(self, cfg, rng, shared: _Shared, deadline, round_id):
        super().__init__(cfg, rng)
        self.shared = shared
        self.stop = shared.stop
        self.deadline = deadline
        self.round_id = round_id

    def on_enter(self) -> None:
        if self.shared.pending.value < self.shared.threads:
            maybe_spawn(self, self.shared)


def _state_at(searcher: Searcher, level: int):
    """Copy of the search state at path element ``level``.

    Edits of the children in progress at ``level`` and below are undone, as
    are the blocks made below ``level``; blocks of ``level`` itself stay.
    """
    g = searcher.g.copy()
    blocked = searcher.blocked.copy()
    counters = searcher.counters.copy()
    edits = list(searcher.edits)
    path = searcher.path
    for depth in range(len(path) - 1, level - 1, -1):
        fr = path[depth]
        u, v = fr.pairs[fr.index - 1]
        counters.edit(g, u, v, blocked)
        edits.pop()
        if depth > level:
            for a, b in reversed(fr.blocked_here):
                counters.unblock(a, b)
                blocked.clear(a, b)
    return g, blocked, counters, edits


def maybe_spawn(searcher: Searcher, shared: _Shared) -> int:
    """Move unexplored siblings from the top of the path into the queue.

    Returns the number of packages created.  Stolen path elements are marked
    so that the worker unwinds past them instead of continuing there.
    """
    target = 2 * shared.threads
    made = 0
    for level, fr in enumerate(searcher.path):
        if shared.pending.value >= target:
            break
        if fr.stolen or fr.index >= len(fr.pairs):
            continue
        g, blocked, counters, edits = _state_at(searcher, level)
        packages = []
        for u, v in fr.pairs[fr.index:]:
            blocked.set(u, v)
            counters.block(u, v)
            counters.edit(g, u, v, blocked)
            node = SearchNodeState(
                fr.k - 1,
                g.copy(),
                blocked.copy(),
                counters.copy(),
                fr.packing,
                fr.bs,
                (u, v),
                edits + [(u, v)],
            )
            packages.append((searcher.round_id, searcher.cfg, searcher.deadline, node))
            counters.edit(g, u, v, blocked)
        fr.index = len(fr.pairs)
        fr.stolen = True
        shared.enqueue(packages)
        made += len(packages)
    return made


def worker_loop(shared: _Shared, worker_id: int) -> None:
    """Take packages until shutdown; one result message per package."""
    rng = None
    seed = None
    while True:
        with shared.cond:
            while shared.pending.value == 0 and not shared.shutdown.value:
                shared.cond.wait()
            if shared.shutdown.value:
                return
            shared.pending.value -= 1
            shared.active.value += 1
        round_id, cfg, deadline, node = shared.tasks.get()
        if seed != cfg.seed or rng is None:
            seed = cfg.seed
            rng = random.Random(seed * 7919 + worker_id + 1)
        solutions: list = []
        stats = KStats(node.k)
        timed_out = False
        violations: list = []
        error = None
        if not shared.stop.is_set():
            searcher = _StealingSearcher(cfg, rng, shared, deadline, round_id)
            try:
                searcher.run(node, solutions.append, stats)
            except SearchTimeout:
                timed_out = True
                shared.stop.set()
            except Exception:  # reported to the parent, which re-raises
                error = traceback.format_exc()
                shared.stop.set()
            violations = searcher.violations
        shared.results.put((round_id, solutions, stats, timed_out, violations, error))
        with shared.cond:
            shared.active.value -= 1
            shared.cond.notify_all()


class WorkStealingPool:
    """A reusable set of worker processes for parallel searches.

    Use as a context manager; one pool can serve many ``run_parallel`` calls.
    """

    def __init__(self, threads: int):
        if threads < 1:
            raise ValueError("threads must be at least 1")
        ctx = mp.get_context("fork")
        self.threads = threads
        self.shared = _Shared(ctx, threads)
        self._round = itertools.count(1)
        self.procs = [
            ctx.Process(target=worker_loop, args=(self.shared, i), daemon=True)
            for i in range(threads)
        ]
        for p in self.procs:
            p.start()

    def __enter__(self) -> "WorkStealingPool":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        sh = self.shared
        with sh.cond:
            sh.shutdown.value = 1
            sh.cond.notify_all()
        for p in self.procs:
            p.join(timeout=10)
            if p.is_alive():
                p.terminate()

    def run_round(self, node: SearchNodeState, cfg: SearchConfig, deadline):
        """Explore the subtree of ``node`` with all workers; blocks until done."""
        sh = self.shared
        round_id = next(self._round)
        sh.stop.clear()
        with sh.cond:
            sh.created.value = 0
        sh.enqueue([(round_id, cfg, deadline, node)])
        with sh.cond:
            while sh.pending.value or sh.active.value:
                sh.cond.wait()
            expected = sh.created.value
        solutions: list = []
        stats = KStats(node.k)
        timed_out = False
        violations: list = []
        for _ in range(expected):
            rid, sols, st, to, viol, error = sh.results.get()
            if error is not None:
                raise RuntimeError(f"worker failed:\n{error}")
            assert rid == round_id, "stale result from an earlier round"
            solutions.extend(sols)
            stats.merge(st)
            timed_out |= to
            violations.extend(viol)
        stats.solutions = len(solutions)
        stats.packages = expected
        return solutions, stats, timed_out, violations


def run_parallel(g: Graph, cfg: SearchConfig, pool: Optional[WorkStealingPool] = None) -> SearchResult:
    """Parallel counterpart of :func:`qtedit.search.solve`.

    With one thread this is the sequential search.  Solutions are reported in
    canonical sorted order so results can be compared across worker counts.
    """
    threads = pool.threads if pool is not None else cfg.threads
    if threads == 1 and pool is None:
        seq_cfg = SearchConfig(**{**cfg.__dict__, "threads": 1})
        return solve(g, seq_cfg)
    start = time.monotonic()
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    rng = random.Random(cfg.seed)
    g, blocked, counters, packing = root_state(g, cfg, rng)
    initial = len(packing)
    result = SearchResult(None, initial, [], initial_bound=initial)
    own = pool is None
    if own:
        pool = WorkStealingPool(threads)
    try:
        ks = itertools.count(initial) if cfg.max_k is None else range(initial, cfg.max_k + 1)
        for k in ks:
            node = SearchNodeState(k, g, blocked, counters, packing, BranchState(), None, [])
            t0 = time.monotonic()
            solutions, stats, timed_out, violations = pool.run_round(node, cfg, deadline)
            stats.seconds = time.monotonic() - t0
            result.stats.append(stats)
            result.violations.extend(violations)
            if timed_out and (cfg.all_solutions or not solutions):
                result.timed_out = True
                break
            stats.finished = True
            if solutions:
                result.k_opt = k
                result.lower_bound = k
                result.solutions = sorted(solutions)
                break
            result.lower_bound = k + 1
    finally:
        if own:
            pool.close()
    return result
