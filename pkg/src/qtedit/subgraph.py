"""Listing of induced P4/C4 subgraphs and per-pair subgraph counters.

A listed subgraph is a plain 4-tuple ``(u1, u2, u3, u4)`` where
``{u1,u2}, {u2,u3}, {u3,u4}`` are edges and ``{u1,u3}, {u2,u4}`` are not.
It is a P4 when ``{u1,u4}`` is a non-edge and a C4 otherwise.  The pair
``{u1,u4}`` is the *omitted* pair: editing it only turns the subgraph into
the other forbidden shape, so it is never branched on and may be shared
inside a packing.  Tuples are stored with ``u1 < u4``; a P4 is listed once
and a C4 four times, once per omitted cycle edge.
"""
from __future__ import annotations

from typing import Iterator

from .graph import BitMatrix, Graph, PairMatrix

Subgraph = tuple[int, int, int, int]

P4 = "P4"
C4 = "C4"


def _canon(a: int, b: int, c: int, d: int) -> Subgraph:
    return (a, b, c, d) if a < d else (d, c, b, a)


def shape(g: Graph, s: Subgraph) -> str:
    return C4 if g.rows[s[0]] >> s[3] & 1 else P4


def omitted_pair(s: Subgraph) -> tuple[int, int]:
    return (s[0], s[3])


def is_induced(g: Graph, s: Subgraph) -> bool:
    """Whether ``s`` is still a forbidden subgraph of ``g``."""
    a, b, c, d = s
    rows = g.rows
    ra, rb = rows[a], rows[b]
    return bool(
        ra >> b & 1
        and rb >> c & 1
        and rows[c] >> d & 1
        and not ra >> c & 1
        and not rb >> d & 1
    )


def subgraph_pairs(s: Subgraph) -> list[tuple[int, int]]:
    """The five non-omitted pairs, central edge first, as canonical pairs."""
    a, b, c, d = s
    out = []
    for x, y in ((b, c), (a, b), (c, d), (a, c), (b, d)):
        out.append((x, y) if x < y else (y, x))
    return out


def editable_pairs(s: Subgraph, blocked: BitMatrix | None) -> list[tuple[int, int]]:
    """Non-omitted pairs of ``s`` that are not blocked (at most five)."""
    pairs = subgraph_pairs(s)
    if blocked is None:
        return pairs
    rows = blocked.rows
    return [(x, y) for x, y in pairs if not rows[x] >> y & 1]


def list_global(g: Graph, exclude: BitMatrix | None = None) -> Iterator[Subgraph]:
    """All forbidden subgraphs of ``g``, each edge taken as the central edge.

    With ``exclude``, candidates using a marked pair are skipped while the
    candidate masks are built.  The masks are read lazily, so bits marked
    during the iteration are only partially honoured; callers that need
    exactness must check the yielded tuples themselves.
    """
    rows = g.rows
    lrows = exclude.rows if exclude is not None else None
    for u2 in range(g.n):
        r2 = rows[u2]
        for u3 in _bits_above(r2, u2):
            r3 = rows[u3]
            c1 = r2 & ~r3 & ~(1 << u3)
            c4 = r3 & ~r2 & ~(1 << u2)
            if not c1 or not c4:
                continue
            if lrows is not None:
                l2, l3 = lrows[u2], lrows[u3]
                if l2 >> u3 & 1:
                    continue
                c1 &= ~(l2 | l3)
                c4 &= ~(l2 | l3)
            while c1:
                low = c1 & -c1
                u1 = low.bit_length() - 1
                c1 ^= low
                w = c4
                while w:
                    low4 = w & -w
                    u4 = low4.bit_length() - 1
                    w ^= low4
                    if u1 < u4:
                        yield (u1, u2, u3, u4)
                    else:
                        yield (u4, u3, u2, u1)


def _bits_above(word: int, u: int) -> Iterator[int]:
    word >>= u + 1
    base = u + 1
    while word:
        low = word & -word
        yield base + low.bit_length() - 1
        word ^= low


def list_near(
    g: Graph,
    u: int,
    v: int,
    exclude: BitMatrix | None = None,
    with_omitted: bool = False,
) -> Iterator[Subgraph]:
    """Forbidden subgraphs whose node set contains both ``u`` and ``v``.

    For an edge every position is reported, including the C4 listing where
    ``{u, v}`` is the omitted edge.  For a non-edge the P4 having ``u`` and
    ``v`` as its degree-1 endpoints is skipped unless ``with_omitted`` is
    set.  ``exclude`` is applied best-effort to the candidate masks.
    """
    rows = g.rows
    ru, rv = rows[u], rows[v]
    bu, bv = 1 << u, 1 << v
    lrows = exclude.rows if exclude is not None else None
    if ru & bv:
        lu = lv = 0
        if lrows is not None:
            lu, lv = lrows[u], lrows[v]
        # {u,v} as the central edge
        xs = ru & ~rv & ~bv & ~(lu | lv)
        ys = rv & ~ru & ~bu & ~(lu | lv)
        if xs and ys:
            for x in _iter(xs):
                for y in _iter(ys):
                    yield (x, u, v, y) if x < y else (y, v, u, x)
        # {u,v} as an end edge: a - b - c - d with (a, b) = (u, v) or (v, u)
        for a, b, ra, rb, la, lb in ((u, v, ru, rv, lu, lv), (v, u, rv, ru, lv, lu)):
            cs = rb & ~ra & ~(1 << a) & ~(la | lb)
            for c in _iter(cs):
                rc = rows[c]
                ds = rc & ~rb & ~(1 << b) & ~(1 << a)
                if lrows is not None:
                    ds &= ~(lrows[c] | lb)
                for d in _iter(ds):
                    yield (a, b, c, d) if a < d else (d, c, b, a)
        # {u,v} as the omitted edge of a C4 u - x - y - v - u
        xs = ru & ~rv & ~bv & ~(lu | lv)
        for x in _iter(xs):
            ys = rv & ~ru & ~bu & rows[x]
            if lrows is not None:
                ys &= ~(lu | lv | lrows[x])
            for y in _iter(ys):
                yield (u, x, y, v) if u < v else (v, y, x, u)
    else:
        lu = lv = 0
        if lrows is not None:
            lu, lv = lrows[u], lrows[v]
        common = ru & rv
        if lrows is not None:
            common &= ~(lu | lv)
        # {u,v} at positions 1 and 3 of a - b - c - d, (a, c) = (u, v) or (v, u)
        for a, c, rc, lc in ((u, v, rv, lv), (v, u, ru, lu)):
            for b in _iter(common):
                ds = rc & ~rows[b] & ~(1 << b)
                if lrows is not None:
                    ds &= ~(lc | lrows[b])
                for d in _iter(ds):
                    yield (a, b, c, d) if a < d else (d, c, b, a)
        if with_omitted:
            # {u,v} as the degree-1 endpoints of a P4 u - x - y - v
            for x in _iter(ru & ~rv):
                for y in _iter(rv & ~ru & rows[x]):
                    yield (u, x, y, v) if u < v else (v, y, x, u)


def _iter(word: int) -> Iterator[int]:
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


def is_quasi_threshold(g: Graph) -> bool:
    return next(list_global(g), None) is None


class PairCounters:
    """Number of listed forbidden subgraphs per node pair.

    A subgraph contributes to each of its non-omitted, non-blocked pairs, so
    a C4 adds 3 to each of its edges and 4 to each diagonal.  Blocked pairs
    hold 0; ``saved`` records (pair index, value when blocked) in blocking
    order, and ``hidden`` keeps the live count of blocked pairs so that
    unblocking restores the right value even after unreverted edits.
    """

    __slots__ = ("n", "count", "total", "saved", "hidden")

    def __init__(self, n: int):
        self.n = n
        self.count = [0] * (n * n)
        self.total = 0
        self.saved: list[tuple[int, int]] = []
        self.hidden = [0] * (n * n)

    @classmethod
    def from_graph(cls, g: Graph, blocked: BitMatrix | None = None) -> "PairCounters":
        c = cls(g.n)
        n = g.n
        cnt = c.count
        total = 0
        for s in list_global(g):
            for x, y in subgraph_pairs(s):
                cnt[x * n + y] += 1
                total += 1
        c.total = total
        if blocked is not None:
            for u, v in blocked.pairs():
                c.block(u, v)
        return c

    def copy(self) -> "PairCounters":
        new = object.__new__(PairCounters)
        new.n = self.n
        new.count = list(self.count)
        new.total = self.total
        new.saved = list(self.saved)
        new.hidden = list(self.hidden)
        return new

    def get(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.count[u * self.n + v]

    def _add_near(self, g: Graph, u: int, v: int, blocked: BitMatrix, delta: int) -> None:
        n = self.n
        cnt = self.count
        hidden = self.hidden
        brows = blocked.rows
        changed = 0
        for a, b, c, d in list_near(g, u, v, with_omitted=True):
            for x, y in ((b, c), (a, b), (c, d), (a, c), (b, d)):
                if x > y:
                    x, y = y, x
                if brows[x] >> y & 1:
                    hidden[x * n + y] += delta
                else:
                    cnt[x * n + y] += delta
                    changed += delta
        self.total += changed

    def on_edit(self, g: Graph, u: int, v: int, blocked: BitMatrix) -> None:
        """Update after ``{u, v}`` was toggled in ``g``."""
        g.toggle(u, v)
        self._add_near(g, u, v, blocked, -1)
        g.toggle(u, v)
        self._add_near(g, u, v, blocked, +1)

    def edit(self, g: Graph, u: int, v: int, blocked: BitMatrix):
        """Toggle ``{u, v}`` in ``g`` and update the counters around it."""
        self._add_near(g, u, v, blocked, -1)
        e = g.toggle(u, v)
        self._add_near(g, u, v, blocked, +1)
        return e

    def block(self, u: int, v: int) -> None:
        if u > v:
            u, v = v, u
        idx = u * self.n + v
        old = self.count[idx]
        self.saved.append((idx, old))
        self.hidden[idx] = old
        self.count[idx] = 0
        self.total -= old

    def unblock(self, u: int, v: int) -> None:
        if not self.saved:
            raise IndexError("unblock without a matching block")
        if u > v:
            u, v = v, u
        idx = self.saved[-1][0]
        if idx != u * self.n + v:
            raise ValueError(f"unblock of ({u}, {v}) is out of stack order")
        self.saved.pop()
        old = self.hidden[idx]
        self.hidden[idx] = 0
        self.count[idx] = old
        self.total += old

    def max_pairs(self) -> tuple[int, list[tuple[int, int]]]:
        """The largest counter value and all pairs that reach it."""
        cnt = self.count
        best = max(cnt)
        if best == 0:
            return 0, []
        n = self.n
        out = []
        idx = cnt.index(best)
        while True:
            out.append(divmod(idx, n))
            try:
                idx = cnt.index(best, idx + 1)
            except ValueError:
                return best, out

    def matches(self, other: "PairCounters") -> bool:
        return self.count == other.count and self.total == other.total


def counters_init(g: Graph, blocked: PairMatrix | None = None) -> PairCounters:
    return PairCounters.from_graph(g, blocked)
