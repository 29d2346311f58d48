"""Instance parsing and run records."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

from .graph import Graph

SCHEMA_VERSION = 1
FORMATS = ("edge-list", "similarity-matrix")


class InstanceError(ValueError):
    """Malformed instance text."""


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; ``#`` starts a comment line.

    Node count is the largest id plus one, or the ``N`` of a ``# nodes N``
    comment when that is larger.  Duplicates and both orientations of an
    edge are accepted; self-loops are not.
    """
    edges = []
    top = -1
    declared = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "nodes" and parts[1].isdigit():
                declared = int(parts[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InstanceError(f"line {lineno}: expected two node ids, got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InstanceError(f"line {lineno}: node ids must be integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise InstanceError(f"line {lineno}: negative node id")
        if u == v:
            raise InstanceError(f"line {lineno}: self-loop on node {u}")
        edges.append((u, v))
        top = max(top, u, v)
    if top < 0 and not declared:
        raise InstanceError("empty edge list")
    return Graph(max(top + 1, declared), edges)


def parse_similarity_matrix(text: str) -> Graph:
    """Parse ``n`` followed by an n x n score matrix.

    ``{i, j}`` becomes an edge when either score is non-negative; the
    diagonal is ignored.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InstanceError("empty similarity matrix")
    try:
        n = int(lines[0].split()[0])
    except ValueError:
        raise InstanceError(f"first line must hold the node count, got {lines[0]!r}") from None
    if n < 1:
        raise InstanceError("node count must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise InstanceError(f"expected {n} matrix rows, got {len(rows)}")
    g = Graph(n)
    for i, row in enumerate(rows):
        cells = row.split()
        if len(cells) != n:
            raise InstanceError(f"row {i}: expected {n} scores, got {len(cells)}")
        for j, cell in enumerate(cells):
            try:
                score = float(cell)
            except ValueError:
                raise InstanceError(f"row {i}: unparsable score {cell!r}") from None
            if i != j and score >= 0 and not g.has(i, j):
                g.set(i, j)
                g.m += 1
    return g


def format_edge_list(g: Graph) -> str:
    # the header keeps trailing isolated nodes
    lines = [f"# nodes {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def format_similarity_matrix(g: Graph) -> str:
    out = [str(g.n)]
    for u in range(g.n):
        out.append(" ".join("0" if u == v else ("1" if g.has(u, v) else "-1") for v in range(g.n)))
    return "\n".join(out) + "\n"


def parse_instance(text: str, fmt: str = "edge-list") -> Graph:
    if fmt == "edge-list":
        return parse_edge_list(text)
    if fmt == "similarity-matrix":
        return parse_similarity_matrix(text)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def read_instance(path, fmt: str = "edge-list") -> Graph:
    return parse_instance(Path(path).read_text(), fmt)


@dataclass
class RunRecord:
    instance: str
    config: dict
    status: str  # "solved" | "budget-exhausted"
    n: int
    m: int
    k_opt: Optional[int]
    lower_bound: int
    initial_bound: int
    per_k: list = field(default_factory=list)
    solution_count: int = 0
    solutions: Optional[list] = None
    summary: Optional[dict] = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        data = dict(data)
        if data.get("solutions") is not None:
            data["solutions"] = [tuple(tuple(p) for p in sol) for sol in data["solutions"]]
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))
