"""Small social networks used as reference instances.

Node ids follow the iteration order of the corresponding networkx graph.
"""
from __future__ import annotations

from pathlib import Path

import networkx as nx

from .graph import Graph
from .io import read_instance


def from_networkx(G: "nx.Graph") -> tuple[Graph, list]:
    """Convert an undirected networkx graph; returns the graph and node labels."""
    labels = list(G.nodes())
    index = {x: i for i, x in enumerate(labels)}
    edges = [(index[a], index[b]) for a, b in G.edges() if a != b]
    return Graph(len(labels), edges), labels


def karate() -> Graph:
    """Zachary's karate club, 34 nodes and 78 edges."""
    return from_networkx(nx.karate_club_graph())[0]


def lesmis() -> Graph:
    """Co-appearance network of Les Miserables characters, 77 nodes and 254 edges."""
    return from_networkx(nx.les_miserables_graph())[0]


BUILTIN = {"karate": karate, "lesmis": lesmis}


def load(name_or_path, fmt: str = "edge-list") -> Graph:
    """A built-in instance by name, otherwise a file in ``fmt``."""
    if str(name_or_path) in BUILTIN and not Path(name_or_path).exists():
        return BUILTIN[str(name_or_path)]()
    return read_instance(name_or_path, fmt)
