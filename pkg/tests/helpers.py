"""Graphs shared by the test modules."""

import itertools
from pathlib import Path

from synid import Admg

MODELS = Path(__file__).resolve().parent.parent / "examples" / "models"


def backdoor():
    return Admg(["X", "Y", "U"], [("U", "X"), ("U", "Y"), ("X", "Y")])


def frontdoor():
    return Admg(["X", "Z", "Y"], [("X", "Z"), ("Z", "Y")], [("X", "Y")])


def ex51():
    return Admg(
        ["X1", "X2", "X3", "X4"],
        [("X1", "X2"), ("X1", "X3"), ("X2", "X3"), ("X3", "X4")],
        [("X2", "X4")],
    )


def bow():
    return Admg(["X", "Y"], [("X", "Y")], [("X", "Y")])


def small_admgs(max_nodes=4, max_bidirected=2, dags_only=False):
    """Every ADMG on V1..Vn (n <= max_nodes) whose directed part respects V1<V2<..."""
    for n in range(1, max_nodes + 1):
        nodes = [f"V{i}" for i in range(1, n + 1)]
        pairs = list(itertools.combinations(nodes, 2))
        for dmask in range(1 << len(pairs)):
            directed = [p for i, p in enumerate(pairs) if dmask >> i & 1]
            for k in range((0 if dags_only else max_bidirected) + 1):
                for bi in itertools.combinations(pairs, k):
                    yield Admg(nodes, directed, bi)


