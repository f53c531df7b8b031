"""Acyclic directed mixed graphs and the topological queries used for fixing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from synid.errors import CycleError, GraphError, NotFixableError, UnknownNodeError


def _pair(a, b):
    return frozenset((a, b))


@dataclass(frozen=True)
class Admg:
    """Nodes plus directed and bidirected edges.

    ``nodes`` keeps declaration order; it is the tie-break used by
    :meth:`topo_order` and by every canonical printout downstream.
    """

    nodes: tuple
    directed: frozenset = frozenset()
    bidirected: frozenset = frozenset()
    _index: dict = field(init=False, repr=False, compare=False)

    def __init__(self, nodes: Iterable[str], directed=(), bidirected=()):
        nodes = tuple(dict.fromkeys(nodes))
        known = set(nodes)
        directed = frozenset((a, b) for a, b in directed)
        pairs = set()
        for a, b in bidirected:
            pairs.add(_pair(a, b))
        for a, b in directed:
            for v in (a, b):
                if v not in known:
                    raise UnknownNodeError(v)
            if a == b:
                raise GraphError(f"self loop on {a!r}")
        for p in pairs:
            for v in p:
                if v not in known:
                    raise UnknownNodeError(v)
            if len(p) != 2:
                raise GraphError(f"bidirected self loop on {next(iter(p))!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "directed", directed)
        object.__setattr__(self, "bidirected", frozenset(pairs))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(nodes)})
        self.topo_order()

    def __eq__(self, other):
        if not isinstance(other, Admg):
            return NotImplemented
        return (
            set(self.nodes) == set(other.nodes)
            and self.directed == other.directed
            and self.bidirected == other.bidirected
        )

    def __hash__(self):
        return hash((frozenset(self.nodes), self.directed, self.bidirected))

    def _check(self, vs):
        for v in vs:
            if v not in self._index:
                raise UnknownNodeError(v)

    def position(self, v) -> int:
        """Declaration index of ``v``."""
        self._check([v])
        return self._index[v]

    def sort(self, vs) -> list:
        return sorted(vs, key=self._index.__getitem__)

    def directed_edges(self) -> list:
        return sorted(self.directed, key=lambda e: (self._index[e[0]], self._index[e[1]]))

    def bidirected_edges(self) -> list:
        edges = [tuple(self.sort(p)) for p in self.bidirected]
        return sorted(edges, key=lambda e: (self._index[e[0]], self._index[e[1]]))

    def parents(self, v) -> frozenset:
        self._check([v])
        return frozenset(a for a, b in self.directed if b == v)

    def children(self, v) -> frozenset:
        self._check([v])
        return frozenset(b for a, b in self.directed if a == v)

    def siblings(self, v) -> frozenset:
        self._check([v])
        return frozenset(w for p in self.bidirected if v in p for w in p if w != v)

    def _closure(self, seed, step) -> frozenset:
        seed = set(seed)
        self._check(seed)
        seen = set(seed)
        stack = list(seed)
        while stack:
            for w in step(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    def ancestors(self, s) -> frozenset:
        """Reflexive ancestors of the set ``s``."""
        return self._closure(s, self.parents)

    def descendants(self, s) -> frozenset:
        """Reflexive descendants of the set ``s``."""
        return self._closure(s, self.children)

    def district(self, v) -> frozenset:
        return self._closure([v], self.siblings)

    def districts(self) -> list:
        """Partition of the nodes into bidirected-connected components.

        Components are listed by their earliest node in topological order.
        """
        rank = {v: i for i, v in enumerate(self.topo_order())}
        out, seen = [], set()
        for v in self.topo_order():
            if v not in seen:
                d = self.district(v)
                seen |= d
                out.append(d)
        out.sort(key=lambda d: min(rank[v] for v in d))
        return out

    def subgraph(self, keep) -> "Admg":
        keep = set(keep)
        self._check(keep)
        return Admg(
            [v for v in self.nodes if v in keep],
            [(a, b) for a, b in self.directed if a in keep and b in keep],
            [tuple(p) for p in self.bidirected if p <= keep],
        )

    def topo_order(self) -> tuple:
        """Stable Kahn order; ties go to the earlier-declared node."""
        indeg = {v: 0 for v in self.nodes}
        kids = {v: [] for v in self.nodes}
        for a, b in self.directed:
            indeg[b] += 1
            kids[a].append(b)
        order = []
        ready = [v for v in self.nodes if indeg[v] == 0]
        while ready:
            ready.sort(key=self._index.__getitem__)
            v = ready.pop(0)
            order.append(v)
            for w in kids[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        if len(order) != len(self.nodes):
            raise CycleError(self.sort(v for v in self.nodes if indeg[v] > 0))
        return tuple(order)

    def topo_orders(self):
        """Every topological order, lazily; the first is :meth:`topo_order`."""
        pa = {v: set(self.parents(v)) for v in self.nodes}
        order, placed = [], set()

        def rec():
            if len(order) == len(self.nodes):
                yield tuple(order)
                return
            for v in self.nodes:
                if v not in placed and pa[v] <= placed:
                    order.append(v)
                    placed.add(v)
                    yield from rec()
                    placed.discard(v)
                    order.pop()

        yield from rec()


@dataclass(frozen=True)
class Cadmg:
    """An ADMG in which some nodes are fixed (held as context)."""

    base: Admg
    fixed: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "fixed", frozenset(self.fixed))
        self.base._check(self.fixed)
        for v in self.fixed:
            if self.base.parents(v) or self.base.siblings(v):
                raise GraphError(f"fixed node {v!r} still has incoming edges")

    @classmethod
    def of(cls, g: Admg) -> "Cadmg":
        return cls(g, frozenset())

    def children(self, v) -> frozenset:
        return self.base.children(v)

    def is_fixable(self, v) -> bool:
        """True iff the district and descendants of ``v`` meet only at ``v``."""
        self.base._check([v])
        if v in self.fixed:
            raise NotFixableError(f"{v!r} is already fixed")
        return self.base.district(v) & self.base.descendants([v]) == {v}

    def markov_blanket(self, v) -> frozenset:
        """Random nodes of the district of ``v`` and of its parents, minus ``v``."""
        d = self.base.district(v)
        mb = set(d)
        for w in d:
            mb |= self.base.parents(w)
        return frozenset(mb - {v} - self.fixed)

    def fix(self, v) -> "Cadmg":
        if not self.is_fixable(v):
            raise NotFixableError(f"{v!r} is not fixable")
        g = self.base
        g2 = Admg(
            g.nodes,
            [(a, b) for a, b in g.directed if b != v],
            [tuple(p) for p in g.bidirected if v not in p],
        )
        return Cadmg(g2, self.fixed | {v})


def topo_order(g: Admg) -> tuple:
    return g.topo_order()


def is_fixable(c: Cadmg, v) -> bool:
    return c.is_fixable(v)


def fix_in_graph(c: Cadmg, v) -> Cadmg:
    return c.fix(v)
