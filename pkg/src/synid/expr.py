"""Composite morphism expressions built from signature generators.

Expressions are trees of boxes, identities, copies and deletions joined by
sequential composition and the monoidal product. Every node knows its
domain and codomain, and construction fails if a sequential composite does
not type-check.
"""

from __future__ import annotations

from dataclasses import dataclass

from synid.errors import SignatureError
from synid.words import UNIT, ObjectWord


class MorphismExpr:
    dom: ObjectWord
    cod: ObjectWord

    def boxes(self) -> list:
        return []

    def format(self, order=None) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class Box(MorphismExpr):
    name: str
    dom: ObjectWord
    cod: ObjectWord

    def boxes(self):
        return [self]

    def format(self, order=None):
        return self.name


@dataclass(frozen=True)
class Identity(MorphismExpr):
    word: ObjectWord

    @property
    def dom(self):
        return self.word

    @property
    def cod(self):
        return self.word

    def format(self, order=None):
        if self.word.is_unit:
            return "id_1"
        names = _ordered(self.word, order or ())
        return " ⊗ ".join(f"id_{v}" for v in names for _ in range(self.word[v]))


@dataclass(frozen=True)
class Copy(MorphismExpr):
    obj: str
    n: int = 2

    @property
    def dom(self):
        return ObjectWord.power(self.obj)

    @property
    def cod(self):
        return ObjectWord.power(self.obj, self.n)

    def format(self, order=None):
        return f"copy_{self.obj}" if self.n == 2 else f"copy{self.n}_{self.obj}"


@dataclass(frozen=True)
class Delete(MorphismExpr):
    obj: str

    @property
    def dom(self):
        return ObjectWord.power(self.obj)

    @property
    def cod(self):
        return UNIT

    def format(self, order=None):
        return f"del_{self.obj}"


@dataclass(frozen=True)
class Par(MorphismExpr):
    parts: tuple

    @property
    def dom(self):
        out = UNIT
        for p in self.parts:
            out = out * p.dom
        return out

    @property
    def cod(self):
        out = UNIT
        for p in self.parts:
            out = out * p.cod
        return out

    def boxes(self):
        return [b for p in self.parts for b in p.boxes()]

    def format(self, order=None):
        return " ⊗ ".join(p.format(order) for p in self.parts)


@dataclass(frozen=True)
class Seq(MorphismExpr):
    """Sequential composite; ``parts`` are stored in application order."""

    parts: tuple

    def __post_init__(self):
        for a, b in zip(self.parts, self.parts[1:]):
            if a.cod != b.dom:
                raise SignatureError(
                    f"cannot compose {a.format()} : -> {a.cod} with {b.format()} : {b.dom} ->"
                )

    @property
    def dom(self):
        return self.parts[0].dom

    @property
    def cod(self):
        return self.parts[-1].cod

    def boxes(self):
        return [b for p in self.parts for b in p.boxes()]

    def format(self, order=None):
        # written right to left, as in ordinary function composition
        out = []
        for p in reversed(self.parts):
            s = p.format(order)
            out.append(f"({s})" if isinstance(p, Par) else s)
        return " · ".join(out)


def layered(modules, inputs: ObjectWord, outputs: ObjectWord, order=None) -> MorphismExpr:
    """One layer per module, in the given (topological) order.

    ``modules`` is a sequence of ``(name, dom, cod)``. Inputs consumed by
    several modules are copied up front; wires left over at the end that are
    not part of ``outputs`` are deleted.
    """
    produced = set()
    for _, _, cod in modules:
        produced |= cod.support()
    order = list(order or ())
    demand = {}
    for name, dom, cod in modules:
        for v, k in dom.items():
            if v not in produced or v in cod:
                demand[v] = demand.get(v, 0) + k
    wires = inputs
    layers = []
    first = []
    for v in _ordered(inputs, order):
        d = demand.get(v, 0)
        if d > 1:
            first.append(Copy(v, d))
        elif d == 0 and v not in outputs:
            first.append(Delete(v))
        else:
            first.append(Identity(ObjectWord.power(v)))
    if any(not isinstance(p, Identity) for p in first):
        layers.append(_par(first))
        wires = _par(first).cod
    for name, dom, cod in modules:
        if not dom <= wires:
            raise SignatureError(f"module {name} needs {dom} but only {wires} is available")
        rest = wires - dom
        box = Box(name, dom, cod)
        layers.append(_par([box] + ([Identity(rest)] if not rest.is_unit else [])))
        wires = rest * cod
    extra = wires - outputs
    if not extra.is_unit:
        kept = wires - extra
        tail = [Delete(v) for v in _ordered(extra, order) for _ in range(extra[v])]
        if not kept.is_unit:
            tail.append(Identity(kept))
        layers.append(_par(tail))
        wires = kept
    if wires != outputs:
        raise SignatureError(f"composite yields {wires}, expected {outputs}")
    if not layers:
        return Identity(inputs)
    return layers[0] if len(layers) == 1 else Seq(tuple(layers))


def _par(parts):
    return parts[0] if len(parts) == 1 else Par(tuple(parts))


def _ordered(w, order):
    rank = {n: i for i, n in enumerate(order)}
    return sorted(w, key=lambda n: (rank.get(n, len(rank)), n))
