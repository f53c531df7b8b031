"""Signature manipulations (Hide, Control, Fix, simplification) and fixing plans."""

from __future__ import annotations

from dataclasses import dataclass

from synid.admg import Admg, Cadmg
from synid.errors import NoValidSequence, SignatureError
from synid.signature import MonoidalSignature
from synid.words import ObjectWord

HIDE = "Hide"
FIX = "Fix"


def hide(s: MonoidalSignature, v) -> MonoidalSignature:
    """Marginalize ``v``: drop one output wire from its module."""
    m = s.module(v)
    k = s.cod[m][v]
    if k < 1:
        raise SignatureError(f"cod({m}) has no {v} output left to hide")
    cod = dict(s.cod)
    cod[m] = s.cod[m].with_count(v, k - 1)
    return s.replace(cod=cod)


def control(s: MonoidalSignature, v) -> MonoidalSignature:
    """Turn Module(v) into a copied identity and cut the wires that fed it."""
    m = s.module(v)
    old = s.dom[m]
    dom = dict(s.dom)
    dom[m] = ObjectWord.power(v)
    cod = {n: (w if n == m else w - old) for n, w in s.cod.items()}
    return s.replace(dom=dom, cod=cod)


def fix(s: MonoidalSignature, v) -> MonoidalSignature:
    return control(hide(s, v), v)


def _hide_all(s, vs):
    for v in vs:
        s = hide(s, v)
    return s


def delete_identities(s: MonoidalSignature) -> MonoidalSignature:
    drop = [
        m for m in s.morphisms()
        if len(s.objects_of(m)) == 1
        and s.dom[m] == s.cod[m] == ObjectWord.power(s.objects_of(m)[0])
    ]
    if not drop:
        return s
    modules = {v: n for v, n in s.modules.items() if n not in drop}
    dom = {n: w for n, w in s.dom.items() if n not in drop}
    cod = {n: w for n, w in s.cod.items() if n not in drop}
    return s.replace(modules=modules, dom=dom, cod=cod)


def simplify_step(s: MonoidalSignature) -> MonoidalSignature:
    """Remove modules with no outputs; their producers lose the feeding wires."""
    dead = [m for m in s.morphisms() if s.cod[m].is_unit]
    if not dead:
        return s
    cut = ObjectWord()
    for d in dead:
        cut = cut * s.dom[d]
    out = s.without(dead)
    cod = {n: w - cut for n, w in out.cod.items()}
    return out.replace(cod=cod).without(())


def simplify_fixpoint(s: MonoidalSignature) -> MonoidalSignature:
    while True:
        nxt = simplify_step(s)
        if nxt == s:
            return s
        s = nxt


def simple(s: MonoidalSignature) -> MonoidalSignature:
    return delete_identities(simplify_fixpoint(s))


@dataclass(frozen=True)
class FixPlan:
    """Fixing steps in application order.

    ``str(plan)`` gives ``Fix(Z);Hide(X)``; :meth:`composition` gives the
    right-to-left operator form ``Hide_X ∘ Fix_Z``.
    """

    steps: tuple
    district: frozenset = frozenset()

    def __post_init__(self):
        nodes = [v for _, v in self.steps]
        if len(nodes) != len(set(nodes)):
            raise ValueError("a node may appear in at most one step")

    def __str__(self):
        return ";".join(f"{op}({v})" for op, v in self.steps)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def nodes(self) -> frozenset:
        return frozenset(v for _, v in self.steps)

    def composition(self) -> str:
        if not self.steps:
            return "id"
        return " ∘ ".join(f"{op}_{v}" for op, v in reversed(self.steps))

    @classmethod
    def parse(cls, text: str, district=frozenset()) -> "FixPlan":
        steps = []
        for tok in filter(None, (t.strip() for t in text.split(";"))):
            op, _, rest = tok.partition("(")
            if op not in (HIDE, FIX) or not rest.endswith(")"):
                raise ValueError(f"bad plan step {tok!r}")
            steps.append((op, rest[:-1]))
        return cls(tuple(steps), frozenset(district))


def plan_fixseq(g: Admg, w, district=None) -> FixPlan:
    """Choose a valid fixing order for the nodes ``w``.

    Fixability and the child test are evaluated on a conditional ADMG that
    is updated after every step. Among fixable candidates the earliest in
    topological order is taken, so ancestors are fixed while they still
    feed the rest of the graph. Raises :class:`NoValidSequence` if the
    remaining nodes are all unfixable.
    """
    remaining = set(w)
    g._check(remaining)
    if district is None:
        district = frozenset(g.nodes) - remaining
    rank = {v: i for i, v in enumerate(g.topo_order())}
    c = Cadmg.of(g)
    steps = []
    while remaining:
        ok = [v for v in remaining if c.is_fixable(v)]
        if not ok:
            raise NoValidSequence(district, remaining)
        v = min(ok, key=rank.__getitem__)
        steps.append((HIDE if not c.children(v) else FIX, v))
        c = c.fix(v)
        remaining.discard(v)
    return FixPlan(tuple(steps), frozenset(district))


def step_is_sound(c: Cadmg, rank, hidden, v) -> bool:
    """Whether Control of ``v`` on the chain-factored signature is a true fix.

    Fixing divides the current kernel by the conditional of ``v`` given its
    Markov blanket. Control instead drops the chain module of ``v``, which
    conditions on everything earlier in the chain order. The two agree when
    the Markov blanket's random nodes all come earlier and no marginalized
    node does.
    """
    if any(rank[h] < rank[v] for h in hidden):
        return False
    return all(rank[u] < rank[v] for u in c.markov_blanket(v))


def plan_sound(g: Admg, w, order=None, district=None):
    """A fixing plan for ``w`` whose every Fix step passes :func:`step_is_sound`.

    Depth-first over fixable candidates, earliest in ``order`` first, so the
    result equals :func:`plan_fixseq` whenever that plan is already sound.
    Returns ``None`` if no such plan exists for this order.
    """
    w = frozenset(w)
    g._check(w)
    if district is None:
        district = frozenset(g.nodes) - w
    order = tuple(order or g.topo_order())
    rank = {v: i for i, v in enumerate(order)}
    dead = set()

    def search(c, remaining, hidden, steps):
        if not remaining:
            return steps
        key = (remaining, hidden)
        if key in dead:
            return None
        for v in sorted((v for v in remaining if c.is_fixable(v)), key=rank.__getitem__):
            if c.children(v):
                if not step_is_sound(c, rank, hidden, v):
                    continue
                step, h = (FIX, v), hidden
            else:
                step, h = (HIDE, v), hidden | {v}
            found = search(c.fix(v), remaining - {v}, h, steps + (step,))
            if found is not None:
                return found
        dead.add(key)
        return None

    steps = search(Cadmg.of(g), w, frozenset(), ())
    return None if steps is None else FixPlan(steps, frozenset(district))


def apply_step(s: MonoidalSignature, step) -> MonoidalSignature:
    op, v = step
    return hide(s, v) if op == HIDE else fix(s, v)


def apply_plan(s: MonoidalSignature, plan: FixPlan, trace=None) -> MonoidalSignature:
    """Apply ``plan`` step by step; ``trace`` (a list) collects each result."""
    missing = [v for v in plan.nodes() if v not in s.modules]
    if missing:
        raise SignatureError(f"plan mentions objects without modules: {sorted(missing)}")
    for step in plan:
        s = apply_step(s, step)
        if trace is not None:
            trace.append((step, s))
    return s
