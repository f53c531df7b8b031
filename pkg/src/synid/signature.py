"""Monoidal signatures: construction from ADMGs, exteriors and combination."""

from __future__ import annotations

from dataclasses import dataclass, field

from synid.admg import Admg
from synid.errors import GraphError, ModuleConflictError, SignatureError
from synid.expr import MorphismExpr, layered
from synid.words import UNIT, ObjectWord


def base_name(obj: str) -> str:
    return obj.rstrip("'")


@dataclass(frozen=True, eq=False)
class MonoidalSignature:
    """Objects, causal-module morphisms and their types.

    ``modules`` maps an object to the morphism that produces it. A morphism
    normally produces a single object; only joint exterior morphisms (see
    :func:`exterior`) are assigned to several.
    """

    objects: tuple
    modules: dict
    dom: dict
    cod: dict
    _order: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(dict.fromkeys(self.objects)))
        object.__setattr__(self, "modules", dict(self.modules))
        object.__setattr__(self, "dom", {m: ObjectWord(w) for m, w in self.dom.items()})
        object.__setattr__(self, "cod", {m: ObjectWord(w) for m, w in self.cod.items()})
        names = set(self.modules.values())
        if names != set(self.dom) or names != set(self.cod):
            raise SignatureError("modules, dom and cod must name the same morphisms")
        known = set(self.objects)
        for v in self.modules:
            if v not in known:
                raise SignatureError(f"module for undeclared object {v!r}")
        for m in names:
            own = {v for v, n in self.modules.items() if n == m}
            if not self.cod[m].support() <= own:
                raise SignatureError(f"cod({m}) = {self.cod[m]} mentions objects it does not produce")
            for v in self.dom[m].support() | self.cod[m].support():
                if v not in known:
                    raise SignatureError(f"{m} mentions undeclared object {v!r}")
        object.__setattr__(self, "_order", self._sorted_morphisms())

    # -- queries ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MonoidalSignature):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and self.modules == other.modules
            and self.dom == other.dom
            and self.cod == other.cod
        )

    __hash__ = None

    def morphisms(self) -> tuple:
        """Morphism names in canonical (topological) order."""
        return self._order

    def objects_of(self, m) -> tuple:
        return tuple(v for v in self.objects if self.modules.get(v) == m)

    def module(self, v) -> str:
        try:
            return self.modules[v]
        except KeyError:
            raise SignatureError(f"no module for object {v!r}") from None

    def is_copy(self, m) -> bool:
        """A controlled module: it takes its own object as input."""
        return any(v in self.dom[m] for v in self.objects_of(m))

    def consumers(self, v) -> int:
        """Number of wires of ``v`` entering modules other than its producer."""
        p = self.modules.get(v)
        return sum(self.dom[n][v] for n in self.dom if n != p)

    def surplus(self, v) -> int:
        p = self.modules.get(v)
        return (self.cod[p][v] if p else 0) - self.consumers(v)

    def word_order(self) -> tuple:
        return self.objects

    def _sorted_morphisms(self):
        rank = {v: i for i, v in enumerate(self.objects)}
        names = set(self.dom)

        def key(m):
            own = [rank[v] for v, n in self.modules.items() if n == m]
            return (min(own) if own else len(rank), m)

        deps = {m: set() for m in names}
        for n in names:
            for v in self.dom[n]:
                p = self.modules.get(v)
                if p is not None and p != n:
                    deps[n].add(p)
        out, done = [], set()
        while len(out) < len(names):
            ready = [m for m in names - done if deps[m] <= done]
            if not ready:
                # cyclic wiring; fall back to object order
                ready = list(names - done)
            m = min(ready, key=key)
            out.append(m)
            done.add(m)
        return tuple(out)

    # -- rebuilding ------------------------------------------------------

    def replace(self, *, objects=None, modules=None, dom=None, cod=None) -> "MonoidalSignature":
        return MonoidalSignature(
            self.objects if objects is None else objects,
            self.modules if modules is None else modules,
            self.dom if dom is None else dom,
            self.cod if cod is None else cod,
        )

    def without(self, names) -> "MonoidalSignature":
        """Drop morphisms; objects no longer mentioned anywhere are dropped too."""
        names = set(names)
        modules = {v: m for v, m in self.modules.items() if m not in names}
        dom = {m: w for m, w in self.dom.items() if m not in names}
        cod = {m: w for m, w in self.cod.items() if m not in names}
        live = set(modules)
        for w in list(dom.values()) + list(cod.values()):
            live |= w.support()
        return MonoidalSignature([v for v in self.objects if v in live], modules, dom, cod)

    # -- text --------------------------------------------------------------

    def line(self, m) -> str:
        o = self.objects
        return f"{m}: {self.dom[m].format(o)} -> {self.cod[m].format(o)}"

    def lines(self) -> list:
        return [self.line(m) for m in self.morphisms()]

    def format(self) -> str:
        """Tuple form ``({objects}, {morphisms}, {types})``."""
        return (
            "({" + ", ".join(self.objects) + "}, {"
            + ", ".join(self.morphisms()) + "}, {"
            + ", ".join(self.lines()) + "})"
        )

    def __str__(self):
        return "\n".join(self.lines())

    def __repr__(self):
        return f"MonoidalSignature{self.format()}"


def module_name(obj: str, taken=()) -> str:
    name = obj.lower()
    while name in taken:
        name += "_m"
    return name


def signature_from_admg(g: Admg) -> MonoidalSignature:
    """One module per node: parents in, one output per child plus one."""
    modules, dom, cod = {}, {}, {}
    for v in g.nodes:
        m = module_name(v, dom)
        modules[v] = m
        dom[m] = ObjectWord(g.sort(g.parents(v)))
        cod[m] = ObjectWord.power(v, len(g.children(v)) + 1)
    return MonoidalSignature(g.nodes, modules, dom, cod)


def chain_factored(g: Admg, order=None) -> MonoidalSignature:
    """Every module takes all strictly earlier nodes of ``order`` as input."""
    order = tuple(g.topo_order() if order is None else order)
    if sorted(order) != sorted(g.nodes):
        raise GraphError("order must be a permutation of the nodes")
    pos = {v: i for i, v in enumerate(order)}
    for a, b in g.directed:
        if pos[a] > pos[b]:
            raise GraphError(f"order puts {b!r} before its parent {a!r}")
    n = len(order)
    modules, dom, cod = {}, {}, {}
    for v in g.nodes:
        m = module_name(v, dom)
        modules[v] = m
        dom[m] = ObjectWord(order[: pos[v]])
        cod[m] = ObjectWord.power(v, n - pos[v])
    return MonoidalSignature(g.nodes, modules, dom, cod)


def pa_sig(s: MonoidalSignature, v) -> frozenset:
    m = s.module(v)
    d = s.dom[m].support()
    return frozenset(n for n in s.morphisms() if n != m and s.cod[n].support() & d)


def ch_sig(s: MonoidalSignature, v) -> frozenset:
    m = s.module(v)
    c = s.cod[m].support()
    return frozenset(n for n in s.morphisms() if n != m and s.dom[n].support() & c)


# ---------------------------------------------------------------------------
# exteriors


@dataclass(frozen=True)
class Interior:
    """The generators hidden inside one exterior morphism."""

    part: MonoidalSignature
    expr: MorphismExpr


@dataclass(frozen=True)
class ExteriorSignature:
    sig: MonoidalSignature
    interiors: dict = field(default_factory=dict)

    def __post_init__(self):
        for m, inner in self.interiors.items():
            if m not in self.sig.dom:
                continue
            if inner.expr.dom != self.sig.dom[m]:
                raise SignatureError(f"interior of {m} has domain {inner.expr.dom}, not {self.sig.dom[m]}")
            if not inner.expr.cod.support() <= set(self.sig.objects_of(m)):
                raise SignatureError(f"interior of {m} has codomain {inner.expr.cod}")

    def __str__(self):
        return str(self.sig)


def fresh(name: str, taken, suffix="'") -> str:
    while name in taken:
        name += suffix
    return name


def _composite_name(taken, stem="q"):
    if stem not in taken:
        return stem
    i = 2
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def _wiring(s: MonoidalSignature):
    """Producer edges ``p -> n`` between distinct morphisms."""
    edges = {m: set() for m in s.dom}
    for n in s.dom:
        for v in s.dom[n]:
            p = s.modules.get(v)
            if p is not None and p != n:
                edges[p].add(n)
    return edges


def _upstream(start, edges_in, stop):
    seen = {start}
    stack = [start]
    while stack:
        for p in edges_in[stack.pop()]:
            if p not in seen and p not in stop:
                seen.add(p)
                stack.append(p)
    return seen


def exterior(s: MonoidalSignature, taken=(), stem="q") -> ExteriorSignature:
    """Collapse each connected composite of ``s`` into one exterior morphism.

    Composites are the connected components of the producer/consumer wiring;
    anything consumed only internally disappears from the exterior types.
    A composite with several surplus outputs is split into one morphism per
    output, earlier outputs feeding later ones, unless a non-copy generator
    would end up in two pieces; then a single joint morphism producing all
    outputs is kept. Composites with a single generator (ignoring copies)
    keep their name; others get fresh names ``q``, ``q2``, ...
    """
    taken = set(taken) | set(s.dom)
    for v in s.modules:
        if s.surplus(v) < 0:
            raise SignatureError(f"{v} is consumed more often than it is produced")
    edges = _wiring(s)
    edges_in = {m: set() for m in s.dom}
    for p, ns in edges.items():
        for n in ns:
            edges_in[n].add(p)
    _check_acyclic(edges)

    parent = {m: m for m in s.dom}

    def find(m):
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    for p, ns in edges.items():
        for n in ns:
            parent[find(p)] = find(n)
    comps = {}
    for m in s.morphisms():
        comps.setdefault(find(m), []).append(m)

    modules, dom, cod, interiors = {}, {}, {}, {}
    for comp in comps.values():
        # a controlled (copy) module stands for an input, never an output
        outs = [
            v for v in s.objects
            if s.modules.get(v) in comp and not s.is_copy(s.modules[v]) and s.surplus(v) > 0
        ]
        if not outs and all(s.is_copy(m) for m in comp):
            for m in comp:
                for v in s.objects_of(m):
                    modules[v] = m
                dom[m], cod[m] = s.dom[m], s.cod[m]
            continue
        if not outs:
            raise SignatureError(f"composite {{{', '.join(comp)}}} has no output")
        pieces = _split(s, comp, outs, edges_in)
        for out_objs, members in pieces:
            members = [m for m in s.morphisms() if m in members]
            inner = s.replace(
                modules={v: n for v, n in s.modules.items() if n in members},
                dom={n: s.dom[n] for n in members},
                cod={n: s.cod[n] for n in members},
            )
            inner = inner.without(())
            produced = {v for v, n in inner.modules.items()}
            ext_in = []
            for n in members:
                for v in inner.dom[n]:
                    if v not in produced or inner.modules[v] == n:
                        ext_in.append(v)
            d = ObjectWord([v for v in s.objects if v in set(ext_in)])
            c = ObjectWord({v: s.surplus(v) for v in out_objs})
            stochastic = [n for n in members if not inner.is_copy(n)]
            if len(stochastic) == 1 and len(out_objs) == 1:
                name = stochastic[0]
            else:
                name = _composite_name(taken, stem)
                taken.add(name)
                expr = layered([(n, inner.dom[n], inner.cod[n]) for n in members], d, c, s.objects)
                interiors[name] = Interior(inner, expr)
            for v in out_objs:
                modules[v] = name
            dom[name] = d
            cod[name] = c
    # split pieces feed each other: those wires leave the producing piece too
    for v, name in modules.items():
        fed = sum(dom[n][v] for n in dom if n != name)
        if fed:
            cod[name] = cod[name].with_count(v, cod[name][v] + fed)
    live = set()
    for w in list(dom.values()) + list(cod.values()):
        live |= w.support()
    sig = MonoidalSignature([v for v in s.objects if v in live], modules, dom, cod)
    return ExteriorSignature(sig, interiors)


def _split(s, comp, outs, edges_in):
    if len(outs) == 1:
        return [((outs[0],), set(comp))]
    producers = {s.modules[v] for v in outs}
    pieces = []
    owner = {}
    for v in outs:
        p = s.modules[v]
        members = _upstream(p, edges_in, producers - {p})
        pieces.append(((v,), members))
        for n in members:
            if not s.is_copy(n):
                owner.setdefault(n, set()).add(v)
    shared_producer = len(producers) < len(outs)
    if shared_producer or any(len(o) > 1 for o in owner.values()):
        return [(tuple(outs), set(comp))]
    return pieces


def _check_acyclic(edges):
    indeg = {m: 0 for m in edges}
    for ns in edges.values():
        for n in ns:
            indeg[n] += 1
    ready = [m for m, k in indeg.items() if k == 0]
    seen = 0
    while ready:
        m = ready.pop()
        seen += 1
        for n in edges[m]:
            indeg[n] -= 1
            if indeg[n] == 0:
                ready.append(n)
    if seen != len(edges):
        raise SignatureError("signature wiring is cyclic; no maximal model exists")


def merge_objects(*orders) -> list:
    """Merge object orders, keeping each input's relative order where possible."""
    out = []
    for order in orders:
        order = list(order)
        for i, v in enumerate(order):
            if v in out:
                continue
            if v != base_name(v) and base_name(v) in out:
                # primed copies sit right after their base object
                k = out.index(base_name(v)) + 1
                while k < len(out) and base_name(out[k]) == base_name(v):
                    k += 1
            else:
                later = [w for w in order[i + 1:] if w in out]
                earlier = [w for w in order[:i] if w in out]
                if later:
                    k = out.index(later[0])
                elif earlier:
                    k = out.index(earlier[-1]) + 1
                else:
                    k = len(out)
            out.insert(k, v)
    return out


def combine(*exts: ExteriorSignature) -> MonoidalSignature:
    """Union of exterior signatures with producer codomains recounted."""
    objects = merge_objects(*(e.sig.objects for e in exts))
    modules, dom = {}, {}
    for e in exts:
        for v, m in e.sig.modules.items():
            if modules.get(v, m) != m:
                raise ModuleConflictError(v, modules[v], m)
            modules[v] = m
        for m, w in e.sig.dom.items():
            if dom.get(m, w) != w:
                raise ModuleConflictError(m, dom[m], w)
            dom[m] = w
    cod = {}
    for m in dom:
        word = {}
        for v, n in modules.items():
            if n == m:
                word[v] = 1 + sum(1 for k in dom if k != m and v in dom[k])
        cod[m] = ObjectWord(word)
    return MonoidalSignature(objects, modules, dom, cod)


def combine_exteriors(*exts: ExteriorSignature) -> ExteriorSignature:
    interiors = {}
    for e in exts:
        for m, inner in e.interiors.items():
            if m in interiors and interiors[m] != inner:
                raise ModuleConflictError(m, m, m)
            interiors[m] = inner
    return ExteriorSignature(combine(*exts), interiors)


# ---------------------------------------------------------------------------
# inlining interiors


def inline(ext: ExteriorSignature, m, reserved=()) -> ExteriorSignature:
    """Replace exterior morphism ``m`` by the generators it hides.

    Copy generators are absorbed into the wires they feed. Hidden objects
    whose names clash with objects of the surrounding signature are primed
    (``X`` becomes ``X'``), and so are the generators producing them.
    Producer codomains are recounted so that every object keeps its number
    of surplus (unconsumed) outputs. Names in ``reserved`` count as clashes
    even when the surrounding signature does not mention them.
    """
    s = ext.sig
    if m not in s.dom:
        raise SignatureError(f"no morphism named {m!r}")
    if m not in ext.interiors:
        return ext
    part = ext.interiors[m].part
    outs = set(s.objects_of(m))
    surplus = {v: s.surplus(v) for v in s.modules}
    stoch = [n for n in part.morphisms() if not part.is_copy(n)]
    internal = [v for v in part.objects if part.modules.get(v) in stoch and v not in outs]

    outer = set(s.objects) | set(reserved)
    obj_taken = outer | set(part.objects)
    rename = {}
    for v in internal:
        if v in outer:
            rename[v] = fresh(v, obj_taken)
            obj_taken.add(rename[v])
    name_taken = set(s.dom) - {m}
    new_name = {}
    for n in stoch:
        own = part.objects_of(n)
        nm = n
        if any(v in rename for v in own) or nm in name_taken:
            nm = fresh(nm + "'", name_taken)
        name_taken.add(nm)
        new_name[n] = nm

    modules = {v: k for v, k in s.modules.items() if k != m}
    dom = {k: w for k, w in s.dom.items() if k != m}
    for n in stoch:
        for v in part.objects_of(n):
            modules[rename.get(v, v)] = new_name[n]
        dom[new_name[n]] = part.dom[n].rename(rename)
    for v in internal:
        surplus[rename.get(v, v)] = 0
    cod = {}
    for k in dom:
        word = {}
        for v, n in modules.items():
            if n == k:
                used = sum(dom[j][v] for j in dom if j != k)
                word[v] = used + surplus.get(v, 0)
        cod[k] = ObjectWord(word)

    objects = merge_objects(s.objects, [rename.get(v, v) for v in part.objects])
    live = set(modules)
    for w in list(dom.values()) + list(cod.values()):
        live |= w.support()
    sig = MonoidalSignature([v for v in objects if v in live], modules, dom, cod)
    interiors = {k: i for k, i in ext.interiors.items() if k != m}
    return ExteriorSignature(sig, interiors)


def relabel_interior(ext: ExteriorSignature, m, reserved=()) -> MonoidalSignature:
    return inline(ext, m, reserved).sig


def expand(ext: ExteriorSignature, reserved=()) -> MonoidalSignature:
    """Inline every composite, leaving only original generators."""
    while True:
        pending = [m for m in ext.sig.morphisms() if m in ext.interiors]
        if not pending:
            return ext.sig
        ext = inline(ext, pending[0], reserved)
