"""Text and JSON formats for graphs, models and signatures.

ADMG / model files, one declaration per line (``#`` starts a comment)::

    node X
    edge X -> Z
    edge X <-> Y
    domain X = 0,1
    cpt Z | X : 0.9,0.1 ; 0.2,0.8

Signature files, one morphism per line::

    z: X -> Z^2
    q: Z -> Y
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from synid.admg import Admg
from synid.errors import ParseError, SignatureError
from synid.signature import MonoidalSignature
from synid.words import ObjectWord

NAME = r"[A-Za-z][A-Za-z0-9_']*"
_NAME_RE = re.compile(rf"^{NAME}$")
_EDGE = re.compile(rf"^edge\s+({NAME})\s*(->|<->)\s*({NAME})$")
_NODE = re.compile(rf"^node\s+({NAME}(?:\s+{NAME})*)$")
_DOMAIN = re.compile(rf"^domain\s+({NAME})\s*=\s*(.+)$")
_CPT = re.compile(rf"^cpt\s+({NAME})\s*(?:\|\s*((?:{NAME}\s*)*))?:\s*(.+)$")
_MORPHISM = re.compile(rf"^({NAME})\s*:\s*(.*?)\s*->\s*(.*)$")


@dataclass
class ModelSpec:
    """Parsed contents of a model file."""

    graph: Admg
    domains: dict = field(default_factory=dict)
    cpts: dict = field(default_factory=dict)  # node -> (parents, rows)


def _lines(text):
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def parse_model(text: str) -> ModelSpec:
    nodes, directed, bidirected = [], [], []
    domains, cpts = {}, {}
    for i, line in _lines(text):
        if m := _NODE.match(line):
            nodes.extend(m.group(1).split())
        elif m := _EDGE.match(line):
            a, arrow, b = m.groups()
            (directed if arrow == "->" else bidirected).append((a, b))
        elif m := _DOMAIN.match(line):
            vals = [v.strip() for v in m.group(2).split(",")]
            if not all(vals) or len(set(vals)) != len(vals):
                raise ParseError(f"bad domain for {m.group(1)}", i)
            domains[m.group(1)] = tuple(vals)
        elif m := _CPT.match(line):
            node, parents, rows = m.groups()
            parents = tuple((parents or "").split())
            try:
                table = [[float(x) for x in r.split(",")] for r in rows.split(";")]
            except ValueError:
                raise ParseError(f"bad cpt rows for {node}", i) from None
            cpts[node] = (parents, table)
        else:
            raise ParseError(f"cannot parse {line!r}", i)
    for a, b in directed + bidirected:
        for v in (a, b):
            if v not in nodes:
                nodes.append(v)
    try:
        g = Admg(nodes, directed, bidirected)
    except Exception as exc:
        raise ParseError(str(exc)) from exc
    return ModelSpec(g, domains, cpts)


def parse_admg(text: str) -> Admg:
    return parse_model(text).graph


def format_admg(g: Admg) -> str:
    out = [f"node {v}" for v in g.nodes]
    out += [f"edge {a} -> {b}" for a, b in g.directed_edges()]
    out += [f"edge {a} <-> {b}" for a, b in g.bidirected_edges()]
    return "\n".join(out) + "\n"


def _word(text, i):
    try:
        return ObjectWord(text)
    except ValueError as exc:
        raise ParseError(str(exc), i) from None


def parse_signature(text: str) -> MonoidalSignature:
    """Parse the one-morphism-per-line format.

    A unit codomain does not name the produced object; it is then taken to
    be the object whose lowercase name is the morphism name. An optional
    ``objects: A B C`` line declares objects (and their order) explicitly.
    """
    declared = []
    entries = []
    for i, line in _lines(text):
        if line.startswith("objects:"):
            declared.extend(line.split(":", 1)[1].split())
            continue
        m = _MORPHISM.match(line)
        if not m:
            raise ParseError(f"cannot parse {line!r}", i)
        entries.append((i, m.group(1), _word(m.group(2), i), _word(m.group(3), i)))
    seen = list(declared)
    for _, _, d, c in entries:
        for v in list(d) + list(c):
            if v not in seen:
                seen.append(v)
    modules, dom, cod = {}, {}, {}
    for i, name, d, c in entries:
        if name in dom:
            raise ParseError(f"duplicate morphism {name}", i)
        owners = list(c) or [v for v in seen if v.lower() == name] or [
            v for v in seen if v.lower() == name.removesuffix("_m")
        ]
        if not owners:
            owners = [name.upper()]
            seen.append(owners[0])
        for v in owners:
            if v in modules:
                raise ParseError(f"object {v} has two modules", i)
            modules[v] = name
        dom[name], cod[name] = d, c
    order = declared or _order_objects(seen, modules, dom)
    for v in seen:
        if v not in order:
            order.append(v)
    try:
        return MonoidalSignature(order, modules, dom, cod)
    except SignatureError as exc:
        raise ParseError(str(exc)) from exc


def _order_objects(seen, modules, dom):
    # inputs and producers before consumers: reconstruct a plausible order
    # from the wiring, falling back to first appearance
    pos = {v: i for i, v in enumerate(seen)}
    before = {v: set() for v in seen}
    for v, m in modules.items():
        for w in dom[m]:
            if w != v:
                before[v].add(w)
    out = []
    while len(out) < len(seen):
        ready = [v for v in seen if v not in out and before[v] <= set(out)]
        if not ready:
            ready = [v for v in seen if v not in out]
        out.append(min(ready, key=pos.__getitem__))
    return out


def format_signature(s: MonoidalSignature) -> str:
    mentioned = set(s.modules)
    for w in list(s.dom.values()) + list(s.cod.values()):
        mentioned |= w.support()
    head = []
    if set(s.objects) - mentioned:
        head = ["objects: " + " ".join(s.objects)]
    return "\n".join(head + s.lines()) + "\n"


def signature_to_json(s: MonoidalSignature) -> dict:
    return {
        "objects": list(s.objects),
        "morphisms": [
            {
                "name": m,
                "objects": list(s.objects_of(m)),
                "dom": {v: s.dom[m][v] for v in s.objects if v in s.dom[m]},
                "cod": {v: s.cod[m][v] for v in s.objects if v in s.cod[m]},
            }
            for m in s.morphisms()
        ],
        "text": s.lines(),
    }


def signature_from_json(doc: dict) -> MonoidalSignature:
    modules, dom, cod = {}, {}, {}
    for entry in doc["morphisms"]:
        name = entry["name"]
        for v in entry["objects"]:
            modules[v] = name
        dom[name] = ObjectWord(entry["dom"])
        cod[name] = ObjectWord(entry["cod"])
    return MonoidalSignature(doc["objects"], modules, dom, cod)


def parse_names(text: str) -> list:
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        if not _NAME_RE.match(n):
            raise ParseError(f"bad variable name {n!r}")
    return names


def parse_assignment(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        k, sep, v = part.partition("=")
        if not sep or not _NAME_RE.match(k.strip()):
            raise ParseError(f"bad assignment {part!r}")
        out[k.strip()] = v.strip()
    return out
