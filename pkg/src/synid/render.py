"""Graphviz dot output for the maximal model of a signature.

Each generator is a box, free inputs and unconsumed outputs are plain
nodes, and an object with more than one wire leaving its producer (or its
input node) gets a copy junction. Controlled (copy) generators are drawn as
that junction rather than as a box. There is one dot edge per wire.
"""

from __future__ import annotations

from synid.signature import MonoidalSignature
from synid.semantics import free_inputs


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(s: MonoidalSignature, title="signature") -> str:
    ins = free_inputs(s)
    out = [f"digraph {_q(title)} {{", "  rankdir=BT;", '  node [fontname="Helvetica"];']
    for v in ins:
        out.append(f"  {_q('in:' + v)} [label={_q(v)}, shape=plaintext];")
    boxes = [m for m in s.morphisms() if not s.is_copy(m)]
    for m in boxes:
        out.append(f"  {_q('m:' + m)} [label={_q(m)}, shape=box];")

    # every wire of v: consumers first, then unconsumed outputs
    for v in s.objects:
        p = s.modules.get(v)
        if v in ins:
            src = _q("in:" + v)
        elif p is not None:
            src = _q("m:" + p)
        else:
            continue
        sinks = []
        for n in boxes:
            if n != p:
                sinks += [_q("m:" + n)] * s.dom[n][v]
        surplus = max(s.surplus(v), 0) if p is not None else 0
        for i in range(surplus):
            node = _q(f"out:{v}" if surplus == 1 else f"out:{v}:{i + 1}")
            out.append(f"  {node} [label={_q(v)}, shape=plaintext];")
            sinks.append(node)
        if not sinks:
            continue
        if len(sinks) > 1:
            j = _q("copy:" + v)
            out.append(f"  {j} [label=\"\", shape=point, width=0.08];")
            out.append(f"  {src} -> {j} [label={_q(v)}];")
            out += [f"  {j} -> {t};" for t in sinks]
        else:
            out.append(f"  {src} -> {sinks[0]} [label={_q(v)}];")
    out.append("}")
    return "\n".join(out) + "\n"
