"""Syntactic identification of interventional signatures by fixing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from synid.admg import Admg
from synid.errors import NoValidSequence, QueryError, SynidError
from synid.rewrite import FixPlan, apply_plan, hide, plan_fixseq, plan_sound, simple
from synid.signature import (
    ExteriorSignature,
    MonoidalSignature,
    chain_factored,
    combine_exteriors,
    expand,
    exterior,
)


MAX_ORDERS = 5000
NO_SEQUENCE = "no-fixing-sequence"
UNREALIZABLE = "no-sound-chain-order"


@dataclass(frozen=True)
class CausalQuery:
    effects: frozenset
    causes: frozenset

    def __init__(self, effects, causes):
        object.__setattr__(self, "effects", frozenset(effects))
        object.__setattr__(self, "causes", frozenset(causes))

    def validate(self, g: Admg) -> None:
        if not self.effects:
            raise QueryError("effect set is empty")
        if not self.causes:
            raise QueryError("cause set is empty")
        if self.effects & self.causes:
            raise QueryError(f"effects and causes overlap: {sorted(self.effects & self.causes)}")
        unknown = (self.effects | self.causes) - set(g.nodes)
        if unknown:
            raise QueryError(f"unknown nodes in query: {sorted(unknown)}")

    def format(self, g: Admg | None = None) -> str:
        srt = g.sort if g is not None else sorted
        return f"{','.join(srt(self.effects))} | do({','.join(srt(self.causes))})"


@dataclass
class DistrictStep:
    district: frozenset
    plan: FixPlan
    trace: list
    fixed: MonoidalSignature
    simplified: MonoidalSignature
    exterior: ExteriorSignature
    order: tuple = ()


@dataclass
class Identified:
    graph: Admg
    query: CausalQuery
    y_star: frozenset
    chain: MonoidalSignature
    districts: list
    combined: ExteriorSignature
    exteriors: ExteriorSignature
    hidden: tuple = ()
    chains: dict = field(default_factory=dict)

    identified = True

    @property
    def signature(self) -> MonoidalSignature:
        return self.exteriors.sig

    def expanded(self) -> MonoidalSignature:
        """The identified signature with every composite inlined.

        Hidden copies of intervened variables are primed, so the causes only
        ever appear as free inputs.
        """
        return expand(self.exteriors, self.query.causes)


@dataclass
class NotIdentifiable:
    graph: Admg
    query: CausalQuery
    y_star: frozenset
    district: frozenset
    stuck: frozenset
    districts: list = field(default_factory=list)
    reason: str = NO_SEQUENCE  # or UNREALIZABLE

    identified = False


def y_star(g: Admg, q: CausalQuery) -> frozenset:
    q.validate(g)
    rest = [v for v in g.nodes if v not in q.causes]
    return g.subgraph(rest).ancestors(q.effects)


def identify(g: Admg, q: CausalQuery):
    """Identify ``q`` on ``g``; returns :class:`Identified` or :class:`NotIdentifiable`."""
    ys = y_star(g, q)
    rank = {v: i for i, v in enumerate(g.topo_order())}
    districts = sorted(g.subgraph(ys).districts(), key=lambda d: min(rank[v] for v in d))
    sf = chain_factored(g)
    taken = set(sf.dom)
    steps = []
    chains = {g.topo_order(): sf}
    for d in districts:
        w = set(g.nodes) - d
        try:
            plan_fixseq(g, w, district=d)
        except NoValidSequence as exc:
            return NotIdentifiable(g, q, ys, d, exc.stuck, steps)
        found = _sound_plan(g, w, d)
        if found is None:
            return NotIdentifiable(g, q, ys, d, frozenset(), steps, UNREALIZABLE)
        order, plan = found
        if order not in chains:
            chains[order] = chain_factored(g, order)
        trace = []
        fixed = apply_plan(chains[order], plan, trace)
        simp = simple(fixed)
        ext = exterior(simp, taken)
        taken |= set(ext.sig.dom)
        steps.append(DistrictStep(d, plan, trace, fixed, simp, ext, order))

    combined = combine_exteriors(*(st.exterior for st in steps))
    sig = combined.sig
    hidden = tuple(v for v in g.topo_order() if v in ys - q.effects)
    for v in hidden:
        if v not in sig.modules:
            raise SynidError(f"internal error: {v} has no module in the combined signature")
        sig = hide(sig, v)
    final = ExteriorSignature(sig, combined.interiors)
    return Identified(g, q, ys, sf, steps, combined, final, hidden, chains)


def _sound_plan(g, w, d):
    # the default chain order is tried first; it serves whenever the Markov
    # blanket of every fixed node precedes it there
    for order in itertools.islice(g.topo_orders(), MAX_ORDERS):
        plan = plan_sound(g, w, order, d)
        if plan is not None:
            return order, plan
    return None


def _set(g, vs):
    return "{" + ", ".join(g.sort(vs)) + "}"


def failure_message(r) -> str:
    g = r.graph
    if r.reason == UNREALIZABLE:
        return (f"not identifiable here: district {_set(g, r.district)} has a valid fixing sequence, "
                "but no chain order lets every Fix step act on a single module")
    return f"not identifiable: district {_set(g, r.district)} has no valid fixing sequence"


def explain(r) -> str:
    """Derivation trace in the style of a hand derivation."""
    g = r.graph
    out = [f"query: {r.query.format(g)}", f"Y* = {_set(g, r.y_star)}"]
    if not r.identified:
        out.append(failure_message(r))
        if r.reason == NO_SEQUENCE:
            out.append(f"  unfixable nodes: {_set(g, r.stuck)}")
        return "\n".join(out)
    out.append("districts: " + ", ".join(_set(g, st.district) for st in r.districts))
    out.append(f"chain-factored: {r.chain.format()}")
    for st in r.districts:
        w = set(g.nodes) - st.district
        out.append(f"district {_set(g, st.district)}: Fixseq_{_set(g, w)} = {st.plan.composition()}")
        if st.order != g.topo_order():
            out.append(f"  chain order {' '.join(st.order)}: {r.chains[st.order].format()}")
        for (op, v), s in st.trace:
            out.append(f"  {op}_{v}: {s.format()}")
        out.append(f"  Simple: {st.simplified.format()}")
        ext = st.exterior
        out.append(f"  Ext: {ext.sig.format()}")
        for m in ext.sig.morphisms():
            if m in ext.interiors:
                inner = ext.interiors[m]
                out.append(f"    {m} = {inner.expr.format(inner.part.objects)}")
    out.append(f"combined: {r.combined.sig.format()}")
    if r.hidden:
        out.append(f"Hide_{_set(g, r.hidden)}: {r.signature.format()}")
    if r.exteriors.interiors:
        out.append(f"interior exposed: {r.expanded().format()}")
    return "\n".join(out)


def result_json(r) -> dict:
    from synid.formats import signature_to_json

    g = r.graph
    doc = {
        "status": "identified" if r.identified else "not_identifiable",
        "query": {"effects": g.sort(r.query.effects), "causes": g.sort(r.query.causes)},
        "y_star": g.sort(r.y_star),
    }
    if not r.identified:
        doc["district"] = g.sort(r.district)
        doc["stuck"] = g.sort(r.stuck)
        doc["reason"] = r.reason
        doc["districts"] = [_district_json(g, st) for st in r.districts]
        doc["signature"] = None
        return doc
    doc["districts"] = [_district_json(g, st) for st in r.districts]
    doc["signature"] = signature_to_json(r.signature)
    doc["interiors"] = {
        m: {"expr": inner.expr.format(inner.part.objects), "signature": signature_to_json(inner.part)}
        for m, inner in sorted(r.exteriors.interiors.items())
    }
    if r.exteriors.interiors:
        doc["expanded"] = signature_to_json(r.expanded())
    return doc


def _district_json(g, st):
    from synid.formats import signature_to_json

    return {
        "district": g.sort(st.district),
        "plan": str(st.plan),
        "order": list(st.order),
        "simplified": signature_to_json(st.simplified),
        "exterior": signature_to_json(st.exterior.sig),
    }
