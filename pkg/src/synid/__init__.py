"""Syntactic causal identification on monoidal signatures of ADMGs."""

from synid.admg import Admg, Cadmg, fix_in_graph, is_fixable, topo_order
from synid.errors import (
    NoValidSequence,
    NotFixableError,
    ParseError,
    QueryError,
    SemanticsError,
    SignatureError,
    SynidError,
)
from synid.identify import CausalQuery, Identified, NotIdentifiable, explain, identify, y_star
from synid.rewrite import FixPlan, apply_plan, control, delete_identities, fix, hide, plan_fixseq, simple, simplify_step
from synid.signature import (
    ExteriorSignature,
    MonoidalSignature,
    chain_factored,
    ch_sig,
    combine,
    exterior,
    pa_sig,
    relabel_interior,
    signature_from_admg,
)
from synid.words import ObjectWord, word, word_difference, word_product

__version__ = "0.1.0"

__all__ = [
    "Admg", "Cadmg", "CausalQuery", "ExteriorSignature", "FixPlan", "Identified",
    "MonoidalSignature", "NoValidSequence", "NotFixableError", "NotIdentifiable",
    "ObjectWord", "ParseError", "QueryError", "SemanticsError", "SignatureError",
    "SynidError", "apply_plan", "ch_sig", "chain_factored", "combine", "control",
    "delete_identities", "explain", "exterior", "fix", "fix_in_graph", "hide",
    "identify", "is_fixable", "pa_sig", "plan_fixseq", "relabel_interior",
    "signature_from_admg", "simple", "simplify_step", "topo_order", "word",
    "word_difference", "word_product", "y_star",
]
