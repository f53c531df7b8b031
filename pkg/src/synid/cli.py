"""Command-line front end: ``synid identify|eval|check|render``.

Exit codes: 0 success, 1 usage or input error, 2 not identifiable,
3 oracle check failed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

from synid import __version__
from synid.errors import SynidError
from synid.formats import (
    format_signature,
    parse_assignment,
    parse_model,
    parse_names,
    parse_signature,
)
from synid.identify import CausalQuery, explain, failure_message, identify, result_json
from synid.render import to_dot
from synid.semantics import (
    DET,
    INTERPRETATIONS,
    MINPLUS,
    PROB,
    check_identification,
    evaluate,
    free_inputs,
    module_tables,
    observational_joint,
    synthesize_latent_dag,
)
from synid.signature import base_name, exterior, signature_from_admg

EXIT_OK, EXIT_USAGE, EXIT_NOT_ID, EXIT_FAIL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _color(code, text, stream=sys.stdout):
    if os.environ.get("SYNID_COLOR", "1") == "0" or not stream.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SynidError(f"cannot read {path}: {exc.strerror}") from None


def _query(args, g):
    if not args.do or not args.effect:
        raise SynidError("--do and --effect are required")
    q = CausalQuery(parse_names(args.effect), parse_names(args.do))
    q.validate(g)
    return q


def _add_query(p):
    p.add_argument("model", help="model file (.admg), or - for stdin")
    p.add_argument("--do", metavar="NAMES", help="comma-separated cause variables")
    p.add_argument("--effect", metavar="NAMES", help="comma-separated effect variables")


def build_parser():
    p = _Parser(prog="synid", description="Syntactic causal identification with monoidal signatures.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("identify", help="print the identified interventional signature")
    _add_query(s)
    s.add_argument("--json", action="store_true", help="JSON output")
    s.add_argument("--explain", action="store_true", help="print the derivation trace")

    s = sub.add_parser("eval", help="evaluate the identified signature on a concrete model")
    _add_query(s)
    s.add_argument("--value", metavar="N=v,...", default="", help="cause values (default: all)")
    s.add_argument("--seed", type=int, default=0, help="seed for synthesized tables")
    s.add_argument("--interp", choices=INTERPRETATIONS, default=PROB)
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("check", help="compare against the latent-DAG oracle on random models")
    _add_query(s)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--interp", choices=(PROB, MINPLUS), default=PROB)
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("render", help="emit a dot diagram of a signature or identified model")
    s.add_argument("model", help="model (.admg) or signature file, or - for stdin")
    s.add_argument("--do", metavar="NAMES")
    s.add_argument("--effect", metavar="NAMES")
    s.add_argument("--exterior", action="store_true", help="collapse composites")
    return p


def cmd_identify(args, out):
    spec = parse_model(_read(args.model))
    g = spec.graph
    r = identify(g, _query(args, g))
    if args.json:
        out.write(json.dumps(result_json(r), indent=2) + "\n")
    elif not r.identified:
        sys.stderr.write(_color("31", failure_message(r), sys.stderr) + "\n")
    else:
        out.write(format_signature(r.signature))
    if args.explain and not args.json:
        out.write(("\n" if r.identified else "") + explain(r) + "\n")
    return EXIT_OK if r.identified else EXIT_NOT_ID


def _model(spec, seed, interp):
    return synthesize_latent_dag(spec.graph, 2, seed, domains=spec.domains, cpts=spec.cpts, interp=interp)


def cmd_eval(args, out):
    spec = parse_model(_read(args.model))
    g = spec.graph
    q = _query(args, g)
    r = identify(g, q)
    if not r.identified:
        sys.stderr.write(_color("31", failure_message(r), sys.stderr) + "\n")
        return EXIT_NOT_ID
    m = _model(spec, args.seed, args.interp)
    joint = observational_joint(m)
    sig = r.expanded()
    tables = module_tables(joint, sig, args.interp)
    given = parse_assignment(args.value)
    causes = g.sort(q.causes)
    unknown = set(given) - set(causes) - set(free_inputs(sig))
    if unknown:
        raise SynidError(f"--value names non-input variables: {', '.join(sorted(unknown))}")
    extra = [v for v in free_inputs(sig) if v not in q.causes]
    effects = g.sort(q.effects)
    choices = [[given[v]] if v in given else list(m.domains[v]) for v in causes]
    rows = []
    for combo in itertools.product(*choices):
        a = dict(zip(causes, combo))
        # identified kernels do not depend on leftover inputs; any value will do
        for v in extra:
            a[v] = given.get(v, m.domains[base_name(v)][0])
        d = evaluate(sig, tables, a, args.interp, effects=effects)
        rows.append((dict(zip(causes, combo)), d))
    flagged = sum(len(t.flagged) for t in tables.values())
    if args.json:
        doc = {
            "query": q.format(g),
            "interp": args.interp,
            "results": [
                {"do": a, "table": [{"value": dict(zip(effects, k)), "result": x} for k, x in d.items()]}
                for a, d in rows
            ],
            "flagged_rows": flagged,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    label = {PROB: "p", MINPLUS: "cost", DET: "f"}[args.interp]
    for i, (a, d) in enumerate(rows):
        if i:
            out.write("\n")
        do = ",".join(f"{k}={v}" for k, v in a.items())
        out.write(f"{label}({','.join(effects)} | do({do}))\n")
        out.write(d.format() + "\n")
    if flagged:
        what = "left undefined" if args.interp == DET else "filled uniformly"
        sys.stderr.write(f"warning: {flagged} zero-mass conditioning rows were {what}\n")
    return EXIT_OK


def cmd_check(args, out):
    spec = parse_model(_read(args.model))
    g = spec.graph
    q = _query(args, g)
    r = identify(g, q)
    if not r.identified:
        msg = f"SKIP {q.format(g)}: {failure_message(r)}"
        if args.json:
            out.write(json.dumps({"status": "skip", "query": q.format(g), "reason": r.reason}) + "\n")
        else:
            out.write(_color("33", msg) + "\n")
        return EXIT_NOT_ID
    if args.trials < 1:
        raise SynidError("--trials must be positive")
    rep = check_identification(g, q, args.trials, args.seed, args.interp)
    ok = rep.passed()
    if args.json:
        doc = {"status": "pass" if ok else "fail", "query": rep.query, "interp": rep.interp,
               "trials": rep.trials, "max_deviation": rep.max_deviation, "flagged_rows": rep.flagged}
        out.write(json.dumps(doc) + "\n")
    else:
        word = _color("32", "PASS") if ok else _color("31", "FAIL")
        out.write(f"{word} {rep.query}: max deviation {rep.max_deviation:.3e} over {rep.trials} "
                  f"{rep.interp} trials (seed {args.seed})\n")
    return EXIT_OK if ok else EXIT_FAIL


def _looks_like_model(text):
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.split()[0] in ("node", "edge", "domain", "cpt")
    return True


def cmd_render(args, out):
    text = _read(args.model)
    if _looks_like_model(text):
        g = parse_model(text).graph
        if args.do or args.effect:
            r = identify(g, _query(args, g))
            if not r.identified:
                sys.stderr.write(failure_message(r) + "\n")
                return EXIT_NOT_ID
            sig = r.signature if args.exterior else r.expanded()
        else:
            sig = signature_from_admg(g)
            if args.exterior:
                sig = exterior(sig).sig
    else:
        sig = parse_signature(text)
        if args.exterior:
            sig = exterior(sig).sig
    out.write(to_dot(sig))
    return EXIT_OK


COMMANDS = {"identify": cmd_identify, "eval": cmd_eval, "check": cmd_check, "render": cmd_render}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except SynidError as exc:
        sys.stderr.write(_color("31", f"synid: error: {exc}", sys.stderr) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
