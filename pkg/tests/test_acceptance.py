"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line which is printed in the pytest terminal
summary (and on stdout with ``-s``).
"""

import itertools
import statistics
import time

import numpy as np

from helpers import backdoor, bow, ex51, frontdoor, small_admgs
from synid import CausalQuery, identify
from synid.semantics import (
    DET,
    MINPLUS,
    ModuleTable,
    compare,
    evaluate,
    module_tables,
    observational_joint,
    synthesize_latent_dag,
    check_identification,
)

RESULTS = []


def record(num, title, ok, detail=""):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    return ok


def timed(f, repeat=7):
    f()  # warm caches of the first call
    runs = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = f()
        runs.append(time.perf_counter() - t)
    return out, statistics.median(runs)


def test_criterion_1_backdoor_golden():
    r, dt = timed(lambda: identify(backdoor(), CausalQuery({"Y"}, {"X"})))
    ok = r.identified and r.signature.lines() == ["u: 1 -> U", "y: X U -> Y"]
    ok &= r.signature.format() == "({X, Y, U}, {u, y}, {u: 1 -> U, y: X U -> Y})"
    assert record(1, "back-door golden", ok and dt < 0.01, f"{dt * 1e3:.2f} ms")


def test_criterion_2_frontdoor_golden():
    r, dt = timed(lambda: identify(frontdoor(), CausalQuery({"Y"}, {"X"})))
    by = {frozenset(st.district): st for st in r.districts}
    checks = [
        r.signature.lines() == ["z: X -> Z", "q: Z -> Y"],
        r.expanded().lines() == ["x': 1 -> X'", "z: X -> Z", "y: X' Z -> Y"],
        # the two district signatures before taking exteriors
        by[frozenset("Y")].simplified.format() == "({X, Z, Y}, {x, y}, {x: 1 -> X, y: X Z -> Y})",
        by[frozenset("Z")].simplified.format() == "({X, Z}, {z}, {z: X -> Z})",
        by[frozenset("Y")].exterior.sig.format() == "({Z, Y}, {q}, {q: Z -> Y})",
        r.combined.sig.lines() == ["z: X -> Z^2", "q: Z -> Y"],
    ]
    assert record(2, "front-door golden, interior and district signatures", all(checks) and dt < 0.01,
                  f"{dt * 1e3:.2f} ms; checks {checks}")


def test_criterion_3_ex51_golden():
    r, dt = timed(lambda: identify(ex51(), CausalQuery({"X4"}, {"X2"})))
    ok = r.signature.lines() == ["x1: 1 -> X1^2", "x3: X1 X2 -> X3", "q: X1 X3 -> X4"]
    assert record(3, "four-variable golden", ok and dt < 0.01, f"{dt * 1e3:.2f} ms")


def test_criterion_4_bow_not_identifiable():
    r = identify(bow(), CausalQuery({"Y"}, {"X"}))
    ok = (not r.identified) and r.district == {"Y"} and r.stuck == {"X"}
    assert record(4, "bow graph not identifiable", ok, f"district {sorted(r.district)}, stuck {sorted(r.stuck)}")


def test_criterion_5_oracle_equivalence_goldens():
    cases = [
        (backdoor(), CausalQuery({"Y"}, {"X"})),
        (frontdoor(), CausalQuery({"Y"}, {"X"})),
        (ex51(), CausalQuery({"X4"}, {"X2"})),
    ]
    t = time.perf_counter()
    devs = [check_identification(g, q, trials=20, seed=0).max_deviation for g, q in cases]
    dt = time.perf_counter() - t
    ok = max(devs) < 1e-9 and dt < 5
    assert record(5, "oracle equivalence on the goldens, 20 trials each", ok,
                  f"max deviation {max(devs):.2e}, {dt:.2f} s")


def test_criterion_6_small_world_sweep():
    t = time.perf_counter()
    graphs = queries = identified = 0
    worst = 0.0
    problems = []
    for g in small_admgs(4, 2):
        graphs += 1
        results = []
        for a, y in itertools.permutations(g.nodes, 2):
            q = CausalQuery({y}, {a})
            try:
                results.append(identify(g, q))
            except Exception as exc:  # a crash is a failure of the criterion
                problems.append((g, q, repr(exc)))
        queries += len(results)
        for r in results:
            if not r.identified and not r.district:
                problems.append((g, r.query, "no district named"))
        ok_results = [r for r in results if r.identified]
        identified += len(ok_results)
        if not ok_results:
            continue
        for seed in range(3):
            m = synthesize_latent_dag(g, 2, seed)
            joint = observational_joint(m)
            for r in ok_results:
                try:
                    d, _ = compare(m, r, joint)
                except Exception as exc:
                    problems.append((g, r.query, repr(exc)))
                    continue
                worst = max(worst, d)
                if d >= 1e-9:
                    problems.append((g, r.query, d))
    dt = time.perf_counter() - t
    ok = not problems and dt < 300
    assert record(6, "exhaustive sweep, <= 4 nodes and <= 2 bidirected edges, 3 seeds", ok,
                  f"{graphs} graphs, {queries} queries, {identified} identified, "
                  f"max deviation {worst:.2e}, {len(problems)} problems, {dt:.1f} s"), problems[:5]


def _minplus_brute_backdoor(m, joint, x):
    # min over u of q(y|x,u) + q(u), straight from the joint cost table
    cost = joint.reorder(("X", "Y", "U")).values
    qu = cost.min(axis=(0, 1))
    qxu = cost.min(axis=1)
    xi = m.domains["X"].index(x)
    return [min(cost[xi, y, u] - qxu[xi, u] + qu[u] for u in range(len(qu))) for y in range(cost.shape[1])]


def _minplus_brute_frontdoor(m, joint, x):
    # min_z [q(z|x) + min_x' (q(y|x',z) + q(x'))]
    cost = joint.reorder(("X", "Z", "Y")).values
    qx = cost.min(axis=(1, 2))
    qxz = cost.min(axis=2)
    xi = m.domains["X"].index(x)
    nz, ny = cost.shape[1], cost.shape[2]
    return [
        min((qxz[xi, z] - qx[xi]) + min(cost[x2, z, y] - qxz[x2, z] + qx[x2] for x2 in range(len(qx)))
            for z in range(nz))
        for y in range(ny)
    ]


def test_criterion_7_minplus_and_deterministic():
    q = CausalQuery({"Y"}, {"X"})
    mismatches = []
    for g, brute in ((backdoor(), _minplus_brute_backdoor), (frontdoor(), _minplus_brute_frontdoor)):
        r = identify(g, q)
        s = r.expanded()
        for seed in range(10):
            m = synthesize_latent_dag(g, 2, seed, interp=MINPLUS)
            joint = observational_joint(m)
            tables = module_tables(joint, s, MINPLUS)
            for x in m.domains["X"]:
                got = evaluate(s, tables, {"X": x}, MINPLUS, effects=("Y",))
                if list(got.values) != brute(m, joint, x):
                    mismatches.append(("minplus", g.nodes, seed, x))

    # deterministic: every function on binary values for each module
    b = ("0", "1")
    unary = [lambda v: v, lambda v: "1" if v == "0" else "0", lambda v: "0", lambda v: "1"]
    binary = [lambda a, c, t=t: t[(a, c)]
              for t in (dict(zip(itertools.product(b, b), vals)) for vals in itertools.product(b, repeat=4))]
    consts = [lambda: "0", lambda: "1"]

    fd = identify(frontdoor(), q).expanded()
    doms = {v: b for v in ("X", "X'", "Z", "Y")}
    for fx, fz, fy in itertools.product(consts, unary, binary):
        tables = {
            "x'": ModuleTable.from_function("x'", (), "X'", doms, fx),
            "z": ModuleTable.from_function("z", ("X",), "Z", doms, fz),
            "y": ModuleTable.from_function("y", ("X'", "Z"), "Y", doms, fy),
        }
        for x in b:
            got = evaluate(fd, tables, {"X": x}, DET, effects=("Y",))
            want = fy(fx(), fz(x))
            if got[{"Y": want}] != 1.0 or got.values.sum() != 1.0:
                mismatches.append(("det front-door", x))

    bd = identify(backdoor(), q).signature
    doms = {v: b for v in ("X", "U", "Y")}
    for fu, fy in itertools.product(consts, binary):
        tables = {
            "u": ModuleTable.from_function("u", (), "U", doms, fu),
            "y": ModuleTable.from_function("y", ("X", "U"), "Y", doms, fy),
        }
        for x in b:
            got = evaluate(bd, tables, {"X": x}, DET, effects=("Y",))
            if got[{"Y": fy(x, fu())}] != 1.0:
                mismatches.append(("det back-door", x))
    assert record(7, "min-plus and deterministic interpretations", not mismatches,
                  f"{len(mismatches)} mismatches"), mismatches[:5]


def test_criterion_8_property_suites():
    import test_properties as P

    suites = {
        "monoid laws (1000 cases)": P.test_commutative_monoid_laws,
        "simple idempotence (500 cases)": P.test_simple_idempotent,
        "plan determinism": P.test_plans_valid_and_deterministic,
        "round-trip parse/print": P.test_signature_text_round_trip,
        "round-trip ADMG text": P.test_admg_text_round_trip,
    }
    failed = []
    for name, f in suites.items():
        try:
            f()
        except Exception as exc:
            failed.append(f"{name}: {exc!r}"[:200])
    assert record(8, "property suites", not failed, "; ".join(failed) or ", ".join(suites)), failed
