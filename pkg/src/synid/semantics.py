"""Concrete interpretations of signatures over finite domains.

Three interpretations are supported:

``prob``
    kernels are conditional probability tables; composition is sum-product.
``minplus``
    kernels are cost tables normalized so every row has minimum 0;
    composition adds costs and marginalization takes the minimum.
``det``
    kernels are functions (one-hot tables); composition is function
    composition.

Ground truth comes from an explicit latent DAG with one latent parent per
bidirected edge, evaluated by brute-force enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from synid.admg import Admg
from synid.errors import SemanticsError
from synid.signature import ExteriorSignature, MonoidalSignature, base_name

PROB = "prob"
MINPLUS = "minplus"
DET = "det"
INTERPRETATIONS = (PROB, MINPLUS, DET)

MAX_STATES = 10**7
ROW_TOL = 1e-12


class UndefinedInput(SemanticsError):
    """A deterministic table was asked for a value at a zero-probability input."""


def _check_interp(interp):
    if interp not in INTERPRETATIONS:
        raise SemanticsError(f"unknown interpretation {interp!r}; expected one of {', '.join(INTERPRETATIONS)}")


def latent_name(a, b) -> str:
    return f"L_{a}_{b}"


# ---------------------------------------------------------------------------
# value types


@dataclass
class Distribution:
    """A table over the joint values of ``variables``.

    ``values`` has one axis per variable, indexed by position in that
    variable's domain.
    """

    variables: tuple
    domains: dict
    values: np.ndarray
    interp: str = PROB

    def __post_init__(self):
        self.variables = tuple(self.variables)
        self.values = np.asarray(self.values, dtype=float)
        shape = tuple(len(self.domains[v]) for v in self.variables)
        if self.values.shape != shape:
            raise SemanticsError(f"table shape {self.values.shape} does not match domains {shape}")

    def _index(self, assignment):
        if isinstance(assignment, dict):
            assignment = tuple(assignment[v] for v in self.variables)
        elif not isinstance(assignment, tuple):
            assignment = (assignment,)
        return tuple(self.domains[v].index(x) for v, x in zip(self.variables, assignment, strict=True))

    def __getitem__(self, assignment) -> float:
        return float(self.values[self._index(assignment)])

    def items(self):
        for idx in itertools.product(*(range(len(self.domains[v])) for v in self.variables)):
            yield tuple(self.domains[v][i] for v, i in zip(self.variables, idx)), float(self.values[idx])

    def as_dict(self) -> dict:
        return dict(self.items())

    def marginal(self, keep) -> "Distribution":
        keep = [v for v in self.variables if v in set(keep)]
        axes = tuple(i for i, v in enumerate(self.variables) if v not in keep)
        red = np.min if self.interp == MINPLUS else np.sum
        vals = red(self.values, axis=axes) if axes else self.values
        return Distribution(keep, {v: self.domains[v] for v in keep}, vals, self.interp)

    def reorder(self, variables) -> "Distribution":
        variables = tuple(variables)
        if set(variables) != set(self.variables):
            raise SemanticsError("reorder needs the same variables")
        perm = [self.variables.index(v) for v in variables]
        return Distribution(variables, self.domains, np.transpose(self.values, perm), self.interp)

    def is_normalized(self, tol=1e-9) -> bool:
        if self.interp == MINPLUS:
            return abs(float(self.values.min())) <= tol
        return abs(float(self.values.sum()) - 1.0) <= tol

    def deviation(self, other: "Distribution") -> float:
        other = other.reorder(self.variables)
        return float(np.max(np.abs(self.values - other.values))) if self.values.size else 0.0

    def format(self, precision=6) -> str:
        head = " ".join(self.variables)
        label = {PROB: "p", MINPLUS: "cost", DET: "value"}[self.interp]
        rows = []
        for key, val in self.items():
            if self.interp == DET and val == 0:
                continue
            cell = " ".join(key)
            rows.append((cell, "" if self.interp == DET else f"{val:.{precision}f}"))
        width = max([len(head)] + [len(c) for c, _ in rows])
        out = [f"{head:<{width}}  {label if self.interp != DET else ''}".rstrip()]
        out += [f"{c:<{width}}  {v}".rstrip() for c, v in rows]
        return "\n".join(out)


@dataclass
class ModuleTable:
    """Kernel of one morphism: a table over inputs followed by outputs."""

    name: str
    inputs: tuple
    outputs: tuple
    domains: dict
    kernel: np.ndarray
    interp: str = PROB
    flagged: list = field(default_factory=list)

    def __post_init__(self):
        _check_interp(self.interp)
        self.inputs, self.outputs = tuple(self.inputs), tuple(self.outputs)
        self.kernel = np.asarray(self.kernel, dtype=float)
        shape = tuple(len(self.domains[v]) for v in self.inputs + self.outputs)
        if self.kernel.shape != shape:
            raise SemanticsError(f"table for {self.name} has shape {self.kernel.shape}, expected {shape}")

    @property
    def variables(self):
        return self.inputs + self.outputs

    def validate(self, tol=1e-9):
        k = len(self.inputs)
        rows = self.kernel.reshape(self.kernel.shape[:k] + (-1,))
        if self.interp == PROB:
            bad = np.abs(rows.sum(axis=-1) - 1) > tol
            bad |= (rows < -tol).any(axis=-1)
        elif self.interp == MINPLUS:
            bad = np.abs(rows.min(axis=-1)) > tol
        else:
            # an all-zero row is an undefined (zero-probability) input
            bad = ~(np.isin(rows, (0.0, 1.0)).all(axis=-1) & (rows.sum(axis=-1) <= 1))
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            row = {v: self.domains[v][i] for v, i in zip(self.inputs, idx)}
            kind = {PROB: "normalized", MINPLUS: "min-plus normalized (least cost 0)", DET: "a function"}[self.interp]
            raise SemanticsError(f"table for {self.name} is not {kind} at {row or 'its only row'}")

    def row(self, assignment) -> Distribution:
        idx = tuple(self.domains[v].index(assignment[v]) for v in self.inputs)
        return Distribution(self.outputs, self.domains, self.kernel[idx], self.interp)

    @classmethod
    def from_function(cls, name, inputs, output, domains, f) -> "ModuleTable":
        """Deterministic table from ``f(*input_values) -> value``.

        Arguments are passed positionally in ``inputs`` order; ``output`` may
        be a single name or a tuple of names (then ``f`` returns a tuple).
        """
        outputs = (output,) if isinstance(output, str) else tuple(output)
        inputs = tuple(inputs)
        shape = tuple(len(domains[v]) for v in inputs + outputs)
        kernel = np.zeros(shape)
        for idx in itertools.product(*(range(len(domains[v])) for v in inputs)):
            val = f(*(domains[v][i] for v, i in zip(inputs, idx)))
            vals = (val,) if len(outputs) == 1 else tuple(val)
            out = tuple(domains[v].index(x) for v, x in zip(outputs, vals, strict=True))
            kernel[idx + out] = 1.0
        return cls(name, inputs, outputs, domains, kernel, DET)


@dataclass
class DiscreteModel:
    """An explicit latent DAG witnessing an ADMG."""

    admg: Admg
    latents: dict  # latent -> (a, b)
    domains: dict
    cpts: dict  # variable -> (parents, table with axes parents..., self)
    interp: str = PROB

    def __post_init__(self):
        _check_interp(self.interp)
        self.validate()

    def observed(self) -> tuple:
        return self.admg.topo_order()

    def variables(self) -> tuple:
        return tuple(self.latents) + self.observed()

    def dag_parents(self, v) -> tuple:
        if v in self.latents:
            return ()
        lat = tuple(l for l, pair in self.latents.items() if v in pair)
        return tuple(self.admg.sort(self.admg.parents(v))) + lat

    def validate(self):
        for v in self.variables():
            if v not in self.domains or len(self.domains[v]) < 1:
                raise SemanticsError(f"no domain for {v}")
            if v not in self.cpts:
                raise SemanticsError(f"no table for {v}")
            parents, table = self.cpts[v]
            if set(parents) != set(self.dag_parents(v)):
                raise SemanticsError(f"table for {v} is over {parents}, expected parents {self.dag_parents(v)}")
            shape = tuple(len(self.domains[p]) for p in parents) + (len(self.domains[v]),)
            if np.shape(table) != shape:
                raise SemanticsError(f"table for {v} has shape {np.shape(table)}, expected {shape}")
            kind = self.table_interp(v)
            ModuleTable(v, parents, (v,), self.domains, table, kind).validate(ROW_TOL if kind == PROB else 1e-9)

    def table_interp(self, v) -> str:
        # deterministic models keep random exogenous noise: latents and
        # parentless observed nodes; everything else is a function
        if self.interp == DET and (v in self.latents or not self.dag_parents(v)):
            return PROB
        return self.interp

    def state_count(self) -> int:
        return int(np.prod([len(self.domains[v]) for v in self.variables()], dtype=float))


# ---------------------------------------------------------------------------
# model construction


def random_table(rng, shape, interp=PROB, max_cost=9):
    if interp == PROB:
        return rng.dirichlet(np.ones(shape[-1]), size=shape[:-1])
    if interp == MINPLUS:
        # integer costs keep min-plus arithmetic exact in floating point
        t = rng.integers(0, max_cost + 1, size=shape).astype(float)
        return t - t.min(axis=-1, keepdims=True)
    t = np.zeros(shape)
    choice = rng.integers(0, shape[-1], size=shape[:-1])
    np.put_along_axis(t, choice[..., None], 1.0, axis=-1)
    return t


def synthesize_latent_dag(g: Admg, latent_arity: int = 2, seed=0, *, domains=None,
                          cpts=None, interp=PROB, arity: int = 2) -> DiscreteModel:
    """Random latent DAG for ``g``: one latent common parent per bidirected edge.

    ``domains`` and ``cpts`` override the synthesized parts; a CPT given for
    an observed node must list exactly its parents in the latent DAG.
    """
    if latent_arity < 2:
        raise SemanticsError("latent_arity must be at least 2")
    _check_interp(interp)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    latents = {}
    for a, b in g.bidirected_edges():
        latents[latent_name(a, b)] = (a, b)
    doms = {}
    for l in latents:
        doms[l] = tuple(str(i) for i in range(latent_arity))
    for v in g.nodes:
        doms[v] = tuple(str(i) for i in range(arity))
    doms.update({k: tuple(x) for k, x in (domains or {}).items()})
    proto = DiscreteModel.__new__(DiscreteModel)
    proto.admg, proto.latents, proto.interp = g, latents, interp
    tables = {}
    given = dict(cpts or {})
    for v in tuple(latents) + g.topo_order():
        parents = proto.dag_parents(v)
        shape = tuple(len(doms[p]) for p in parents) + (len(doms[v]),)
        if v in given:
            tables[v] = _given_table(v, parents, given.pop(v), shape, doms)
        else:
            tables[v] = (parents, random_table(rng, shape, proto.table_interp(v)))
    if given:
        raise SemanticsError(f"tables given for unknown variables: {sorted(given)}")
    return DiscreteModel(g, latents, doms, tables, interp)


def _given_table(v, parents, spec, shape, doms):
    names, rows = spec
    names = tuple(names)
    if set(names) != set(parents) or len(names) != len(parents):
        raise SemanticsError(f"table for {v} must be given over parents {' '.join(parents) or '(none)'}")
    given_shape = tuple(len(doms[p]) for p in names) + (len(doms[v]),)
    arr = np.asarray(rows, dtype=float)
    if arr.size != int(np.prod(given_shape)):
        raise SemanticsError(f"table for {v} needs {int(np.prod(given_shape[:-1]))} rows of {given_shape[-1]} values")
    arr = arr.reshape(given_shape)
    perm = [names.index(p) for p in parents] + [len(names)]
    return parents, np.transpose(arr, perm)


# ---------------------------------------------------------------------------
# contraction


def _ops(interp):
    if interp == MINPLUS:
        return np.add, np.min, 0.0
    return np.multiply, np.sum, 1.0


def _contract(factors, keep, domains, interp):
    """Combine ``(variables, array)`` factors and reduce onto ``keep``."""
    combine, reduce_, neutral = _ops(interp)
    allv = list(dict.fromkeys([v for vs, _ in factors for v in vs] + list(keep)))
    states = np.prod([len(domains[v]) for v in allv], dtype=float)
    if states > MAX_STATES:
        raise SemanticsError(f"joint state space of {int(states)} exceeds {MAX_STATES}")
    shape = tuple(len(domains[v]) for v in allv)
    out = np.full(shape, neutral)
    for vs, arr in factors:
        perm = sorted(range(len(vs)), key=lambda i: allv.index(vs[i]))
        arr = np.transpose(arr, perm)
        present = [allv.index(vs[i]) for i in perm]
        bshape = [1] * len(allv)
        for ax, n in zip(present, arr.shape):
            bshape[ax] = n
        out = combine(out, arr.reshape(bshape))
    drop = tuple(i for i, v in enumerate(allv) if v not in keep)
    if drop:
        out = reduce_(out, axis=drop)
    rest = [v for v in allv if v in keep]
    return np.transpose(out, [rest.index(v) for v in keep])


def observational_joint(m: DiscreteModel) -> Distribution:
    if m.state_count() > MAX_STATES:
        raise SemanticsError(f"model has {m.state_count()} joint states, more than {MAX_STATES}")
    factors = [(parents + (v,), t) for v, (parents, t) in m.cpts.items()]
    obs = m.observed()
    interp = PROB if m.interp == DET else m.interp
    vals = _contract(factors, obs, m.domains, interp)
    return Distribution(obs, {v: m.domains[v] for v in obs}, vals, interp)


def oracle_interventional(m: DiscreteModel, q, a_value: dict) -> Distribution:
    """Truncated factorization on the latent DAG, by explicit enumeration.

    Deliberately naive: one pass over every joint assignment of the
    non-intervened variables, kept independent of the contraction code.
    """
    if m.state_count() > MAX_STATES:
        raise SemanticsError(f"model has {m.state_count()} joint states, more than {MAX_STATES}")
    minplus = m.interp == MINPLUS
    causes = set(q.causes)
    if set(a_value) != causes:
        raise SemanticsError(f"intervention must set exactly {sorted(causes)}")
    effects = tuple(v for v in m.observed() if v in q.effects)
    free = [v for v in m.variables() if v not in causes]
    index = {}
    for v, x in a_value.items():
        if x not in m.domains[v]:
            raise SemanticsError(f"{x!r} is not a value of {v}")
        index[v] = m.domains[v].index(x)
    out = {}
    for combo in itertools.product(*(range(len(m.domains[v])) for v in free)):
        index.update(zip(free, combo))
        w = 0.0 if minplus else 1.0
        for v in free:
            parents, table = m.cpts[v]
            entry = table[tuple(index[p] for p in parents) + (index[v],)]
            if minplus:
                w += entry
            else:
                w *= entry
        key = tuple(index[v] for v in effects)
        if key in out:
            out[key] = min(out[key], w) if minplus else out[key] + w
        else:
            out[key] = w
    shape = tuple(len(m.domains[v]) for v in effects)
    vals = np.zeros(shape)
    for key, w in out.items():
        vals[key] = w
    return Distribution(effects, {v: m.domains[v] for v in effects}, vals, PROB if m.interp == DET else m.interp)


# ---------------------------------------------------------------------------
# signature semantics


def _stochastic(s: MonoidalSignature):
    return [m for m in s.morphisms() if not s.is_copy(m)]


def free_inputs(s: MonoidalSignature) -> tuple:
    """Objects the signature consumes without producing them."""
    made = {v for m in _stochastic(s) for v in s.objects_of(m)}
    used = set()
    for m in s.dom:
        used |= s.dom[m].support()
    return tuple(v for v in s.objects if v in used and v not in made)


def default_effects(s: MonoidalSignature) -> tuple:
    made = [v for m in _stochastic(s) for v in s.objects_of(m)]
    return tuple(v for v in s.objects if v in made and s.surplus(v) > 0)


def conditional(joint: Distribution, outputs, inputs, name=None, interp=PROB) -> ModuleTable:
    """Kernel of ``outputs`` given ``inputs`` read off ``joint``.

    Conditioning events of zero mass (infinite cost) get a uniform row (a
    zero-cost row under min-plus) and are listed in ``flagged``.
    """
    outputs, inputs = tuple(outputs), tuple(inputs)
    both = joint.marginal(inputs + outputs).reorder(inputs + outputs).values
    cond = joint.marginal(inputs).reorder(inputs).values if inputs else (
        np.min(joint.values) if joint.interp == MINPLUS else np.sum(joint.values)
    )
    cond = np.asarray(cond).reshape(np.shape(cond) + (1,) * len(outputs))
    flagged = []
    with np.errstate(divide="ignore", invalid="ignore"):
        if joint.interp == MINPLUS:
            dead = ~np.isfinite(cond)
            kernel = np.where(dead, 0.0, both - cond)
        else:
            dead = cond <= 0
            n = int(np.prod([len(joint.domains[v]) for v in outputs]))
            kernel = np.where(dead, 1.0 / n, both / np.where(dead, 1.0, cond))
    dead_rows = dead.reshape(dead.shape[: len(inputs)]) if inputs else np.asarray(dead).reshape(())
    for idx in np.argwhere(dead_rows):
        flagged.append({v: joint.domains[v][i] for v, i in zip(inputs, idx)})
    if interp == DET:
        kernel = np.where(np.isclose(kernel, 1.0, atol=1e-12), 1.0, np.where(np.isclose(kernel, 0.0, atol=1e-12), 0.0, kernel))
        # a function is undefined off the support; evaluation fails only
        # if it actually reaches such an input
        kernel = np.where(dead, 0.0, kernel)
    return ModuleTable(name or ",".join(outputs), inputs, outputs, joint.domains, kernel, interp, flagged)


def _resolve(v, domains):
    b = base_name(v)
    if b not in domains:
        raise SemanticsError(f"object {v!r} does not name an observed variable")
    return b


def module_tables(joint: Distribution, s, interp=PROB) -> dict:
    """One table per morphism of ``s``, read off the observational joint.

    A generator is interpreted as the conditional of its object given its
    domain objects; primed objects share the unprimed variable's domain and
    conditional. Copy generators become identity kernels. If ``s`` is an
    :class:`ExteriorSignature`, composites are interpreted by evaluating
    their recorded interiors.
    """
    _check_interp(interp)
    if interp == MINPLUS and joint.interp != MINPLUS:
        raise SemanticsError("a min-plus table needs a min-plus joint")
    ext = s if isinstance(s, ExteriorSignature) else ExteriorSignature(s)
    sig = ext.sig
    base_tables = {}
    out = {}
    for m in sig.morphisms():
        if m in ext.interiors:
            part = ext.interiors[m].part
            inner = module_tables(joint, part, interp)
            out[m] = composite_table(m, part, inner, sig.dom[m].support(), sig.objects_of(m), joint, interp)
            continue
        out[m] = _generator_table(m, sig, joint, interp, base_tables)
    return out


def _generator_table(m, sig, joint, interp, cache):
    own = sig.objects_of(m)
    ins = tuple(v for v in sig.objects if v in sig.dom[m] and v not in own)
    doms = dict(joint.domains)
    for v in own + ins:
        doms[v] = joint.domains[_resolve(v, joint.domains)]
    if sig.is_copy(m):
        if len(own) != 1:
            raise SemanticsError(f"copy generator {m} must produce one object")
        n = len(doms[own[0]])
        kernel = np.eye(n) if interp != MINPLUS else np.where(np.eye(n) > 0, 0.0, np.inf)
        # never contracted: evaluation treats a copied object as an input
        return ModuleTable(m, own, own, doms, kernel, interp)
    bases_in = tuple(_resolve(v, doms) for v in ins)
    bases_out = tuple(_resolve(v, doms) for v in own)
    if len(set(bases_in + bases_out)) != len(bases_in + bases_out):
        raise SemanticsError(f"{m} mentions two copies of the same variable")
    key = (bases_out, bases_in)
    if key not in cache:
        cache[key] = conditional(joint, bases_out, bases_in, m, interp)
    base = cache[key]
    t = ModuleTable(m, ins, own, doms, base.kernel, interp, list(base.flagged))
    if interp == DET:
        t.validate()
    return t


def composite_table(name, part, tables, inputs, outputs, joint, interp) -> ModuleTable:
    ins = tuple(v for v in part.objects if v in inputs)
    doms = {v: joint.domains[_resolve(v, joint.domains)] for v in ins + tuple(outputs)}
    shape = tuple(len(doms[v]) for v in ins + tuple(outputs))
    kernel = np.zeros(shape)
    flagged = [f for t in tables.values() for f in t.flagged]
    for idx in itertools.product(*(range(len(doms[v])) for v in ins)):
        a = {v: doms[v][i] for v, i in zip(ins, idx)}
        try:
            d = evaluate(part, tables, a, interp, effects=outputs)
        except UndefinedInput:
            flagged.append(a)
            continue
        kernel[idx] = d.reorder(outputs).values
    return ModuleTable(name, ins, tuple(outputs), doms, kernel, interp, flagged)


def evaluate(s: MonoidalSignature, tables: dict, a_value: dict, interp=PROB, effects=None) -> Distribution:
    """Interpret ``s`` with ``tables`` at the input assignment ``a_value``.

    Objects that are produced but not among ``effects`` (by default the
    produced objects with unconsumed outputs) are summed out, or minimized
    out under min-plus. Entries of ``a_value`` for objects the signature
    never mentions are ignored.
    """
    _check_interp(interp)
    if isinstance(s, ExteriorSignature):
        s = s.sig
    inputs = free_inputs(s)
    missing = [v for v in inputs if v not in a_value]
    if missing:
        raise SemanticsError(f"no input value for {', '.join(missing)}")
    stoch = _stochastic(s)
    made = {v for m in stoch for v in s.objects_of(m)}
    clash = [v for v in a_value if v in made]
    if clash:
        raise SemanticsError(f"cannot assign produced objects {', '.join(clash)}")
    effects = tuple(default_effects(s) if effects is None else effects)
    for v in effects:
        if v not in made:
            raise SemanticsError(f"effect {v} is not produced by the signature")
    for m in stoch:
        if m not in tables:
            raise SemanticsError(f"no table for morphism {m}")
        if tables[m].interp != interp:
            raise SemanticsError(f"table for {m} is a {tables[m].interp} table, not {interp}")
    domains = {}
    for m in stoch:
        domains.update(tables[m].domains)
    for v in inputs:
        if v not in domains:
            raise SemanticsError(f"no domain known for input {v}")
        if a_value[v] not in domains[v]:
            raise SemanticsError(f"{a_value[v]!r} is not a value of {v}")
    fixed = {v: domains[v].index(a_value[v]) for v in inputs}

    if interp == DET:
        return _evaluate_det(s, stoch, tables, fixed, effects, domains)

    factors = []
    for m in stoch:
        t = tables[m]
        own = s.objects_of(m)
        need = set(s.dom[m].support()) - set(own)
        if set(t.outputs) != set(own) or set(t.inputs) != need:
            raise SemanticsError(f"table for {m} does not match its type {s.line(m)}")
        idx = tuple(fixed.get(v, slice(None)) for v in t.variables)
        factors.append((tuple(v for v in t.variables if v not in fixed), t.kernel[idx]))
    vals = _contract(factors, effects, domains, interp)
    return Distribution(effects, {v: domains[v] for v in effects}, vals, interp)


def _evaluate_det(s, stoch, tables, fixed, effects, domains):
    val = dict(fixed)
    for m in stoch:
        t = tables[m]
        row = t.kernel[tuple(val[v] for v in t.inputs)]
        hits = np.argwhere(row == 1.0)
        if not row.any():
            at = {v: domains[v][val[v]] for v in t.inputs}
            raise UndefinedInput(f"{m} is undefined at {at}: that event has zero probability")
        if len(hits) != 1 or row.sum() != 1.0:
            raise SemanticsError(f"table for {m} is not a function")
        val.update(zip(t.outputs, (int(i) for i in hits[0])))
    vals = np.zeros(tuple(len(domains[v]) for v in effects))
    vals[tuple(val[v] for v in effects)] = 1.0
    return Distribution(effects, {v: domains[v] for v in effects}, vals, DET)


# ---------------------------------------------------------------------------
# verification against the oracle


@dataclass
class CheckReport:
    query: str
    trials: int
    interp: str
    max_deviation: float
    deviations: list = field(default_factory=list)
    flagged: int = 0

    def passed(self, tol=1e-9) -> bool:
        return self.max_deviation < tol


def compare(model: DiscreteModel, result, joint=None) -> tuple:
    """Largest deviation between the identified signature and the oracle.

    Both the exterior form (composites through their interiors) and the
    fully inlined form are evaluated. Free inputs other than the causes can
    remain after fixing; the identified kernel must not depend on them, so
    every value of theirs is tried. Returns ``(deviation, flagged rows)``.
    """
    interp = model.interp
    joint = joint if joint is not None else observational_joint(model)
    q = result.query
    forms = [result.exteriors.sig, result.expanded()]
    tables = [module_tables(joint, result.exteriors, interp), None]
    tables[1] = module_tables(joint, forms[1], interp)
    flagged = sum(len(t.flagged) for ts in tables for t in ts.values())
    causes = model.admg.sort(q.causes)
    effects = model.admg.sort(q.effects)
    extra = [[v for v in free_inputs(f) if v not in q.causes] for f in forms]
    worst = 0.0
    for combo in itertools.product(*(model.domains[v] for v in causes)):
        a = dict(zip(causes, combo))
        ref = oracle_interventional(model, q, a)
        for form, ts, xs in zip(forms, tables, extra):
            doms = [model.domains[base_name(v)] for v in xs]
            for rest in itertools.product(*doms):
                got = evaluate(form, ts, {**a, **dict(zip(xs, rest))}, interp, effects=effects)
                worst = max(worst, ref.deviation(got))
    return worst, flagged


def check_identification(g: Admg, q, trials: int = 20, seed=0, interp=PROB,
                         latent_arity: int = 2, arity: int = 2) -> CheckReport:
    from synid.identify import identify

    r = identify(g, q)
    if not r.identified:
        raise SemanticsError(f"{q.format(g)} is not identifiable")
    seqs = np.random.SeedSequence(seed).spawn(trials)
    devs, flagged = [], 0
    for ss in seqs:
        m = synthesize_latent_dag(g, latent_arity, np.random.default_rng(ss), interp=interp, arity=arity)
        d, f = compare(m, r)
        devs.append(d)
        flagged += f
    return CheckReport(q.format(g), trials, interp, max(devs, default=0.0), devs, flagged)
