"""Scenario files, the built-in suite, and the runner behind the CLI.

A scenario is one JSON object::

    {"id": "lemma-1-1/z4/s0", "claim": "lemma_1_1",
     "ring": {"kind": "Z[1/l]", "l": 2},
     "group": {"cyclic": 4},
     "module": {"random": {"max_rank": 3}},
     "seed": 0}

Group specs: ``{"cyclic": m}``, ``{"product": [m1, m2, ..]}`` (entries may
also be nested group specs), ``{"table": [[..], ..]}``,
``{"matrix_group": {"kind": "SL", "n": 2, "m": 3}}``, ``{"symmetric": n}``
and ``{"dihedral": n}``.  Module specs: ``"trivial"``, ``"negation"``,
``{"random": {"max_rank": r}}`` or ``{"ambient_rank": r, "relations":
[[..], ..], "action": {"<element index>": [[..], ..]}}`` where every
relation is a vector and the listed elements must generate the group.
A file holds one scenario, a list of them, or ``{"scenarios": [..]}``.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import groups as gr
from .complexes import bar_complex, bar_homology_type, homology, periodic_complex
from .gmodules import (
    ActionError,
    GModule,
    GModuleMap,
    alpha,
    coinvariants,
    ext_invariants_comparison,
    invariants,
    negation_gmodule,
    norm,
    random_gmodule,
    tor_coinvariants_comparison,
    trivial_gmodule,
)
from .group_homology import (
    HOMOLOGY,
    CheckReport,
    PreconditionFailure,
    comparison_with_abelianization,
    conjugation_pair_action,
    h,
    induced,
    lhs_e2,
    uct_check,
    verify_theorem_ab,
    verify_vanishing,
)
from .linalg import DEFAULT_BUDGET_CELLS, BudgetExceeded
from .linear_groups import (
    build_group,
    verify_delta_split,
    verify_gamma_exact,
    verify_unit_power_trivial,
)
from .modules import ModuleMap, PresentedModule, is_isomorphism
from .ring import ZZ, RingSpec, parse_ring, prime_factors

CLAIMS = (
    "lemma_1_1", "cor_1_2", "lemma_1_3", "example_1", "theorem_1_4", "cor_1_5_finite",
    "uct", "e2_vanishing", "inner_action", "gamma_exact", "delta_split",
    "unit_power_trivial", "oracle_cyclic", "h1_abelianization",
)
STATUSES = ("pass", "fail", "skipped_budget", "precondition_failure")


class ScenarioError(ValueError):
    """Malformed scenario input; ``where`` locates the offending field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where, self.message = where, message


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Scenario:
    id: str
    claim: str
    params: dict
    seed: int = 0
    expect_precondition_failure: bool = False

    def to_json(self) -> dict:
        out = {"id": self.id, "claim": self.claim, "seed": self.seed, **self.params}
        if self.expect_precondition_failure:
            out["expect_precondition_failure"] = True
        return out


@dataclass
class Report:
    id: str
    claim: str
    status: str
    values: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    timing: float | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "skipped_budget")

    def record(self, with_timing: bool = False) -> dict:
        out = {"id": self.id, "claim": self.claim, "status": self.status,
               "values": _plain(self.values), "checks": dict(self.checks),
               "details": dict(self.details)}
        if with_timing and self.timing is not None:
            out["timing"] = round(self.timing, 3)
        return out

    def text(self, with_timing: bool = False) -> str:
        head = f"{self.status.upper():<22}{self.id}  [{self.claim}]"
        if with_timing and self.timing is not None:
            head += f"  {self.timing:.2f}s"
        lines = [head]
        for k in sorted(self.values):
            lines.append(f"    {k} = {json.dumps(_plain(self.values[k]))}")
        for k, ok in self.checks.items():
            d = self.details.get(k, "")
            lines.append(f"    [{'ok' if ok else 'FAIL'}] {k}" + (f"  ({d})" if d else ""))
        for k in sorted(set(self.details) - set(self.checks)):
            lines.append(f"    {k}: {self.details[k]}")
        return "\n".join(lines)


def _plain(x):
    """JSON-ready copy: numpy scalars and arrays become ints and lists."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


# ---------------------------------------------------------------- parsing


def _int(v, where: str, minimum: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(where, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ScenarioError(where, f"expected an integer >= {minimum}, got {v}")
    return v


def _matrix(v, where: str, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
        raise ScenarioError(where, "expected a list of rows")
    for i, r in enumerate(v):
        for j, x in enumerate(r):
            _int(x, f"{where}[{i}][{j}]")
    if len({len(r) for r in v}) > 1:
        raise ScenarioError(where, "rows have different lengths")
    a = np.array(v, dtype=np.int64).reshape(len(v), len(v[0]) if v else 0)
    if rows is not None and a.shape[0] != rows or cols is not None and a.shape[1] != cols:
        raise ScenarioError(where, f"expected shape {rows}x{cols}, got {a.shape[0]}x{a.shape[1]}")
    return a


def parse_ring_spec(spec, where: str = "ring") -> RingSpec:
    if spec is None:
        return ZZ
    if isinstance(spec, str):
        try:
            return parse_ring(spec)
        except ValueError as exc:
            raise ScenarioError(where, str(exc)) from None
    if not isinstance(spec, dict):
        raise ScenarioError(where, "expected a string or an object")
    kind = spec.get("kind", "Z")
    if kind in ("Z", "ZZ"):
        return ZZ
    if kind in ("Z[1/l]", "localized"):
        return RingSpec(_int(spec.get("l"), f"{where}.l", 1))
    raise ScenarioError(f"{where}.kind", f"unknown ring kind {kind!r}")


def ring_json(R: RingSpec) -> dict:
    return {"kind": "Z"} if R.l == 1 else {"kind": "Z[1/l]", "l": R.l}


def parse_group_spec(spec, where: str = "group", bound: int = gr.DEFAULT_MAX_ORDER):
    """``(GroupTable, MatrixGroup or None)``."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ScenarioError(where, "expected an object with exactly one key")
    (kind, arg), = spec.items()
    try:
        if kind == "cyclic":
            return gr.cyclic(_int(arg, f"{where}.cyclic", 1)), None
        if kind == "product":
            if not isinstance(arg, list):
                raise ScenarioError(f"{where}.product", "expected a list")
            G = gr.cyclic(1)
            for i, part in enumerate(arg):
                H = (gr.cyclic(_int(part, f"{where}.product[{i}]", 1)) if not isinstance(part, dict)
                     else parse_group_spec(part, f"{where}.product[{i}]", bound)[0])
                G = gr.direct_product(G, H) if G.order > 1 else H
                if G.order > bound:
                    raise ScenarioError(where, f"order exceeds {bound}")
            return G, None
        if kind == "table":
            return gr.group_from_table(_matrix(arg, f"{where}.table")), None
        if kind == "matrix_group":
            if not isinstance(arg, dict):
                raise ScenarioError(f"{where}.matrix_group", "expected an object")
            mg = build_group(_int(arg.get("n"), f"{where}.matrix_group.n", 1),
                             _int(arg.get("m"), f"{where}.matrix_group.m", 2),
                             str(arg.get("kind", "SL")), bound)
            return mg.table, mg
        if kind == "symmetric":
            return gr.symmetric_group(_int(arg, f"{where}.symmetric", 1)), None
        if kind == "dihedral":
            return gr.dihedral(_int(arg, f"{where}.dihedral", 1)), None
    except ScenarioError:
        raise
    except (gr.GroupAxiomError, ValueError) as exc:
        raise ScenarioError(where, str(exc)) from None
    raise ScenarioError(where, f"unknown group kind {kind!r}")


def parse_subgroup_spec(G: gr.GroupTable, spec, where: str = "subgroup") -> gr.Subgroup:
    if spec is None:
        return gr.whole_group(G)
    gens = spec.get("generators") if isinstance(spec, dict) else None
    if not isinstance(gens, list):
        raise ScenarioError(where, "expected {\"generators\": [element indices]}")
    for i, g in enumerate(gens):
        _int(g, f"{where}.generators[{i}]", 0)
        if g >= G.order:
            raise ScenarioError(f"{where}.generators[{i}]", f"no element {g} in a group of order {G.order}")
    return gr.subgroup_generated(G, gens)


def parse_module_spec(G: gr.GroupTable, R: RingSpec, spec, seed: int, where: str = "module") -> GModule:
    if spec is None or spec == "trivial":
        return trivial_gmodule(G, R)
    if spec == "negation":
        gens = [g for g in range(G.order) if gr.subgroup_generated(G, [g]).elements == tuple(range(G.order))]
        if not gens or G.order % 2:
            raise ScenarioError(where, "the negation module needs a cyclic group of even order")
        return GModule.from_generators(G, PresentedModule.free(R, 1), {gens[0]: [[-1]]})
    if not isinstance(spec, dict):
        raise ScenarioError(where, f"unknown module spec {spec!r}")
    if "random" in spec:
        opts = spec["random"] or {}
        return random_gmodule(G, R, seed, max_rank=_int(opts.get("max_rank", 3), f"{where}.random.max_rank", 1))
    r = _int(spec.get("ambient_rank"), f"{where}.ambient_rank", 0)
    rels = spec.get("relations", [])
    rel = _matrix(rels, f"{where}.relations", cols=r).T if rels else np.zeros((r, 0), dtype=np.int64)
    module = PresentedModule(R, rel, r)
    action = spec.get("action", {})
    if action == "trivial" or not action:
        return GModule.trivial(G, module)
    if not isinstance(action, dict):
        raise ScenarioError(f"{where}.action", "expected an object keyed by element index")
    gens = {}
    for k, v in action.items():
        try:
            g = int(k)
        except ValueError:
            raise ScenarioError(f"{where}.action", f"key {k!r} is not an element index") from None
        if not 0 <= g < G.order:
            raise ScenarioError(f"{where}.action.{k}", f"no element {g} in a group of order {G.order}")
        gens[g] = _matrix(v, f"{where}.action.{k}", r, r)
    try:
        return GModule.from_generators(G, module, gens)
    except ActionError as exc:
        raise ScenarioError(f"{where}.action", str(exc)) from None


def parse_N(spec, R: RingSpec, where: str = "N") -> PresentedModule:
    """``N`` as a list of moduli (``0`` for a free summand)."""
    if not isinstance(spec, list):
        raise ScenarioError(where, "expected a list of moduli")
    ms = [_int(x, f"{where}[{i}]", 0) for i, x in enumerate(spec)]
    rel = np.diag(np.array(ms, dtype=np.int64)) if ms else np.zeros((0, 0), dtype=np.int64)
    return PresentedModule(R, rel[:, [i for i, m in enumerate(ms) if m]], len(ms))


def scenario_from_json(obj, where: str = "scenario") -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError(where, "expected an object")
    for key in ("id", "claim"):
        if not isinstance(obj.get(key), str):
            raise ScenarioError(f"{where}.{key}", "missing or not a string")
    if obj["claim"] not in CLAIMS:
        raise ScenarioError(f"{where}.claim", f"unknown claim {obj['claim']!r}")
    seed = _int(obj.get("seed", 0), f"{where}.seed")
    epf = obj.get("expect_precondition_failure", False)
    if not isinstance(epf, bool):
        raise ScenarioError(f"{where}.expect_precondition_failure", "expected true or false")
    params = {k: v for k, v in obj.items()
              if k not in ("id", "claim", "seed", "expect_precondition_failure")}
    return Scenario(obj["id"], obj["claim"], params, seed, epf)


def load_scenarios(text: str, source: str = "<input>") -> list[Scenario]:
    """Parse a scenario document; errors carry line/column or a field path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None
    if isinstance(doc, dict) and "scenarios" in doc:
        doc, base = doc["scenarios"], f"{source}: scenarios"
    else:
        base = f"{source}: "
    items = doc if isinstance(doc, list) else [doc]
    out = [scenario_from_json(s, f"{base}[{i}]" if isinstance(doc, list) else f"{source}: scenario")
           for i, s in enumerate(items)]
    ids = [s.id for s in out]
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        raise ScenarioError(source, f"duplicate scenario ids {dup}")
    return out


# ---------------------------------------------------------------- claim handlers


class _Ctx:
    """Parsed parameters of a scenario, built on demand."""

    def __init__(self, sc: Scenario):
        self.sc = sc
        self.p = sc.params
        self.budget = self.p.get("budget_cells", DEFAULT_BUDGET_CELLS)
        if self.budget is not None:
            _int(self.budget, "budget_cells", 1)
        self.ring = parse_ring_spec(self.p.get("ring"))
        self._group = None

    def group(self):
        if self._group is None:
            if "group" not in self.p:
                raise ScenarioError("group", "missing")
            self._group = parse_group_spec(self.p["group"])
        return self._group[0]

    def matrix_group(self):
        self.group()
        if self._group[1] is None:
            raise ScenarioError("group", "expected a matrix_group")
        return self._group[1]

    def subgroup(self):
        return parse_subgroup_spec(self.group(), self.p.get("subgroup"))

    def module(self, G=None):
        return parse_module_spec(G or self.group(), self.ring, self.p.get("module"), self.sc.seed)

    def int(self, key: str, default=None, minimum: int | None = 0) -> int:
        v = self.p.get(key, default)
        if v is None:
            raise ScenarioError(key, "missing")
        return _int(v, key, minimum)

    def degrees(self, default=(0, 1, 2)) -> list[int]:
        if "degree" in self.p:
            return [self.int("degree")]
        ds = self.p.get("degrees", list(default))
        if not isinstance(ds, list):
            raise ScenarioError("degrees", "expected a list")
        return [_int(d, f"degrees[{i}]", 0) for i, d in enumerate(ds)]


def _precondition(rep: CheckReport, ok: bool, why: str) -> bool:
    if not ok:
        rep.status = "precondition_failure"
        rep.details["precondition"] = why
    return ok


def _lemma_1_1(c: _Ctx) -> CheckReport:
    G, rep = c.group(), CheckReport("pending")
    M = c.module()
    if not _precondition(rep, c.ring.inverts(G.order), f"|G| = {G.order} is not invertible in {c.ring}"):
        return rep
    a, nb = alpha(M), norm(M)
    rep.record("alpha is an isomorphism", is_isomorphism(a),
               f"{a.domain.describe()} -> {a.codomain.describe()}")
    rep.record("N∘alpha = |G|", nb.compose(a).equals(ModuleMap.scalar(G.order, a.domain)))
    rep.record("alpha∘N = |G|", a.compose(nb).equals(ModuleMap.scalar(G.order, a.codomain)))
    rep.values = {"M^G": a.domain.moduli, "M_G": a.codomain.moduli}
    return rep.finish()


def _cor_1_2(c: _Ctx) -> CheckReport:
    G = c.group()
    rep = verify_vanishing(G, c.module(), c.degrees((1, 2, 3)), c.budget)
    return rep


def _lemma_1_3(c: _Ctx) -> CheckReport:
    G, rep = c.group(), CheckReport("pending")
    M = c.module()
    N = parse_N(c.p.get("N", [2]), c.ring)
    if not _precondition(rep, c.ring.inverts(G.order), f"|G| = {G.order} is not invertible in {c.ring}"):
        return rep
    t = tor_coinvariants_comparison(1, N, M)
    e = ext_invariants_comparison(1, N, M)
    rep.record("Tor_1(N,M)_G -> Tor_1(N,M_G)", is_isomorphism(t),
               f"{t.domain.describe()} -> {t.codomain.describe()}")
    rep.record("Ext^1(N,M^G) -> Ext^1(N,M)^G", is_isomorphism(e),
               f"{e.domain.describe()} -> {e.codomain.describe()}")
    rep.values = {"tor": [t.domain.moduli, t.codomain.moduli], "ext": [e.domain.moduli, e.codomain.moduli]}
    return rep.finish()


def _example_1(c: _Ctx) -> CheckReport:
    """Z/2 acting on R by -1.  Without 1/2 the two comparison maps of the
    lemma on Tor and Ext fail to be isomorphisms; the values are checked
    against the closed form for the given ring."""
    rep = CheckReport("pending")
    R = c.ring
    M = negation_gmodule(2, R)
    N = parse_N([2], R)
    MG, _ = coinvariants(M)
    MI, _ = invariants(M)
    t = tor_coinvariants_comparison(1, N, M)
    e = ext_invariants_comparison(1, N, M)
    got = {"M_G": MG.moduli, "M^G": MI.moduli,
           "Tor_1(Z/2,M)_G": t.domain.moduli, "Tor_1(Z/2,M_G)": t.codomain.moduli,
           "Ext^1(Z/2,M^G)": e.domain.moduli, "Ext^1(Z/2,M)^G": e.codomain.moduli}
    two = [] if R.inverts(2) else [2]
    want = {"M_G": two, "M^G": [], "Tor_1(Z/2,M)_G": [], "Tor_1(Z/2,M_G)": two,
            "Ext^1(Z/2,M^G)": [], "Ext^1(Z/2,M)^G": two}
    for k in want:
        rep.record(f"{k} = {want[k]}", list(got[k]) == want[k], json.dumps(_plain(got[k])))
    iso = R.inverts(2)
    rep.record("Tor comparison is an isomorphism" if iso else "Tor comparison is not an isomorphism",
               is_isomorphism(t) == iso)
    rep.record("Ext comparison is an isomorphism" if iso else "Ext comparison is not an isomorphism",
               is_isomorphism(e) == iso)
    rep.values = got
    return rep.finish()


def _theorem_1_4(c: _Ctx) -> CheckReport:
    A = c.group()
    B, M = c.subgroup(), c.module()
    reports = [verify_theorem_ab(A, B, M, n, c.budget) for n in c.degrees()]
    return _merge(reports, c.degrees())


def _merge(reports: list[CheckReport], degrees) -> CheckReport:
    out = CheckReport("pending")
    for n, r in zip(degrees, reports):
        if r.status == "precondition_failure":
            return r
        for k, v in r.checks.items():
            out.record(f"n={n} {k}", v, r.details.get(k, ""))
        for k, v in r.values.items():
            out.values[f"n={n} {k}"] = v
    return out.finish()


def _quotient_precondition(rep, A, B, R) -> bool:
    if not _precondition(rep, A.is_abelian, "A is not abelian"):
        return False
    Q, _ = gr.quotient(A, B)
    e = gr.exponent(Q)
    return _precondition(rep, R.inverts(e), f"exponent {e} of A/B is not invertible in {R}")


def _cor_1_5_finite(c: _Ctx) -> CheckReport:
    """With ``B`` acting trivially, ``M -> M_A`` induces isomorphisms on
    ``H_n(A, -)``.  A random module is pulled back from ``A/B``."""
    A, rep = c.group(), CheckReport("pending")
    B = c.subgroup()
    if not _quotient_precondition(rep, A, B, c.ring):
        return rep
    spec = c.p.get("module")
    if isinstance(spec, dict) and "random" in spec:
        Q, proj = gr.quotient(A, B)
        MQ = c.module(Q)
        M = GModule(A, MQ.module, [MQ.action[proj(a)] for a in range(A.order)])
    else:
        M = c.module()
    r = M.rank
    if not _precondition(rep, all((np.asarray(M.action[b]) == np.eye(r)).all() for b in B.elements),
                         "B does not act trivially on M"):
        return rep
    C, _ = coinvariants(M)
    MA = GModule(A, C, M.action, validate=False)
    for n in c.degrees():
        f = induced(GModuleMap(M, MA, np.eye(r, dtype=np.int64)), n, HOMOLOGY, budget=c.budget)
        rep.record(f"H_{n}(A,M) -> H_{n}(A,M_A)", is_isomorphism(f),
                   f"{f.domain.describe()} -> {f.codomain.describe()}")
        rep.values[f"H_{n}"] = [f.domain.moduli, f.codomain.moduli]
    return rep.finish()


def _uct(c: _Ctx) -> CheckReport:
    G, rep = c.group(), CheckReport("pending")
    spec = c.p.get("module", {"ambient_rank": 1, "relations": [[2]]})
    M = parse_module_spec(G, c.ring, spec, c.sc.seed)
    if not _precondition(rep, M.is_trivial(), "coefficients must carry the trivial action"):
        return rep
    for n in c.degrees((0, 1, 2)):
        d = uct_check(G, M.module, n, c.budget)
        rep.record(f"n={n}", d["status"] == "pass", f"{d['lhs']} vs {d['rhs']}")
        rep.values[f"n={n}"] = [d["lhs"], d["rhs"]]
    return rep.finish()


def _e2_vanishing(c: _Ctx) -> CheckReport:
    A, rep = c.group(), CheckReport("pending")
    B, M = c.subgroup(), c.module()
    if not _quotient_precondition(rep, A, B, c.ring):
        return rep
    ps = c.p.get("p", [1, 2])
    qs = c.p.get("q", [0, 1, 2])
    for which in ("M_B", "M_A"):
        for p in ps:
            for q in qs:
                E = lhs_e2(A, B, M, _int(p, "p", 1), _int(q, "q", 0), which, c.budget)
                rep.record(f"E2[{which}]_{p},{q} = 0", E.module.is_zero, E.module.describe())
    return rep.finish()


def _inner_action(c: _Ctx) -> CheckReport:
    G, rep = c.group(), CheckReport("pending")
    M = c.module()
    g0s = [c.int("g0")] if "g0" in c.p else list(range(G.order))
    for n in c.degrees((0, 1, 2)):
        H = h(G, M, n, budget=c.budget).module
        rep.values[f"H_{n}"] = H.moduli
        bad = [g for g in g0s if not conjugation_pair_action(G, g, M, n, budget=c.budget).is_identity]
        rep.record(f"n={n} identity for all g0", not bad, f"failing g0: {bad}" if bad else "")
    return rep.finish()


def _gamma_exact(c: _Ctx) -> CheckReport:
    rep = verify_gamma_exact(c.int("n", minimum=1), c.int("m", minimum=2))
    if "mu" in c.p and rep.status != "skipped_budget":
        rep.record(f"|mu_n| = {c.p['mu']}", rep.values.get("mu") == c.p["mu"])
        rep.finish()
    return rep


def _delta_split(c: _Ctx) -> CheckReport:
    return verify_delta_split(c.int("n", minimum=1), c.int("m", minimum=2), budget=c.budget)


def _unit_power_trivial(c: _Ctx) -> CheckReport:
    G = c.matrix_group()
    rep = verify_unit_power_trivial(c.int("a", minimum=1), G, c.int("q", 1), c.budget)
    return rep


def _oracle_cyclic(c: _Ctx) -> CheckReport:
    """Bar complex against the periodic resolution for ``Z/m``."""
    rep = CheckReport("pending")
    m = c.int("m", minimum=1)
    G = gr.cyclic(m)
    spec = c.p.get("module", "trivial")
    M = parse_module_spec(G, c.ring, spec, c.sc.seed)
    if not _precondition(rep, M.module.relations.shape[1] == 0, "the oracle runs on free coefficients"):
        return rep
    degs = c.degrees((0, 1, 2, 3))
    P = periodic_complex(M, max(degs) + 1)
    for n in degs:
        per = homology(P, n).module.moduli
        if n == 0:
            bar = homology(bar_complex(M, 1, c.budget), 0).module.moduli
        else:
            factors, free = bar_homology_type(M, n)
            bar = list(factors) + [0] * free
        rep.record(f"H_{n}", list(bar) == list(per), f"bar {bar}, periodic {per}")
        rep.values[f"H_{n}"] = per
    return rep.finish()


def _h1_abelianization(c: _Ctx) -> CheckReport:
    G, rep = c.group(), CheckReport("pending")
    f = comparison_with_abelianization(G, c.ring, c.budget)
    rep.record("H_1 -> G^ab is an isomorphism", is_isomorphism(f),
               f"{f.domain.describe()} -> {f.codomain.describe()}")
    rep.values["H_1"] = f.domain.moduli
    if "expect" in c.p:
        rep.record(f"H_1 = {c.p['expect']}", list(f.domain.moduli) == list(c.p["expect"]))
    return rep.finish()


HANDLERS: dict[str, Callable[[_Ctx], CheckReport]] = {
    "lemma_1_1": _lemma_1_1, "cor_1_2": _cor_1_2, "lemma_1_3": _lemma_1_3,
    "example_1": _example_1, "theorem_1_4": _theorem_1_4, "cor_1_5_finite": _cor_1_5_finite,
    "uct": _uct, "e2_vanishing": _e2_vanishing, "inner_action": _inner_action,
    "gamma_exact": _gamma_exact, "delta_split": _delta_split,
    "unit_power_trivial": _unit_power_trivial, "oracle_cyclic": _oracle_cyclic,
    "h1_abelianization": _h1_abelianization,
}


# ---------------------------------------------------------------- running


def run(sc: Scenario) -> Report:
    """Run one scenario.  Malformed parameters raise :class:`ScenarioError`."""
    t0 = time.perf_counter()
    try:
        rep = HANDLERS[sc.claim](_Ctx(sc))
    except ScenarioError as exc:
        raise ScenarioError(f"{sc.id}: {exc.where}", exc.message) from None
    except PreconditionFailure as exc:
        rep = CheckReport("precondition_failure", details={"precondition": str(exc)})
    except BudgetExceeded as exc:
        rep = CheckReport("skipped_budget", details={"budget": str(exc)})
    status = rep.status
    checks, details = dict(rep.checks), dict(rep.details)
    if sc.expect_precondition_failure:
        seen = status == "precondition_failure"
        checks = {"precondition failure as expected": seen}
        status = "pass" if seen else "fail"
        if not seen:
            details["expected"] = "a precondition failure"
    return Report(sc.id, sc.claim, status, _plain(rep.values), checks, details,
                  time.perf_counter() - t0)


def run_many(scenarios: list[Scenario], jobs: int = 1) -> list[Report]:
    """Run scenarios (in threads when ``jobs > 1``); reports come back sorted by id."""
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            reports = list(ex.map(run, scenarios))
    else:
        reports = [run(s) for s in scenarios]
    return sorted(reports, key=lambda r: r.id)


def run_suite(source: str, jobs: int = 1) -> list[Report]:
    """``source`` is a built-in suite name or a path to a scenario file."""
    return run_many(resolve_suite(source), jobs)


def resolve_suite(source: str) -> list[Scenario]:
    if source in SUITES:
        return SUITES[source]()
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(source, f"not a built-in suite ({', '.join(SUITES)}) and unreadable: "
                                    f"{exc.strerror}") from None
    return load_scenarios(text, source)


# ---------------------------------------------------------------- enumeration


def _abelian(max_order: int):
    for G, factors in gr.enumerate_abelian_groups(max_order):
        yield G, factors, ("1" if not factors else "x".join(map(str, factors)))


def _gspec(factors) -> dict:
    return {"cyclic": 1} if not factors else {"product": list(factors)}


def _prime_power(n: int) -> int | None:
    """``p`` when ``n`` is a power of the prime ``p``."""
    ps = prime_factors(n)
    return ps[0] if len(ps) == 1 else None


def enumerate_scenarios(claim: str, max_order: int = 8, seeds: int = 3, seed0: int = 0,
                        family: str = "order") -> list[Scenario]:
    """Scenarios for ``claim`` over the abelian groups of order <= ``max_order``.

    ``family`` picks the ring: ``"order"`` uses ``Z[1/|G|]``; ``"l_torsion"``
    restricts to groups of prime power order ``p^k`` over ``Z[1/p]``.
    """
    if claim not in CLAIMS:
        raise ScenarioError("claim", f"unknown claim {claim!r}")
    out: list[Scenario] = []
    rnd = {"random": {"max_rank": 3}}

    def add(sid, params, seed=0, epf=False):
        out.append(Scenario(sid, claim, params, seed, epf))

    if claim in ("lemma_1_1", "cor_1_2", "lemma_1_3"):
        for G, f, name in _abelian(max_order):
            l = G.order
            if family == "l_torsion":
                l = _prime_power(G.order)
                if l is None:
                    continue
            for s in range(seed0, seed0 + seeds):
                p = {"ring": ring_json(RingSpec(l)), "group": _gspec(f), "module": rnd}
                if claim == "lemma_1_3":
                    p["N"] = _coprime_N(G.order, s)
                add(f"{claim}/{family}/{name}/s{s}", p, s)
    elif claim in ("theorem_1_4", "e2_vanishing", "cor_1_5_finite"):
        for G, f, name in _abelian(max_order):
            for B in gr.all_subgroups(G):
                Q, _ = gr.quotient(G, B)
                l = gr.exponent(Q)
                gens = _subgroup_gens(G, B)
                for s in range(seed0, seed0 + seeds):
                    p = {"ring": ring_json(RingSpec(l)), "group": _gspec(f),
                         "subgroup": {"generators": gens}, "module": rnd}
                    add(f"{claim}/{name}/B{'-'.join(map(str, gens)) or 'e'}/s{s}", p, s)
    elif claim == "uct":
        for G, f, name in _abelian(max_order):
            for m in (2, 3, 0):
                add(f"uct/{name}/M{m}", {"group": _gspec(f),
                                         "module": {"ambient_rank": 1, "relations": [[m]] if m else []}})
    elif claim == "inner_action":
        # random coefficients only where the bar complex of a rank 3 module stays small
        for name, spec in _suite_groups(max_order):
            add(f"inner_action/{name}/trivial", {"group": spec, "degrees": [0, 1, 2]})
            if parse_group_spec(spec)[0].order <= 12:
                for s in range(seed0, seed0 + seeds):
                    add(f"inner_action/{name}/s{s}", {"group": spec, "module": rnd, "degrees": [0, 1, 2]}, s)
    elif claim == "h1_abelianization":
        for name, spec in _suite_groups(max_order):
            add(f"h1_abelianization/{name}", {"group": spec})
    elif claim == "oracle_cyclic":
        for m in range(1, max_order + 1):
            for l in (1, 2, 6):
                mods = ["trivial"] + (["negation"] if m % 2 == 0 else [])
                for mod in mods:
                    add(f"oracle_cyclic/{m:02d}/{mod}/Z1_{l}",
                        {"m": m, "ring": ring_json(RingSpec(l)), "module": mod, "degrees": [0, 1, 2, 3]})
    elif claim == "example_1":
        add("example_1/Z", {"ring": {"kind": "Z"}})
        add("example_1/Z1_2", {"ring": {"kind": "Z[1/l]", "l": 2}})
    elif claim == "gamma_exact":
        for (n, m), mu in {(2, 2): 1, (2, 3): 2, (2, 5): 2}.items():
            add(f"gamma_exact/n{n}/m{m}", {"n": n, "m": m, "mu": mu})
    elif claim == "delta_split":
        for n, m in ((1, 5), (1, 7), (2, 2)):
            add(f"delta_split/n{n}/m{m}", {"n": n, "m": m})
    elif claim == "unit_power_trivial":
        for m, a in ((3, 2), (8, 3)):
            add(f"unit_power_trivial/SL2/m{m}/a{a}",
                {"group": {"matrix_group": {"kind": "SL", "n": 2, "m": m}}, "a": a, "q": 1})
    return out


def _coprime_N(order: int, seed: int) -> list[int]:
    rng = np.random.default_rng(seed)
    cands = [m for m in (2, 3, 4, 5, 7, 9, 25) if np.gcd(m, order) == 1] + [0]
    return sorted(int(x) for x in rng.choice(cands, size=int(rng.integers(1, 3))))


def _subgroup_gens(G, B) -> list[int]:
    gens: list[int] = []
    for b in B.elements:
        if b not in gr.subgroup_generated(G, gens).elements:
            gens.append(int(b))
    return gens


def _suite_groups(max_order: int):
    """The non-abelian and abelian groups of the standard suite."""
    specs = [
        ("C6", {"cyclic": 6}), ("C2xC2", {"product": [2, 2]}), ("C2xC4", {"product": [2, 4]}),
        ("S3", {"symmetric": 3}), ("D4", {"dihedral": 4}), ("D5", {"dihedral": 5}),
        ("D6", {"dihedral": 6}), ("SL2(2)", {"matrix_group": {"kind": "SL", "n": 2, "m": 2}}),
        ("SL2(3)", {"matrix_group": {"kind": "SL", "n": 2, "m": 3}}),
        ("S4", {"symmetric": 4}), ("GL2(3)", {"matrix_group": {"kind": "GL", "n": 2, "m": 3}}),
    ]
    for name, spec in specs:
        if parse_group_spec(spec)[0].order <= max_order:
            yield name, spec


# ---------------------------------------------------------------- built-in suites


def _default_suite() -> list[Scenario]:
    """Small instances of every claim, including expected failures of the
    hypotheses: Z/2 acting by -1 over Z, and a quotient whose exponent
    is not inverted."""
    s: list[Scenario] = []
    s += enumerate_scenarios("example_1")
    s += enumerate_scenarios("lemma_1_1", 6, 1)
    s += enumerate_scenarios("lemma_1_1", 8, 1, family="l_torsion")
    s += enumerate_scenarios("cor_1_2", 4, 1)
    s += enumerate_scenarios("lemma_1_3", 6, 1)
    s.append(Scenario("lemma_1_3/Z/negation", "lemma_1_3",
                      {"ring": {"kind": "Z"}, "group": {"cyclic": 2}, "module": "negation", "N": [2]},
                      0, True))
    s += enumerate_scenarios("theorem_1_4", 6, 1)
    s.append(Scenario("theorem_1_4/Z4/e/Z", "theorem_1_4",
                      {"ring": {"kind": "Z"}, "group": {"cyclic": 4}, "subgroup": {"generators": []},
                       "module": "negation"}, 0, True))
    s += [x for x in enumerate_scenarios("cor_1_5_finite", 8, 1) if "B" in x.id]
    s += enumerate_scenarios("uct", 4)
    s += enumerate_scenarios("e2_vanishing", 4, 1)
    s += enumerate_scenarios("inner_action", 8)
    s += enumerate_scenarios("h1_abelianization", 48)
    s.append(Scenario("h1_abelianization/SL2(3)/expect", "h1_abelianization",
                      {"group": {"matrix_group": {"kind": "SL", "n": 2, "m": 3}}, "expect": [3]}))
    s += enumerate_scenarios("oracle_cyclic", 6)
    s += enumerate_scenarios("gamma_exact")
    s += enumerate_scenarios("delta_split")
    s += enumerate_scenarios("unit_power_trivial")
    return s


SUITES: dict[str, Callable[[], list[Scenario]]] = {"default": _default_suite}
