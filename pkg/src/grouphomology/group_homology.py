"""Group homology and cohomology of finite groups, induced maps, and the
checks built on them: vanishing, the universal coefficient splitting, the
first page of the Lyndon-Hochschild-Serre spectral sequence, and the
comparison of coefficients along a subgroup with an l-torsion quotient."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .complexes import (
    ChainComplex,
    ComplexError,
    HomologySummary,
    bar_chain_map,
    bar_complex,
    cobar_complex,
    coefficient_chain_map,
    induced_on_homology,
    product_complex,
)
from .gmodules import (
    GModule,
    GModuleMap,
    coinvariant_gmodule,
    coinvariants,
    invariant_gmodule,
    restrict,
)
from .groups import (
    GroupHom,
    GroupTable,
    Subgroup,
    abelianization_relations,
    conjugation,
    exponent,
    quotient,
    same_table,
    whole_group,
)
from .linalg import DEFAULT_BUDGET_CELLS, BudgetExceeded, as_mat, identity, mul
from .modules import (
    ModuleMap,
    PresentedModule,
    Subquotient,
    direct_sum,
    is_isomorphism,
    tensor,
    tor,
)
from .ring import RingSpec

HOMOLOGY = "homology"
COHOMOLOGY = "cohomology"
METHODS = ("auto", "bar", "product", "abelianization")

_lock = threading.Lock()


class PreconditionFailure(ValueError):
    """The hypotheses of a check do not hold for the given input."""


@dataclass(frozen=True)
class HomologyRequest:
    group: GroupTable
    module: GModule
    degree: int
    variance: str = HOMOLOGY

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.variance not in (HOMOLOGY, COHOMOLOGY):
            raise ValueError(f"unknown variance {self.variance!r}")


@dataclass(frozen=True)
class E2Entry:
    p: int
    q: int
    module: PresentedModule


# ---------------------------------------------------------------- computing H_n


def _is_trivial_free_rank1(M: GModule) -> bool:
    return M.rank == 1 and M.module.relations.shape[1] == 0 and M.is_trivial_exact


def _bar_cells(G: GroupTable, r: int, n: int) -> int:
    q = G.order - 1
    return (q ** n * r) * (q ** (n + 1) * r)


def choose_method(M: GModule, n: int, variance: str = HOMOLOGY, budget=DEFAULT_BUDGET_CELLS) -> str:
    G = M.group
    if G.is_abelian:
        return "product"
    if (variance == HOMOLOGY and n == 1 and _is_trivial_free_rank1(M)
            and budget is not None and _bar_cells(G, 1, 1) > budget):
        return "abelianization"
    return "bar"


def _complex(M: GModule, top: int, variance: str, method: str, budget) -> ChainComplex:
    key = ("complex", top, variance, method)
    with _lock:
        hit = M._cache.get(key)
    if hit is not None:
        return hit
    cochain = variance == COHOMOLOGY
    if method == "product":
        C = product_complex(M, top, cochain=cochain)
    elif cochain:
        C = cobar_complex(M, top, budget)
    else:
        C = bar_complex(M, top, budget)
    with _lock:
        return M._cache.setdefault(key, C)


class AbelianizationSummary(Subquotient):
    """``H_1(G, R)`` presented as ``R^G`` modulo ``e_g + e_s - e_{gs}``."""

    def __init__(self, G: GroupTable, ring: RingSpec):
        rel = abelianization_relations(G)
        super().__init__(identity(G.order), rel, ring, G.order, exponent=G.order)
        self.degree = 1
        self.complex = None


def _summary(G: GroupTable, M: GModule, n: int, variance: str, method: str, budget):
    if M.group is not G and not same_table(M.group, G):
        raise ValueError("module is over a different group")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = choose_method(M, n, variance, budget)
    if method == "product" and not G.is_abelian:
        raise ValueError("the product resolution needs an abelian group")
    if method == "abelianization" and not (variance == HOMOLOGY and n == 1 and _is_trivial_free_rank1(M)):
        raise ValueError("the abelianization shortcut computes H_1 with trivial R coefficients only")
    key = ("summary", n, variance, method)
    with _lock:
        hit = M._cache.get(key)
    if hit is not None:
        return hit, method
    if method == "abelianization":
        S = AbelianizationSummary(G, M.ring)
    else:
        C = _complex(M, n + 1, variance, method, budget)
        S = HomologySummary(C, n, exponent=G.order if n >= 1 else None)
    S.method = method
    with _lock:
        return M._cache.setdefault(key, S), method


def h(G: GroupTable, M: GModule, n: int, method: str = "auto",
      budget: int | None = DEFAULT_BUDGET_CELLS) -> HomologySummary:
    """``H_n(G, M)`` with explicit cycle representatives."""
    return _summary(G, M, n, HOMOLOGY, method, budget)[0]


def hc(G: GroupTable, M: GModule, n: int, method: str = "auto",
       budget: int | None = DEFAULT_BUDGET_CELLS) -> HomologySummary:
    """``H^n(G, M)`` with explicit cocycle representatives."""
    return _summary(G, M, n, COHOMOLOGY, method, budget)[0]


def compute(req: HomologyRequest, method: str = "auto", budget=DEFAULT_BUDGET_CELLS) -> HomologySummary:
    return _summary(req.group, req.module, req.degree, req.variance, method, budget)[0]


# ---------------------------------------------------------------- induced maps


def induced(f: GModuleMap, n: int, variance: str = HOMOLOGY, method: str = "auto",
            budget: int | None = DEFAULT_BUDGET_CELLS) -> ModuleMap:
    """The map on ``H_n`` (or ``H^n``) induced by an equivariant map.

    Homology is covariant in the pair (group, module): ``f.along`` goes from
    the source group to the target group.  Cohomology is contravariant in
    the group: ``f.along`` goes from the target group to the source group.
    """
    phi = f.along
    if (variance == COHOMOLOGY) != f.contravariant:
        raise ValueError("cohomology needs a contravariant map and homology a covariant one")
    S, T = f.source, f.target
    id_like = phi.is_identity and same_table(phi.domain, phi.codomain)
    if method == "auto":
        ms = choose_method(S, n, variance, budget)
        mt = choose_method(T, n, variance, budget)
        if ms == mt == "product" and id_like:
            method = "product"
        elif ms == mt == "abelianization" or (
                "abelianization" in (ms, mt) and variance == HOMOLOGY and n == 1
                and _is_trivial_free_rank1(S) and _is_trivial_free_rank1(T)):
            method = "abelianization"
        else:
            method = "bar"
    if method == "product" and not id_like:
        raise ValueError("the product resolution only supports maps over the identity")
    src, _ = _summary(S.group, S, n, variance, method, budget)
    tgt, _ = _summary(T.group, T, n, variance, method, budget)
    F = as_mat(f.matrix)
    if method == "abelianization":
        c = int(F[0, 0])
        P = np.zeros((T.group.order, S.group.order), dtype=np.int64)
        P[np.asarray(phi.image), np.arange(S.group.order)] = c
        return ModuleMap(src.module, tgt.module, tgt.project(mul(P, src.lift)))
    Cs, Ct = src.complex, tgt.complex
    if method == "product":
        blocks = list(Cs.blocks)
        degrees = [k for k in (n - 1, n, n + 1) if 0 <= k <= Cs.top]
        cm = coefficient_chain_map(F, Cs, Ct, blocks, degrees)
    else:
        near = (n - 1, n) if variance == HOMOLOGY else (n, n + 1)
        degrees = [k for k in near if 0 <= k <= Cs.top
                   and (budget is None or Cs.ranks[k] * Ct.ranks[k] <= budget)]
        if n not in degrees:
            degrees.append(n)
        cm = bar_chain_map(phi, F, Cs, Ct, degrees)
    return induced_on_homology(cm, n, src, tgt)


def conjugation_pair_action(G: GroupTable, g0: int, M: GModule, n: int, method: str = "auto",
                            budget: int | None = DEFAULT_BUDGET_CELLS) -> ModuleMap:
    """The action of ``(c_{g0}, g0·)`` on ``H_n(G, M)``; always the identity."""
    phi = conjugation(G, g0)
    f = GModuleMap(M, M, M.action[g0], along=phi)
    if G.is_abelian and method == "auto":
        method = "product"
    return induced(f, n, HOMOLOGY, method, budget)


def comparison_with_abelianization(G: GroupTable, ring: RingSpec | None = None,
                                   budget: int | None = DEFAULT_BUDGET_CELLS) -> ModuleMap:
    """The natural map from ``H_1`` of the bar complex (trivial ``R``
    coefficients) to ``R ⊗ G^ab``: the class of ``[g]`` goes to ``g``."""
    from .gmodules import trivial_gmodule
    from .ring import ZZ

    M = trivial_gmodule(G, ring or ZZ)
    H = h(G, M, 1, method="bar", budget=budget)
    A = AbelianizationSummary(G, M.ring)
    E = np.zeros((G.order, G.order - 1), dtype=np.int64)
    E[np.arange(1, G.order), np.arange(G.order - 1)] = 1
    return ModuleMap(H.module, A.module, A.project(mul(E, H.lift)))


# ---------------------------------------------------------------- subgroups and quotients


def _as_quotient_gmodule(Q: GroupTable, proj: GroupHom, module: PresentedModule, act_of) -> GModule:
    reps = {}
    for a in range(proj.domain.order):
        reps.setdefault(proj(a), a)
    acts = [act_of(reps[x]) for x in range(Q.order)]
    return GModule(Q, module, acts)


def coefficient_module_on_homology(A: GroupTable, B: Subgroup, M: GModule, q: int,
                                   budget: int | None = DEFAULT_BUDGET_CELLS):
    """``H_q(B, M)`` as a module over ``A/B`` (``A`` abelian).

    Returns ``(GModule over A/B, projection A -> A/B)``.  ``a`` acts through
    the map induced by ``(id_B, a·)``; elements of ``B`` act trivially, which
    the module validation confirms.
    """
    if not A.is_abelian:
        raise PreconditionFailure("the quotient action is only implemented for abelian groups")
    Q, proj = quotient(A, B)
    MB = restrict(M, B)
    H = h(MB.group, MB, q, budget=budget)

    def act(a):
        return induced(GModuleMap(MB, MB, M.action[a]), q, budget=budget).matrix

    return _as_quotient_gmodule(Q, proj, H.module, act), proj


def _coefficients(A, B, M: GModule, which: str) -> GModule:
    if which == "M":
        return M
    if which == "M_B":
        return coinvariant_gmodule(M, B)
    if which == "M_A":
        C, _ = coinvariants(M)
        return GModule(A, C, M.action, validate=False)
    raise ValueError(f"unknown coefficients {which!r}")


def lhs_e2(A: GroupTable, B: Subgroup, M: GModule, p: int, q: int, coefficients: str = "M_B",
           budget: int | None = DEFAULT_BUDGET_CELLS) -> E2Entry:
    """``E^2_{p,q} = H_p(A/B, H_q(B, M'))`` with ``M'`` one of ``M``, ``M_B``, ``M_A``."""
    Mp = _coefficients(A, B, M, coefficients)
    X, _ = coefficient_module_on_homology(A, B, Mp, q, budget)
    return E2Entry(p, q, h(X.group, X, p, budget=budget).module)


def uct_check(G: GroupTable, M: PresentedModule, n: int, budget: int | None = DEFAULT_BUDGET_CELLS) -> dict:
    """Compare ``H_n(G, M)`` with ``H_n(G, R) ⊗ M ⊕ Tor_1(H_{n-1}(G, R), M)``
    (trivial coefficients) by invariant factors."""
    from .gmodules import trivial_gmodule

    R = trivial_gmodule(G, M.ring)
    lhs = h(G, GModule.trivial(G, M), n, budget=budget).module
    hn = h(G, R, n, budget=budget).module
    rhs = tensor(hn, M)
    if n >= 1:
        rhs = direct_sum(rhs, tor(1, h(G, R, n - 1, budget=budget).module, M))
    ok = lhs.iso_type() == rhs.iso_type()
    return {"status": "pass" if ok else "fail", "lhs": lhs.describe(), "rhs": rhs.describe()}


# ---------------------------------------------------------------- end-to-end checks


@dataclass
class CheckReport:
    """Outcome of a composite check: ``pass``, ``fail`` or ``precondition_failure``."""

    status: str
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def record(self, name: str, ok: bool, detail: str = ""):
        self.checks[name] = bool(ok)
        if detail:
            self.details[name] = detail

    def finish(self) -> "CheckReport":
        if self.status != "precondition_failure":
            self.status = "pass" if all(self.checks.values()) else "fail"
        return self


def _inverts_exponent(G: GroupTable, ring: RingSpec) -> bool:
    return ring.inverts(exponent(G))


def verify_vanishing(G: GroupTable, M: GModule, degrees=(1, 2, 3),
                     budget: int | None = DEFAULT_BUDGET_CELLS) -> CheckReport:
    """``H_n(G, M) = H^n(G, M) = 0`` when every prime dividing ``|G|`` is a unit."""
    rep = CheckReport("pending")
    if not M.ring.inverts(G.order):
        rep.status = "precondition_failure"
        rep.details["precondition"] = f"|G| = {G.order} is not invertible in {M.ring}"
        return rep
    for n in degrees:
        a = h(G, M, n, budget=budget).module
        b = hc(G, M, n, budget=budget).module
        rep.record(f"H_{n}", a.is_zero, a.describe())
        rep.record(f"H^{n}", b.is_zero, b.describe())
    return rep.finish()


def verify_theorem_ab(A: GroupTable, B: Subgroup, M: GModule, n: int,
                      budget: int | None = DEFAULT_BUDGET_CELLS, e2_degrees=(1, 2)) -> CheckReport:
    """Certify that ``M_B -> M_A`` and ``M^A -> M^B`` induce isomorphisms on
    ``H_n(A, -)`` and ``H^n(A, -)`` when ``A/B`` is l-torsion and l is
    invertible, together with the intermediate isomorphism
    ``H_n(B, M_B)_A -> H_n(B, M_A)`` and vanishing of ``E^2_{p,q}`` for
    ``p`` in ``e2_degrees`` and ``q <= n``."""
    rep = CheckReport("pending")
    problems = []
    if not A.is_abelian:
        problems.append("A is not abelian")
    if B.parent is not A and not same_table(B.parent, A):
        problems.append("B is not a subgroup of A")
    if M.group is not A and not same_table(M.group, A):
        problems.append("M is not an A-module")
    if not problems:
        Q, _ = quotient(A, B)
        if not _inverts_exponent(Q, M.ring):
            problems.append(f"exponent {exponent(Q)} of A/B is not invertible in {M.ring}")
    if problems:
        rep.status = "precondition_failure"
        rep.details["precondition"] = "; ".join(problems)
        return rep

    MB = coinvariant_gmodule(M, B)
    MA = _coefficients(A, B, M, "M_A")
    eye = identity(M.rank)
    f = GModuleMap(MB, MA, eye)
    hom = induced(f, n, HOMOLOGY, budget=budget)
    rep.record("homology", is_isomorphism(hom),
               f"{hom.domain.describe()} -> {hom.codomain.describe()}")
    rep.values["homology"] = [hom.domain.moduli, hom.codomain.moduli]

    IA, sqA = invariant_gmodule(M, whole_group(A))
    IB, sqB = invariant_gmodule(M, B)
    g = GModuleMap(IA, IB, sqB.project(sqA.lift), along=GroupHom.identity(A), contravariant=True)
    coh = induced(g, n, COHOMOLOGY, budget=budget)
    rep.record("cohomology", is_isomorphism(coh),
               f"{coh.domain.describe()} -> {coh.codomain.describe()}")
    rep.values["cohomology"] = [coh.domain.moduli, coh.codomain.moduli]

    X, _ = coefficient_module_on_homology(A, B, MB, n, budget)
    Xc, _ = coinvariants(X)
    MB_B, MA_B = restrict(MB, B), restrict(MA, B)
    onB = induced(GModuleMap(MB_B, MA_B, eye), n, HOMOLOGY, budget=budget)
    bma = ModuleMap(Xc, onB.codomain, onB.matrix)
    rep.record("b-m-a", is_isomorphism(bma), f"{Xc.describe()} -> {onB.codomain.describe()}")
    rep.values["b-m-a"] = [Xc.moduli, onB.codomain.moduli]

    for which in ("M_B", "M_A"):
        for p in e2_degrees:
            for q in range(n + 1):
                E = lhs_e2(A, B, M, p, q, which, budget)
                rep.record(f"E2[{which}]_{p},{q}", E.module.is_zero, E.module.describe())
                rep.values[f"E2[{which}]_{p},{q}"] = E.module.moduli
    return rep.finish()
