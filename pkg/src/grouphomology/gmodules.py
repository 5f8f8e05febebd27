"""Modules over finite groups: invariants, coinvariants, the maps between
them, restriction, and Tor/Ext with their induced group actions."""

from __future__ import annotations

from collections import deque

import numpy as np

from .groups import GroupTable, Subgroup, whole_group
from .linalg import as_mat, hstack, identity, mul, sub, zeros
from .modules import (
    DerivedValue,
    ModuleMap,
    PresentedModule,
    Subquotient,
    derived,
)
from .ring import ZZ, RingSpec


class ActionError(ValueError):
    """Matrices do not define a group action on the module."""


def _subgroup_gens(M_group: GroupTable, B: Subgroup | None) -> list[int]:
    if B is None:
        return list(M_group.generators)
    return [B.elements[i] for i in B.as_group().generators]


class GModule:
    """A presented R-module with a validated action of a finite group.

    ``action[g]`` acts on ambient coordinates; identities between actions
    hold modulo the module relations.
    """

    def __init__(self, group: GroupTable, module: PresentedModule, action, validate: bool = True,
                 _checked_gens=None):
        self.group = group
        self.module = module
        r = module.ambient_rank
        acts = [as_mat(a, rows=r, cols=r) for a in action]
        if len(acts) != group.order:
            raise ActionError(f"need {group.order} action matrices, got {len(acts)}")
        for a in acts:
            if a.shape != (r, r):
                raise ActionError(f"action matrix of shape {a.shape} on a rank {r} module")
        self.action = tuple(acts)
        self._cache: dict = {}
        if validate:
            self._validate(_checked_gens or group.generators)

    def _validate(self, gens):
        M, G, r = self.module, self.group, self.module.ambient_rank
        if r == 0:
            return
        if not self.is_trivial_exact:
            blocks = [sub(self.action[0], identity(r))]
            blocks += [mul(a, M.relations) for a in self.action]
            if not M.lattice.contains(hstack(blocks, r)):
                raise ActionError("identity does not act as the identity, or relations not preserved")
            diffs = [
                sub(self.action[G.mul(g, s)], mul(self.action[g], self.action[s]))
                for g in range(G.order)
                for s in gens
            ]
            if not M.lattice.contains(hstack(diffs, r)):
                raise ActionError("matrices are not multiplicative")

    @property
    def is_trivial_exact(self) -> bool:
        r = self.module.ambient_rank
        eye = identity(r)
        return all((a == eye).all() for a in self.action)

    @property
    def ring(self) -> RingSpec:
        return self.module.ring

    @property
    def rank(self) -> int:
        return self.module.ambient_rank

    def is_trivial(self) -> bool:
        r = self.rank
        return self.module.lattice.contains(hstack([sub(a, identity(r)) for a in self.action], r))

    # -- constructors
    @classmethod
    def trivial(cls, group: GroupTable, module: PresentedModule) -> "GModule":
        eye = identity(module.ambient_rank)
        return cls(group, module, [eye] * group.order, validate=False)

    @classmethod
    def from_generators(cls, group: GroupTable, module: PresentedModule, gen_actions: dict) -> "GModule":
        """Extend matrices given on generating elements to the whole group."""
        r = module.ambient_rank
        gens = {int(k): as_mat(v, rows=r, cols=r) for k, v in gen_actions.items()}
        gens.pop(0, None)
        acts: list = [None] * group.order
        acts[0] = identity(r)
        queue = deque([0])
        while queue:
            g = queue.popleft()
            for s, A in gens.items():
                h = group.mul(g, s)
                if acts[h] is None:
                    acts[h] = mul(acts[g], A)
                    queue.append(h)
        if any(a is None for a in acts):
            raise ActionError("the given elements do not generate the group")
        return cls(group, module, acts, _checked_gens=tuple(gens) or group.generators)

    def with_module(self, module: PresentedModule) -> "GModule":
        """Same action on a quotient with the same ambient coordinates."""
        return GModule(self.group, module, self.action)

    def __repr__(self):
        return f"GModule(|G|={self.group.order}, {self.module.describe()} over {self.ring})"


class EquivarianceError(ValueError):
    """A coefficient map does not intertwine the two actions."""


class GModuleMap:
    """A module map between G-modules, possibly over different groups.

    ``along`` is the group homomorphism the map is equivariant across:
    covariant (``source.group -> target.group``, ``f(g·m) = φ(g)·f(m)``) or
    contravariant (``target.group -> source.group``, ``f(φ(h)·m) = h·f(m)``).
    """

    def __init__(self, source: GModule, target: GModule, matrix, along=None,
                 contravariant: bool = False, validate: bool = True):
        from .groups import GroupHom, same_table

        self.source, self.target = source, target
        self.map = ModuleMap(source.module, target.module, matrix)
        if along is None:
            if not same_table(source.group, target.group):
                raise EquivarianceError("groups differ; pass the homomorphism explicitly")
            along = GroupHom.identity(source.group)
        self.along = along
        self.contravariant = contravariant
        if validate:
            self._check()

    @property
    def matrix(self) -> np.ndarray:
        return self.map.matrix

    def _check(self):
        F, phi = self.matrix, self.along
        r = self.target.rank
        if self.contravariant:
            diffs = [sub(mul(F, self.source.action[phi(h)]), mul(self.target.action[h], F))
                     for h in phi.domain.generators]
        else:
            diffs = [sub(mul(F, self.source.action[g]), mul(self.target.action[phi(g)], F))
                     for g in phi.domain.generators]
        if diffs and not self.target.module.lattice.contains(hstack(diffs, r)):
            raise EquivarianceError("coefficient map is not equivariant")


def trivial_gmodule(G: GroupTable, ring: RingSpec = ZZ, rank: int = 1) -> GModule:
    return GModule.trivial(G, PresentedModule.free(ring, rank))


def sign_gmodule(G: GroupTable, signs, ring: RingSpec = ZZ) -> GModule:
    """``R`` with ``g`` acting by ``signs[g]`` (a character G -> {±1})."""
    return GModule(G, PresentedModule.free(ring, 1), [[[int(s)]] for s in signs])


def negation_gmodule(m: int, ring: RingSpec = ZZ, G: GroupTable | None = None) -> GModule:
    """``R`` with the generator of ``Z/m`` acting by -1 (m even)."""
    from .groups import cyclic

    G = G or cyclic(m)
    return GModule.from_generators(G, PresentedModule.free(ring, 1), {1: [[-1]]})


# ---------------------------------------------------------------- (co)invariants


def coinvariants(M: GModule, subgroup: Subgroup | None = None):
    """``(M_H, projection M -> M_H)`` for ``H`` the subgroup (default: all of G)."""
    r = M.rank
    gens = _subgroup_gens(M.group, subgroup)
    rel = hstack([M.module.relations] + [sub(M.action[g], identity(r)) for g in gens], r)
    C = PresentedModule(M.ring, rel, r)
    return C, ModuleMap(M.module, C, identity(r))


def invariants_subquotient(M: GModule, subgroup: Subgroup | None = None) -> Subquotient:
    """``M^H`` as a subquotient of the ambient coordinates of ``M``."""
    from .linalg import preimage, block_diag

    r = M.rank
    gens = _subgroup_gens(M.group, subgroup)
    if not gens or r == 0:
        return Subquotient(identity(r), M.module.relations, M.ring, r)
    stacked = np.vstack([sub(M.action[g], identity(r)) for g in gens]) if gens else zeros(0, r)
    target = block_diag([M.module.relations] * len(gens))
    cyc = preimage(as_mat(stacked), target, M.ring)
    return Subquotient(hstack([cyc, M.module.relations], r), M.module.relations, M.ring, r)


def invariants(M: GModule, subgroup: Subgroup | None = None):
    """``(M^H, inclusion M^H -> M)``."""
    sq = invariants_subquotient(M, subgroup)
    return sq.module, ModuleMap(sq.module, M.module, sq.lift)


def coinvariant_gmodule(M: GModule, B: Subgroup) -> GModule:
    """``M_B`` with its residual action of the ambient group (``B`` normal)."""
    C, _ = coinvariants(M, B)
    return GModule(M.group, C, M.action, validate=False)


def invariant_gmodule(M: GModule, B: Subgroup) -> tuple[GModule, Subquotient]:
    """``M^B`` with its residual action of the ambient group (``B`` normal)."""
    sq = invariants_subquotient(M, B)
    acts = [sq.project(mul(a, sq.lift)) for a in M.action]
    return GModule(M.group, sq.module, acts), sq


def alpha(M: GModule) -> ModuleMap:
    """``M^G -> M_G``, an invariant element to its class."""
    sq = invariants_subquotient(M)
    C, _ = coinvariants(M)
    return ModuleMap(sq.module, C, sq.lift)


def norm_element(M: GModule) -> np.ndarray:
    r = M.rank
    N = zeros(r, r)
    for a in M.action:
        N = N + a if N.dtype == a.dtype == np.int64 else as_mat(N.astype(object) + a.astype(object))
    return N


def norm(M: GModule) -> ModuleMap:
    """``M_G -> M^G`` induced by ``sum_g g``."""
    sq = invariants_subquotient(M)
    C, _ = coinvariants(M)
    return ModuleMap(C, sq.module, sq.project(norm_element(M)))


def restrict(M: GModule, B: Subgroup) -> GModule:
    """``M`` as a module over ``B`` (as a group table in its own right)."""
    key = ("restrict", B.elements)
    hit = M._cache.get(key)
    if hit is None:
        T = B.as_group()
        hit = M._cache.setdefault(key, GModule(T, M.module, [M.action[e] for e in B.elements],
                                               validate=False))
    return hit


# ---------------------------------------------------------------- Tor and Ext


def _plain(N) -> PresentedModule:
    if isinstance(N, GModule):
        if not N.is_trivial():
            raise ActionError("N must carry the trivial group action")
        return N.module
    return N


def derived_gmodule(kind: str, n: int, N, M: GModule) -> tuple[GModule, DerivedValue]:
    """``Tor_n(N, M)`` / ``Ext^n(N, M)`` with the action induced from ``M``."""
    N = _plain(N)
    D = derived(kind, n, N, M.module)
    acts = [D.induced(D, a).matrix for a in M.action]
    return GModule(M.group, D.module, acts), D


def tor(n: int, N, M: GModule) -> GModule:
    return derived_gmodule("tor", n, N, M)[0]


def ext(n: int, N, M: GModule) -> GModule:
    return derived_gmodule("ext", n, N, M)[0]


def tor_coinvariants_comparison(n: int, N, M: GModule) -> ModuleMap:
    """The natural map ``Tor_n(N, M)_G -> Tor_n(N, M_G)``."""
    T, D = derived_gmodule("tor", n, N, M)
    MG, proj = coinvariants(M)
    D2 = derived("tor", n, _plain(N), MG)
    m = D.induced(D2, proj.matrix).matrix
    TG, _ = coinvariants(T)
    return ModuleMap(TG, D2.module, m)


def ext_invariants_comparison(n: int, N, M: GModule) -> ModuleMap:
    """The natural map ``Ext^n(N, M^G) -> Ext^n(N, M)^G``."""
    E, D = derived_gmodule("ext", n, N, M)
    inv_sq = invariants_subquotient(M)
    D1 = derived("ext", n, _plain(N), inv_sq.module)
    m = D1.induced(D, inv_sq.lift).matrix
    target = invariants_subquotient(E)
    return ModuleMap(D1.module, target.module, target.project(m))


# ---------------------------------------------------------------- random modules


def _finite_order_pool(r: int) -> list[np.ndarray]:
    """Integer matrices of finite order: signed permutations and, for rank
    at least 2, the order 3 and 6 rotations of the hexagonal lattice."""
    from itertools import permutations, product

    pool = []
    for perm in permutations(range(r)):
        for signs in product((1, -1), repeat=r):
            m = np.zeros((r, r), dtype=np.int64)
            for i, j in enumerate(perm):
                m[j, i] = signs[i]
            pool.append(m)
    if r >= 2:
        for rot in ([[0, -1], [1, -1]], [[0, -1], [1, 1]]):
            m = np.eye(r, dtype=np.int64)
            m[:2, :2] = rot
            pool.append(m)
    return pool


def _orders_ok(A: np.ndarray, order: int) -> bool:
    P = np.eye(A.shape[0], dtype=np.int64)
    for _ in range(order):
        P = P @ A
    return bool((P == np.eye(A.shape[0], dtype=np.int64)).all())


def random_gmodule(G: GroupTable, ring: RingSpec = ZZ, seed: int = 0, max_rank: int = 3,
                   tries: int = 200) -> GModule:
    """A reproducible random G-module of ambient rank <= ``max_rank``.

    The action is an exact integer representation found by random search in
    a pool of finite-order matrices (falling back to the trivial action);
    relations are the orbit of up to two random vectors with entries in
    [-4, 4], so they are stable under the action by construction.
    """
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, max_rank + 1))
    pool = _finite_order_pool(r)
    gens = list(G.generators)
    orders = [G.element_orders[s] for s in gens]
    cands = [[A for A in pool if _orders_ok(A, o)] for o in orders]
    acts = None
    for _ in range(tries):
        choice = {s: c[int(rng.integers(len(c)))] for s, c in zip(gens, cands)}
        acts = _extend_exact(G, choice, r)
        if acts is not None:
            break
    if acts is None:
        acts = [np.eye(r, dtype=np.int64)] * G.order
    nseeds = int(rng.integers(0, 3))
    seeds = [rng.integers(-4, 5, size=r) for _ in range(nseeds)]
    seeds = [v for v in seeds if v.any()]
    if seeds:
        orbit = {tuple(int(x) for x in a @ v) for v in seeds for a in acts}
        rel = np.array(sorted(orbit), dtype=np.int64).T
    else:
        rel = zeros(r, 0)
    module = PresentedModule(ring, rel, r)
    return GModule(G, module, acts)


def _extend_exact(G: GroupTable, gen_mats: dict, r: int):
    """Extend generator matrices to an exact homomorphism, or ``None``."""
    acts: list = [None] * G.order
    acts[0] = np.eye(r, dtype=np.int64)
    queue = deque([0])
    while queue:
        g = queue.popleft()
        for s, A in gen_mats.items():
            h = G.mul(g, s)
            prod_ = acts[g] @ A
            if acts[h] is None:
                acts[h] = prod_
                queue.append(h)
            elif not (acts[h] == prod_).all():
                return None
    return acts
