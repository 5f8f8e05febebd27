"""Chain and cochain complexes of presented modules, and the standard
complexes computing group (co)homology.

A complex carries, in every degree, a free ambient module together with a
relation matrix; its terms are the quotients.  Differentials and chain maps
are integer matrices on ambient coordinates that respect relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .gmodules import GModule
from .groups import GroupHom, GroupTable, abelian_decomposition
from .linalg import (
    DEFAULT_BUDGET_CELLS,
    Lattice,
    NotInLattice,
    as_mat,
    check_budget,
    hstack,
    identity,
    kron,
    local_divisor_counts,
    matrix_rank,
    mul,
    preimage,
    zeros,
)
from .modules import ModuleMap, Subquotient
from .ring import RingSpec


class ComplexError(ValueError):
    """Shapes or d∘d = 0 fail, or a chain map does not commute."""


@dataclass(eq=False)
class ChainComplex:
    """Terms ``R^{ranks[k]} / relations[k]`` for ``k = 0..top``.

    Chain complexes have ``d[k]: C_k -> C_{k-1}`` for ``1 <= k <= top``;
    cochain complexes have ``d[k]: C^k -> C^{k+1}`` for ``0 <= k < top``.
    """

    ring: RingSpec
    ranks: tuple
    d: dict
    relations: tuple
    cochain: bool = False
    validate: bool = True
    blocks: tuple | None = None  # copies of the coefficients per degree, if built from them

    def __post_init__(self):
        self.ranks = tuple(int(r) for r in self.ranks)
        self.relations = tuple(as_mat(r, rows=n) for r, n in zip(self.relations, self.ranks))
        if len(self.relations) != len(self.ranks):
            raise ComplexError("one relation matrix per degree is required")
        self.d = {k: as_mat(m) for k, m in self.d.items()}
        for k in self.degrees_with_differential():
            src, tgt = self._ends(k)
            if k not in self.d:
                raise ComplexError(f"missing differential in degree {k}")
            if self.d[k].shape != (self.ranks[tgt], self.ranks[src]):
                raise ComplexError(f"differential {k} has shape {self.d[k].shape}")
        if self.validate:
            self.check()

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def degrees_with_differential(self):
        return range(1, self.top + 1) if not self.cochain else range(0, self.top)

    def _ends(self, k):
        return (k, k - 1) if not self.cochain else (k, k + 1)

    def check(self):
        """Differentials respect relations and compose to zero modulo them."""
        for k in self.degrees_with_differential():
            src, tgt = self._ends(k)
            lat = Lattice(self.relations[tgt], self.ring, self.ranks[tgt])
            if not lat.contains(mul(self.d[k], self.relations[src])):
                raise ComplexError(f"differential {k} does not respect relations")
            nxt = k - 1 if not self.cochain else k + 1
            if nxt in self.d:
                if not lat_of(self, self._ends(nxt)[1]).contains(mul(self.d[nxt], self.d[k])):
                    raise ComplexError(f"d∘d != 0 at degree {k}")


def lat_of(C: ChainComplex, k: int) -> Lattice:
    return Lattice(C.relations[k], C.ring, C.ranks[k])


class HomologySummary(Subquotient):
    """A (co)homology group as a subquotient of the degree ``k`` term."""

    def __init__(self, complex_: ChainComplex, degree: int, exponent: int | None = None):
        C, n = complex_, degree
        if not 0 <= n <= C.top:
            raise ComplexError(f"degree {n} outside 0..{C.top}")
        r = C.ranks[n]
        if C.cochain:
            if n == C.top:
                raise ComplexError("cannot compute cohomology in the top degree")
            out, out_rel = C.d[n], C.relations[n + 1]
            inc = C.d.get(n - 1)
        else:
            if n == C.top:
                raise ComplexError("cannot compute homology in the top degree")
            out = C.d.get(n)
            out_rel = C.relations[n - 1] if n >= 1 else None
            inc = C.d[n + 1]
        cycles = identity(r) if out is None else preimage(out, out_rel, C.ring)
        bounds = C.relations[n] if inc is None else hstack([inc, C.relations[n]], r)
        if exponent:
            super().__init__(cycles, bounds, C.ring, r, exponent=exponent)
        else:
            super().__init__(hstack([cycles, bounds], r), bounds, C.ring, r)
        self.degree = n
        self.complex = C


def homology(C: ChainComplex, n: int, exponent: int | None = None) -> HomologySummary:
    """``H_n`` of a complex.  ``exponent``, if given, must annihilate the
    result; it allows the computation to run modulo that number."""
    return HomologySummary(C, n, exponent)


@dataclass(eq=False)
class ChainMap:
    """Degreewise matrices ``f[k]: C_k -> D_k`` (only some degrees need be given)."""

    source: ChainComplex
    target: ChainComplex
    f: dict
    validate: bool = True

    def __post_init__(self):
        S, T = self.source, self.target
        if S.cochain != T.cochain:
            raise ComplexError("cannot map a chain complex to a cochain complex")
        self.f = {k: as_mat(m, rows=T.ranks[k], cols=S.ranks[k]) for k, m in self.f.items()}
        for k, m in self.f.items():
            if m.shape != (T.ranks[k], S.ranks[k]):
                raise ComplexError(f"chain map degree {k} has shape {m.shape}")
        if self.validate:
            self.check()

    def check(self):
        S, T = self.source, self.target
        for k, m in self.f.items():
            if not lat_of(T, k).contains(mul(m, S.relations[k])):
                raise ComplexError(f"chain map degree {k} does not respect relations")
            j = k - 1 if not S.cochain else k + 1
            if j in self.f and k in S.d:
                diff = mul(T.d[k], m) - mul(self.f[j], S.d[k])
                if not lat_of(T, j).contains(as_mat(diff)):
                    raise ComplexError(f"chain map does not commute at degree {k}")


def induced_on_homology(f: ChainMap, n: int, source: HomologySummary | None = None,
                        target: HomologySummary | None = None) -> ModuleMap:
    source = source or HomologySummary(f.source, n)
    target = target or HomologySummary(f.target, n)
    try:
        m = target.project(mul(f.f[n], source.lift))
    except NotInLattice:
        raise ComplexError("chain map does not send cycles to cycles") from None
    return ModuleMap(source.module, target.module, m)


# ---------------------------------------------------------------- bar complexes


def _tuples(G: GroupTable, k: int) -> np.ndarray:
    """All k-tuples of non-identity elements in index order."""
    q = G.order - 1
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if q == 0:
        return np.zeros((0, k), dtype=np.int64)
    grids = np.indices((q,) * k).reshape(k, -1).T
    return grids.astype(np.int64) + 1


def tuple_index(T: np.ndarray, order: int) -> np.ndarray:
    """Mixed-radix index of tuples of non-identity elements (rows of ``T``)."""
    q = order - 1
    idx = np.zeros(T.shape[0], dtype=np.int64)
    for j in range(T.shape[1]):
        idx = idx * q + (T[:, j] - 1)
    return idx


def _action_stack(M: GModule) -> np.ndarray:
    acts = np.stack([np.asarray(a) for a in M.action]) if M.action else np.zeros((0, M.rank, M.rank))
    if acts.dtype != object and np.abs(acts).max(initial=0) < 2**40:
        return acts.astype(np.int64)
    return acts.astype(object)


def _scatter(D, rows, cols, blocks, r_out, r_in, sign=1):
    """Add ``sign * blocks[i]`` at block position ``(rows[i], cols[i])``."""
    if len(rows) == 0 or r_out == 0 or r_in == 0:
        return
    a = np.arange(r_out)
    b = np.arange(r_in)
    R = rows[:, None, None] * r_out + a[None, :, None]
    C = cols[:, None, None] * r_in + b[None, None, :]
    vals = np.broadcast_to(blocks, (len(rows), r_out, r_in))
    np.add.at(D, (R, C), sign * vals)


VALIDATE_CELLS = 200_000


def _small(ranks) -> bool:
    """Whether to re-check d∘d = 0 on construction (cheap enough)."""
    return all(a * b <= VALIDATE_CELLS for a, b in zip(ranks, ranks[1:]))


def _bar_size(G: GroupTable, k: int, r: int) -> int:
    return (G.order - 1) ** k * r


def bar_complex(M: GModule, top: int, budget: int | None = DEFAULT_BUDGET_CELLS) -> ChainComplex:
    """Normalized bar complex ``C_k = M ⊗ Z[(G-1)^k]`` computing ``H_*(G, M)``.

    ``d(m⊗[g1|..|gk]) = g1⁻¹m⊗[g2|..|gk] + Σ(-1)^i m⊗[..|g_i g_{i+1}|..]
    + (-1)^k m⊗[g1|..|g_{k-1}]`` (the left action turned into a right one
    by inverses); tuples containing the identity are zero.
    """
    G, r = M.group, M.rank
    ranks = [_bar_size(G, k, r) for k in range(top + 1)]
    for k in range(1, top + 1):
        check_budget(ranks[k - 1], ranks[k], budget)
    acts = _action_stack(M)
    eye = np.eye(r, dtype=acts.dtype)
    inv = G.inverse
    d = {}
    for k in range(1, top + 1):
        T = _tuples(G, k)
        src = np.arange(T.shape[0])
        D = np.zeros((ranks[k - 1], ranks[k]), dtype=acts.dtype)
        _scatter(D, tuple_index(T[:, 1:], G.order), src, acts[inv[T[:, 0]]], r, r)
        for i in range(1, k):
            merged = G.mult[T[:, i - 1], T[:, i]]
            keep = merged != 0
            U = np.concatenate([T[:, : i - 1], merged[:, None], T[:, i + 1:]], axis=1)[keep]
            _scatter(D, tuple_index(U, G.order), src[keep], eye, r, r, (-1) ** i)
        _scatter(D, tuple_index(T[:, : k - 1], G.order), src, eye, r, r, (-1) ** k)
        d[k] = D
    rels = [kron(identity((G.order - 1) ** k), M.module.relations) for k in range(top + 1)]
    return ChainComplex(M.ring, ranks, d, rels, cochain=False, validate=_small(ranks),
                        blocks=tuple((G.order - 1) ** k for k in range(top + 1)))


def cobar_complex(M: GModule, top: int, budget: int | None = DEFAULT_BUDGET_CELLS) -> ChainComplex:
    """Normalized inhomogeneous cochains ``C^k = Map((G-1)^k, M)``.

    ``(δF)(g1..g_{k+1}) = g1·F(g2..) + Σ(-1)^i F(..g_i g_{i+1}..) + (-1)^{k+1} F(g1..g_k)``.
    """
    G, r = M.group, M.rank
    ranks = [_bar_size(G, k, r) for k in range(top + 1)]
    for k in range(top):
        check_budget(ranks[k + 1], ranks[k], budget)
    acts = _action_stack(M)
    eye = np.eye(r, dtype=acts.dtype)
    d = {}
    for k in range(top):
        T = _tuples(G, k + 1)
        rows = np.arange(T.shape[0])
        D = np.zeros((ranks[k + 1], ranks[k]), dtype=acts.dtype)
        _scatter(D, rows, tuple_index(T[:, 1:], G.order), acts[T[:, 0]], r, r)
        for i in range(1, k + 1):
            merged = G.mult[T[:, i - 1], T[:, i]]
            keep = merged != 0
            U = np.concatenate([T[:, : i - 1], merged[:, None], T[:, i + 1:]], axis=1)[keep]
            _scatter(D, rows[keep], tuple_index(U, G.order), eye, r, r, (-1) ** i)
        _scatter(D, rows, tuple_index(T[:, :k], G.order), eye, r, r, (-1) ** (k + 1))
        d[k] = D
    rels = [kron(identity((G.order - 1) ** k), M.module.relations) for k in range(top + 1)]
    return ChainComplex(M.ring, ranks, d, rels, cochain=True, validate=_small(ranks),
                        blocks=tuple((G.order - 1) ** k for k in range(top + 1)))


def bar_chain_map(phi: GroupHom, f, source: ChainComplex, target: ChainComplex, degrees) -> ChainMap:
    """``m⊗[g..] -> f(m)⊗[φ(g)..]`` (or its dual on cochains) in the given degrees.

    For chains ``φ: G -> G'`` and ``f: M -> M'`` is G-equivariant through φ.
    For cochains ``φ: H -> G`` and ``f: M -> M'`` with ``f(φ(h)m) = h f(m)``.
    """
    F = as_mat(f)
    ro, ri = F.shape
    maps = {}
    H, K = phi.domain, phi.codomain
    img = np.asarray(phi.image, dtype=np.int64)
    for k in degrees:
        if not source.cochain:
            T = _tuples(H, k)
            P = img[T]
            keep = (P != 0).all(axis=1) if k else np.ones(len(T), dtype=bool)
            D = np.zeros((target.ranks[k], source.ranks[k]), dtype=F.dtype)
            _scatter(D, tuple_index(P[keep], K.order), np.arange(len(T))[keep], F, ro, ri)
        else:
            T = _tuples(H, k)
            P = img[T]
            keep = (P != 0).all(axis=1) if k else np.ones(len(T), dtype=bool)
            D = np.zeros((target.ranks[k], source.ranks[k]), dtype=F.dtype)
            _scatter(D, np.arange(len(T))[keep], tuple_index(P[keep], K.order), F, ro, ri)
        maps[k] = D
    return ChainMap(source, target, maps)


# ---------------------------------------------------------------- periodic complexes


def _norm_of(M: GModule, t: int, m: int) -> np.ndarray:
    G = M.group
    acc = zeros(M.rank, M.rank)
    g = 0
    for _ in range(m):
        acc = as_mat(acc.astype(object) + np.asarray(M.action[g]).astype(object))
        g = G.mul(g, t)
    return acc


def _periodic_block(M: GModule, t: int, m: int, j: int) -> np.ndarray:
    """``t - 1`` for odd ``j`` and the norm ``1 + t + .. + t^{m-1}`` for even ``j``."""
    if j % 2:
        return as_mat(np.asarray(M.action[t]).astype(object) - identity(M.rank).astype(object))
    return _norm_of(M, t, m)


def _compositions(n: int, k: int):
    if k == 0:
        return [()] if n == 0 else []
    return [c for c in product(range(n + 1), repeat=k) if sum(c) == n]


def product_complex(M: GModule, top: int, cochain: bool = False, decomposition=None) -> ChainComplex:
    """Tensor product of the 2-periodic resolutions of the cyclic factors of an
    abelian group, with coefficients in ``M`` (homology or cohomology).

    Degree ``n`` is indexed by multi-indices ``j`` with ``|j| = n``; the
    component ``j -> j - e_i`` (chains) carries the sign
    ``(-1)^{j_1+..+j_{i-1}}`` and the periodic block of degree ``j_i``.
    """
    G, r = M.group, M.rank
    if not G.is_abelian:
        raise ComplexError("the product resolution needs an abelian group")
    dec = list(decomposition) if decomposition is not None else abelian_decomposition(G)
    k = len(dec)
    comps = [_compositions(n, k) for n in range(top + 1)]
    pos = [{c: i for i, c in enumerate(cs)} for cs in comps]
    ranks = [len(cs) * r for cs in comps]
    d = {}
    rng = range(1, top + 1) if not cochain else range(0, top)
    for n in rng:
        tgt_n = n - 1 if not cochain else n + 1
        D = np.zeros((ranks[tgt_n], ranks[n]), dtype=object)
        for a, j in enumerate(comps[n]):
            sign = 1
            for i, (t, m) in enumerate(dec):
                jj = list(j)
                jj[i] += -1 if not cochain else 1
                if jj[i] >= 0:
                    b = pos[tgt_n][tuple(jj)]
                    deg = j[i] if not cochain else j[i] + 1
                    D[b * r:(b + 1) * r, a * r:(a + 1) * r] += sign * _periodic_block(M, t, m, deg)
                sign *= (-1) ** j[i]
        d[n] = as_mat(D)
    rels = [kron(identity(len(cs)), M.module.relations) for cs in comps]
    return ChainComplex(M.ring, ranks, d, rels, cochain=cochain, validate=_small(ranks),
                        blocks=tuple(len(cs) for cs in comps))


def periodic_complex(M: GModule, top: int, cochain: bool = False) -> ChainComplex:
    """The 2-periodic complex of a cyclic group, with coefficients in ``M``."""
    G = M.group
    gens = [g for g in range(G.order) if G.element_orders[g] == G.order]
    if not gens:
        raise ComplexError("the periodic complex needs a cyclic group")
    t = 1 if G.element_orders[1 % G.order] == G.order and G.order > 1 else gens[0]
    return product_complex(M, top, cochain, decomposition=[(t, G.order)] if G.order > 1 else [])


def coefficient_chain_map(f, source: ChainComplex, target: ChainComplex, blocks: list[int],
                          degrees) -> ChainMap:
    """The chain map ``I ⊗ f`` on complexes whose degree k term is a sum of
    ``blocks[k]`` copies of the coefficients."""
    F = as_mat(f)
    return ChainMap(source, target, {k: kron(identity(blocks[k]), F) for k in degrees})


# ---------------------------------------------------------------- iso type from elementary divisors


def _coo(rows, cols, blocks, r_out, r_in, sign=1):
    a = np.arange(r_out)
    b = np.arange(r_in)
    R = rows[:, None, None] * r_out + a[None, :, None]
    C = cols[:, None, None] * r_in + b[None, None, :]
    V = np.broadcast_to(blocks, (len(rows), r_out, r_in)) * sign
    return R.ravel(), C.ravel(), np.asarray(V).ravel()


def bar_differential_sparse(M: GModule, k: int):
    """The bar differential ``d_k`` as a scipy CSR matrix (same layout as
    :func:`bar_complex`)."""
    import scipy.sparse as sp

    G, r = M.group, M.rank
    shape = (_bar_size(G, k - 1, r), _bar_size(G, k, r))
    if shape[0] == 0 or shape[1] == 0:
        return sp.csr_matrix(shape, dtype=np.int64)
    acts = _action_stack(M).astype(np.int64)
    eye = np.eye(r, dtype=np.int64)
    T = _tuples(G, k)
    src = np.arange(T.shape[0])
    parts = [_coo(tuple_index(T[:, 1:], G.order), src, acts[G.inverse[T[:, 0]]], r, r)]
    for i in range(1, k):
        merged = G.mult[T[:, i - 1], T[:, i]]
        keep = merged != 0
        U = np.concatenate([T[:, : i - 1], merged[:, None], T[:, i + 1:]], axis=1)[keep]
        parts.append(_coo(tuple_index(U, G.order), src[keep], eye, r, r, (-1) ** i))
    parts.append(_coo(tuple_index(T[:, : k - 1], G.order), src, eye, r, r, (-1) ** k))
    R, C, V = (np.concatenate(x) for x in zip(*parts))
    return sp.coo_matrix((V, (R, C)), shape=shape).tocsr()


def _rank_and_torsion(D, order: int, ring: RingSpec) -> tuple[int, dict[int, list[int]]]:
    """Rank of ``D`` and the p-parts of its nonzero elementary divisors for
    primes not inverted in ``ring``, given that every nonzero divisor
    divides ``order``."""
    from .ring import prime_factors

    primes = [p for p in prime_factors(order) if not ring.inverts(p)]
    rank, parts = None, {}
    if D.shape[1] > D.shape[0]:
        D = D.T.tocsr()  # long and thin: cheaper pivots, same divisors
    for p in primes or prime_factors(order)[:1]:
        e = 0
        while order % p ** (e + 1) == 0:
            e += 1
        counts = local_divisor_counts(D, p, e + 1)
        rk = sum(counts)
        if rank is not None and rk != rank:
            raise ArithmeticError("inconsistent ranks across primes")
        rank = rk
        parts[p] = [(p, j) for j, c in enumerate(counts) for _ in range(c) if j > 0]
    return rank, parts


def bar_homology_type(M: GModule, n: int) -> tuple[list[int], int]:
    """Invariant factors and free rank of ``H_n(G, M)`` from the bar complex.

    Only for relation-free coefficients and ``n >= 1``.  Torsion of
    ``H_n`` is the torsion of ``coker d_{n+1}``, and every nonzero
    elementary divisor of ``d_{n+1}`` (and of ``d_n`` when ``n >= 2``)
    divides ``|G|``; so it is enough to work p-adically modulo
    ``p^(v_p|G|+1)``, with no transformation matrices.
    """
    from .groups import invariant_factors_from_elementary

    if n < 1 or M.module.relations.shape[1]:
        raise ComplexError("bar_homology_type needs n >= 1 and free coefficients")
    G, ring = M.group, M.ring
    rows = _bar_size(G, n, M.rank)
    if G.order == 1:
        return [], 0
    rk_out, parts = _rank_and_torsion(bar_differential_sparse(M, n + 1), G.order, ring)
    if n == 1:
        rk_in = matrix_rank(bar_differential_sparse(M, 1).toarray())
    else:
        rk_in, _ = _rank_and_torsion(bar_differential_sparse(M, n), G.order, ring)
    pp = [q for p, qs in parts.items() if not ring.inverts(p) for q in qs]
    return invariant_factors_from_elementary(pp), rows - rk_out - rk_in
