"""Finite groups stored as full multiplication tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd

import numpy as np

from .linalg import _smith, zeros
from .ring import ZZ, prime_factors

DEFAULT_MAX_ORDER = 512


class GroupAxiomError(ValueError):
    pass


class NotNormal(ValueError):
    pass


class GroupTable:
    """A finite group on elements ``0..order-1`` with ``0`` the identity.

    ``mult[a, b]`` is the index of ``a * b``.  Construction validates the
    axioms exhaustively (associativity is checked one row at a time with
    numpy, which is fine up to a few hundred elements).
    """

    def __init__(self, mult, labels=None, validate: bool = True):
        mult = np.array(mult, dtype=np.int64)
        if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
            raise GroupAxiomError("multiplication table must be a non-empty square")
        n = mult.shape[0]
        if validate:
            _check_axioms(mult)
        inv = np.argmin(mult, axis=1) if n > 1 else np.zeros(1, dtype=np.int64)
        # argmin finds the column holding 0 because 0 is the smallest index
        mult.flags.writeable = False
        inv.flags.writeable = False
        self.mult = mult
        self.inverse = inv
        self.order = n
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def conjugate(self, g0: int, g: int) -> int:
        """``g0 * g * g0^-1``."""
        return self.mul(self.mul(g0, g), self.inv(g0))

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.mul(x, a)
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.mult == self.mult.T).all())

    def closure(self, gens) -> tuple[int, ...]:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = [int(g) for g in gens if int(g) != 0]
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0])
        while len(frontier):
            new = np.unique(self.mult[np.ix_(frontier, gens)].ravel()) if gens else np.array([], int)
            new = new[~seen[new]]
            seen[new] = True
            frontier = new
        return tuple(int(x) for x in np.nonzero(seen)[0])

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by decreasing element order."""
        gens: list[int] = []
        current = {0}
        for a in sorted(range(1, self.order), key=lambda x: (-self.element_orders[x], x)):
            if a not in current:
                gens.append(a)
                current = set(self.closure(gens))
                if len(current) == self.order:
                    break
        return tuple(gens)

    def __repr__(self):
        return f"GroupTable(order={self.order})"


def _check_axioms(mult: np.ndarray):
    n = mult.shape[0]
    if mult.min() < 0 or mult.max() >= n:
        raise GroupAxiomError("table entries out of range")
    ar = np.arange(n)
    if not ((mult[0] == ar).all() and (mult[:, 0] == ar).all()):
        raise GroupAxiomError("element 0 is not a two-sided identity")
    for row in mult:
        if len(np.unique(row)) != n:
            raise GroupAxiomError("table is not a Latin square (no inverses)")
    for a in range(n):
        # (a*b)*c == a*(b*c) for all b, c
        if not (mult[mult[a]] == mult[a][mult]).all():
            raise GroupAxiomError(f"associativity fails for a={a}")


def group_from_table(raw, labels=None) -> GroupTable:
    return GroupTable(raw, labels)


def cyclic(m: int) -> GroupTable:
    if m < 1:
        raise ValueError("cyclic group order must be >= 1")
    ar = np.arange(m)
    return GroupTable((ar[:, None] + ar[None, :]) % m, labels=[str(i) for i in range(m)], validate=False)


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    """Element ``(g, h)`` has index ``g * |H| + h``."""
    g, h = G.order, H.order
    gi = np.repeat(np.arange(g), h)
    hi = np.tile(np.arange(h), g)
    mult = G.mult[np.ix_(gi, gi)] * h + H.mult[np.ix_(hi, hi)]
    labels = [f"({a},{b})" for a in G.labels for b in H.labels]
    return GroupTable(mult, labels, validate=False)


def abelian_group(factors) -> GroupTable:
    """Product of cyclic groups of the given orders (trivial group for [])."""
    G = cyclic(1)
    for m in factors:
        G = cyclic(m) if G.order == 1 else direct_product(G, cyclic(m))
    return G


def permutation_group(generators, degree: int | None = None) -> GroupTable:
    """The group generated by permutations (tuples of images of 0..d-1)."""
    gens = [tuple(int(x) for x in g) for g in generators]
    d = degree or (len(gens[0]) if gens else 1)
    ident = tuple(range(d))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        p = elems[i]
        for s in gens:
            q = tuple(s[p[k]] for k in range(d))
            if q not in index:
                index[q] = len(elems)
                elems.append(q)
        i += 1
    ident_first = [ident] + sorted(e for e in elems if e != ident)
    index = {e: k for k, e in enumerate(ident_first)}
    n = len(ident_first)
    mult = np.zeros((n, n), dtype=np.int64)
    for a, p in enumerate(ident_first):
        for b, q in enumerate(ident_first):
            # (p * q)(k) = p(q(k))
            mult[a, b] = index[tuple(p[q[k]] for k in range(d))]
    return GroupTable(mult, labels=[str(e) for e in ident_first], validate=False)


def symmetric_group(n: int) -> GroupTable:
    if n <= 1:
        return cyclic(1)
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return permutation_group(gens, n)


def dihedral(n: int) -> GroupTable:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((k + 1) % n for k in range(n))
    ref = tuple((-k) % n for k in range(n))
    return permutation_group([rot, ref], n)


# ---------------------------------------------------------------- subgroups and maps


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: GroupTable
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(sorted(set(int(e) for e in self.elements)))
        object.__setattr__(self, "elements", els)
        if not els or els[0] != 0:
            raise GroupAxiomError("subgroup must contain the identity")
        s = set(els)
        M = self.parent.mult[np.ix_(els, els)]
        if not set(np.unique(M).tolist()) <= s:
            raise GroupAxiomError("subset not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _table(self):
        els = self.elements
        pos = {e: i for i, e in enumerate(els)}
        mult = np.vectorize(pos.__getitem__)(self.parent.mult[np.ix_(els, els)]) if len(els) > 1 else [[0]]
        T = GroupTable(mult, labels=[self.parent.labels[e] for e in els], validate=False)
        return T, GroupHom(T, self.parent, els)

    def as_group(self) -> GroupTable:
        return self._table[0]

    @property
    def embedding(self) -> "GroupHom":
        return self._table[1]

    def is_normal(self) -> bool:
        s = set(self.elements)
        for g in self.parent.generators:
            for h in self.elements:
                if self.parent.conjugate(g, h) not in s:
                    return False
        return True


def subgroup_generated(G: GroupTable, gens) -> Subgroup:
    return Subgroup(G, G.closure(gens))


def trivial_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup(G, (0,))


def whole_group(G: GroupTable) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


class GroupHom:
    """A homomorphism given by the image of every element."""

    def __init__(self, domain: GroupTable, codomain: GroupTable, image, validate: bool = True):
        image = np.array(image, dtype=np.int64)
        if image.shape != (domain.order,):
            raise ValueError("image list must have one entry per domain element")
        if validate:
            if image.min() < 0 or image.max() >= codomain.order:
                raise GroupAxiomError("image out of range")
            lhs = image[domain.mult]
            rhs = codomain.mult[np.ix_(image, image)]
            if not (lhs == rhs).all():
                raise GroupAxiomError("map is not a homomorphism")
        image.flags.writeable = False
        self.domain = domain
        self.codomain = codomain
        self.image = image

    def __call__(self, g: int) -> int:
        return int(self.image[g])

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self ∘ inner``."""
        return GroupHom(inner.domain, self.codomain, self.image[inner.image], validate=False)

    @property
    def is_identity(self) -> bool:
        return self.domain is self.codomain and (self.image == np.arange(self.domain.order)).all()

    def kernel(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.nonzero(self.image == 0)[0])

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.image)) == self.domain.order

    @property
    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == self.codomain.order

    def equals(self, other: "GroupHom") -> bool:
        return (self.image == other.image).all()

    @classmethod
    def identity(cls, G: GroupTable) -> "GroupHom":
        return cls(G, G, np.arange(G.order), validate=False)


def same_table(G: GroupTable, H: GroupTable) -> bool:
    return G is H or (G.order == H.order and bool((G.mult == H.mult).all()))


def conjugation(G: GroupTable, g0: int) -> GroupHom:
    """``g -> g0 g g0^-1``."""
    img = G.mult[G.mult[g0], G.inverse[g0]]
    return GroupHom(G, G, img, validate=False)


def quotient(G: GroupTable, N: Subgroup):
    """``(G/N, projection)``; cosets are numbered by their smallest element."""
    if N.parent is not G and not same_table(N.parent, G):
        raise ValueError("subgroup belongs to another group")
    if not N.is_normal():
        raise NotNormal("subgroup is not normal")
    els = np.array(N.elements)
    coset_of = -np.ones(G.order, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            coset_of[G.mult[g, els]] = len(reps)
            reps.append(g)
    k = len(reps)
    mult = coset_of[G.mult[np.ix_(reps, reps)]]
    labels = [f"{G.labels[r]}N" for r in reps]
    Q = GroupTable(mult, labels, validate=False)
    return Q, GroupHom(G, Q, coset_of, validate=False)


def exponent(G: GroupTable) -> int:
    e = 1
    for o in G.element_orders:
        e = e * o // gcd(e, o)
    return e


def is_l_torsion(G: GroupTable, l: int) -> bool:
    return set(prime_factors(exponent(G))) <= set(prime_factors(l))


def all_subgroups(G: GroupTable) -> list[Subgroup]:
    """Every subgroup, found by joining cyclic subgroups (small groups only)."""
    cyclics = sorted({G.closure([g]) for g in range(G.order)})
    found = {(0,)}
    frontier = [(0,)]
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics:
                if set(C) <= set(H):
                    continue
                J = G.closure(H + C)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return [Subgroup(G, H) for H in sorted(found, key=lambda s: (len(s), s))]


# ---------------------------------------------------------------- abelian structure


def abelianization_relations(G: GroupTable) -> np.ndarray:
    """Columns ``e_g + e_s - e_{gs}`` for all ``g`` and generators ``s``.

    ``Z^|G| / span`` of these is ``G^ab``: every element is a word in the
    generators, so the relations force ``e_g + e_h = e_{gh}`` for all pairs.
    """
    n = G.order
    gens = G.generators
    R = zeros(n, n * len(gens))
    col = 0
    for s in gens:
        for g in range(n):
            R[g, col] += 1
            R[s, col] += 1
            R[G.mul(g, s), col] -= 1
            col += 1
    return R


def _evaluate(G: GroupTable, coeffs) -> int:
    """``prod g^c_g`` (G abelian, or the order does not matter)."""
    x = 0
    for g, c in enumerate(coeffs):
        c = int(c) % G.element_orders[g]
        if c:
            x = G.mul(x, G.power(g, c))
    return x


def abelian_decomposition(G: GroupTable) -> list[tuple[int, int]]:
    """``[(t_i, m_i)]`` with ``G`` the internal direct product of ``<t_i>``.

    The ``m_i`` are the invariant factors, read from the Smith form of the
    abelianization relations; ``t_i`` is the image of the matching new basis
    vector.
    """
    if not G.is_abelian:
        raise ValueError("group is not abelian")
    cache = G.__dict__.setdefault("_abelian_decomposition", None)
    if cache is not None:
        return cache
    diag, _, Ui, _, _ = _smith(abelianization_relations(G), want_u=True, want_v=False)
    out = []
    for i, d in enumerate(diag):
        if d > 1:
            out.append((_evaluate(G, Ui[:, i]), int(d)))
    G.__dict__["_abelian_decomposition"] = out
    return out


def abelianization(G: GroupTable):
    """``(G^ab as a Z-module in invariant-factor form, projection G -> G^ab)``.

    The projection lands in the quotient table by the commutator subgroup.
    """
    from .modules import PresentedModule

    module = PresentedModule(ZZ, abelianization_relations(G)).normal_form()
    comm = set()
    for a in range(G.order):
        for b in range(G.order):
            comm.add(G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))))
    C = subgroup_generated(G, sorted(comm))
    Q, proj = quotient(G, C)
    return module, proj


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def invariant_factors_from_elementary(prime_powers) -> list[int]:
    by_prime: dict[int, list[int]] = {}
    for p, e in prime_powers:
        by_prime.setdefault(p, []).append(p**e)
    for v in by_prime.values():
        v.sort(reverse=True)
    width = max((len(v) for v in by_prime.values()), default=0)
    out = []
    for i in range(width):
        f = 1
        for v in by_prime.values():
            if i < len(v):
                f *= v[i]
        out.append(f)
    return sorted(out)


def enumerate_abelian_groups(max_order: int, bound: int = DEFAULT_MAX_ORDER):
    """Yield ``(GroupTable, invariant factors)`` per isomorphism class of order <= max_order."""
    if max_order > bound:
        raise ValueError(f"max_order {max_order} exceeds bound {bound}")
    for n in range(1, max_order + 1):
        primes = prime_factors(n)
        exps = []
        for p in primes:
            e, m = 0, n
            while m % p == 0:
                m //= p
                e += 1
            exps.append(e)
        choices = [list(_partitions(e)) for e in exps]
        for combo in product(*choices):
            pp = [(p, k) for p, part in zip(primes, combo) for k in part]
            factors = invariant_factors_from_elementary(pp)
            yield abelian_group(factors), factors
