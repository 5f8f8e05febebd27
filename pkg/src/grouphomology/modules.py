"""Finitely presented modules over Z and Z[1/l] and maps between them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import (
    Lattice,
    NotInLattice,
    _smith,
    lattice_coords_mod,
    smith_mod_wide,
    as_mat,
    block_diag,
    compact,
    hstack,
    identity,
    kron,
    mod_reduce,
    mul,
    preimage,
    sub,
    zeros,
)
from .ring import ZZ, RingSpec


class IllDefinedMap(ValueError):
    """A matrix does not send relations into relations."""


class RingMismatch(ValueError):
    pass


def _normal_data(ring: RingSpec, diag, U, Ui, n: int):
    idx, factors = [], []
    for i, d in enumerate(diag):
        s = ring.strip(d)
        if s != 1:
            idx.append(i)
            factors.append(s)
    free = list(range(len(diag), n))
    keep = idx + free
    return tuple(factors), len(free), compact(U[keep]), compact(Ui[:, keep])


class PresentedModule:
    """``R^n / span(relations)``, together with its invariant-factor form.

    Normal-form coordinates: generator ``i`` of the normal form is the
    ambient vector ``from_normal[:, i]``; an ambient vector ``v`` has
    normal coordinates ``to_normal @ v`` reduced modulo ``moduli``.
    """

    def __init__(self, ring: RingSpec, relations, ambient_rank: int | None = None, _normal=None):
        rel = as_mat(relations, rows=ambient_rank)
        if ambient_rank is not None and rel.shape[0] != ambient_rank:
            raise ValueError("relation matrix height does not match ambient rank")
        self.ring = ring
        self.relations = rel
        self.ambient_rank = rel.shape[0]
        if _normal is None:
            diag, U, Ui, _, _ = _smith(rel, want_v=False)
            _normal = _normal_data(ring, diag, U, Ui, self.ambient_rank)
        self.invariant_factors, self.free_rank, self.to_normal, self.from_normal = _normal

    # -- constructors
    @classmethod
    def free(cls, ring: RingSpec, n: int) -> "PresentedModule":
        return cls.from_invariants(ring, (), n)

    @classmethod
    def cyclic(cls, ring: RingSpec, m: int) -> "PresentedModule":
        """R/(m); ``m == 0`` gives R."""
        return cls(ring, [[m]])

    @classmethod
    def from_invariants(cls, ring: RingSpec, factors, free_rank: int = 0) -> "PresentedModule":
        """The diagonal module with the given (already normalized) factors."""
        factors = tuple(int(f) for f in factors)
        if any(f <= 1 or ring.strip(f) != f for f in factors):
            raise ValueError(f"factors {factors} are not normalized over {ring}")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise ValueError(f"factors {factors} do not form a divisibility chain")
        n = len(factors) + free_rank
        rel = zeros(n, len(factors))
        for i, f in enumerate(factors):
            rel[i, i] = f
        eye = identity(n)
        return cls(ring, rel, n, _normal=(factors, free_rank, eye, eye))

    # -- normal form
    @property
    def rank(self) -> int:
        """Number of generators of the normal form."""
        return len(self.invariant_factors) + self.free_rank

    @property
    def moduli(self) -> list[int]:
        return list(self.invariant_factors) + [0] * self.free_rank

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def iso_type(self) -> tuple[tuple[int, ...], int]:
        return self.invariant_factors, self.free_rank

    def normal_form(self) -> "PresentedModule":
        return PresentedModule.from_invariants(self.ring, self.invariant_factors, self.free_rank)

    def reduce(self, coords) -> np.ndarray:
        """Reduce normal-form coordinates modulo the invariant factors."""
        return mod_reduce(as_mat(coords, rows=self.rank), self.moduli)

    def normal_coords(self, v) -> np.ndarray:
        return self.reduce(mul(self.to_normal, as_mat(v, rows=self.ambient_rank)))

    @cached_property
    def lattice(self) -> Lattice:
        return Lattice(self.relations, self.ring, self.ambient_rank)

    def is_zero_element(self, v) -> bool:
        return self.lattice.contains(as_mat(v, rows=self.ambient_rank))

    def elements(self):
        """All elements in normal coordinates (finite modules only)."""
        if not self.is_finite:
            raise ValueError("module is infinite")
        from itertools import product

        return [np.array(t, dtype=np.int64) for t in product(*(range(f) for f in self.invariant_factors))]

    def describe(self) -> str:
        parts = [f"Z/{f}" for f in self.invariant_factors]
        base = "Z" if self.ring.is_integers else str(self.ring)
        if self.free_rank:
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"PresentedModule({self.describe()} over {self.ring}, ambient {self.ambient_rank})"


class Subquotient:
    """``span(sub) / span(rel)`` inside ``R^n`` with explicit generators.

    ``lift[:, i]`` is an ambient vector representing normal generator ``i``;
    ``project`` sends ambient vectors lying in ``span(sub)`` to normal
    coordinates.  ``project(lift) == identity``.
    """

    def __init__(self, sub_gens, rel_gens, ring: RingSpec = ZZ, n: int | None = None,
                 exponent: int | None = None):
        sub_gens = as_mat(sub_gens, rows=n)
        n = sub_gens.shape[0]
        rel_gens = as_mat(rel_gens, rows=n)
        self.ring = ring
        self.ambient_rank = n
        self._S = Lattice(sub_gens, ring, n)
        N = ring.strip(exponent) if exponent else None
        if N is not None:
            # the quotient is known to be killed by N: work modulo N, trusting
            # that the relations lie in the submodule
            C = lattice_coords_mod(self._S, rel_gens, N)
            diag, U, Ui = smith_mod_wide(C, N) if self._S.rank else ([], zeros(0, 0), zeros(0, 0))
        else:
            try:
                C = self._S.coords(rel_gens)
            except NotInLattice:
                raise ValueError("relations are not contained in the submodule") from None
            diag, U, Ui, _, _ = _smith(C, want_v=False)
        factors, free, P, L = _normal_data(ring, diag, U, Ui, self._S.rank)
        self.module = PresentedModule.from_invariants(ring, factors, free)
        self.lift = mul(self._S.basis, L)
        self._proj = P

    def contains(self, v) -> bool:
        return self._S.contains(v)

    def project(self, v) -> np.ndarray:
        v = as_mat(v, rows=self.ambient_rank)
        return self.module.reduce(mul(self._proj, self._S.coords(v)))

    def __repr__(self):
        return f"Subquotient({self.module.describe()}, ambient {self.ambient_rank})"


def subquotient(cycles, boundaries, ring: RingSpec = ZZ) -> Subquotient:
    return Subquotient(cycles, boundaries, ring)


def cokernel(a, ring: RingSpec = ZZ):
    """``(coker a, projection from the free module)``."""
    a = as_mat(a)
    M = PresentedModule(ring, a)
    F = PresentedModule.free(ring, a.shape[0])
    return M, ModuleMap(F, M, identity(a.shape[0]))


# ---------------------------------------------------------------- maps


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A map of presented modules given on ambient coordinates."""

    domain: PresentedModule
    codomain: PresentedModule
    matrix: np.ndarray

    def __post_init__(self):
        m = as_mat(self.matrix, rows=self.codomain.ambient_rank, cols=self.domain.ambient_rank)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.codomain.ambient_rank, self.domain.ambient_rank):
            raise ValueError(
                f"map matrix has shape {m.shape}, expected "
                f"{(self.codomain.ambient_rank, self.domain.ambient_rank)}"
            )
        if self.domain.ring != self.codomain.ring:
            raise RingMismatch(f"{self.domain.ring} vs {self.codomain.ring}")
        if not self.codomain.lattice.contains(mul(m, self.domain.relations)):
            raise IllDefinedMap("relations of the domain do not map into relations of the codomain")

    @classmethod
    def identity(cls, M: PresentedModule) -> "ModuleMap":
        return cls(M, M, identity(M.ambient_rank))

    @classmethod
    def zero(cls, M: PresentedModule, N: PresentedModule) -> "ModuleMap":
        return cls(M, N, zeros(N.ambient_rank, M.ambient_rank))

    @classmethod
    def scalar(cls, c: int, M: PresentedModule) -> "ModuleMap":
        return cls(M, M, c * identity(M.ambient_rank))

    def __call__(self, v) -> np.ndarray:
        return mul(self.matrix, as_mat(v, rows=self.domain.ambient_rank))

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """``self ∘ inner``."""
        if inner.codomain.ambient_rank != self.domain.ambient_rank:
            raise ValueError("maps are not composable")
        return ModuleMap(inner.domain, self.codomain, mul(self.matrix, inner.matrix))

    __matmul__ = compose

    def equals(self, other: "ModuleMap") -> bool:
        """Equality modulo the codomain relations."""
        if self.matrix.shape != other.matrix.shape:
            return False
        return self.codomain.lattice.contains(sub(self.matrix, other.matrix))

    @property
    def is_zero(self) -> bool:
        return self.codomain.lattice.contains(self.matrix)

    def normal_matrix(self) -> np.ndarray:
        """The map in normal-form coordinates of both sides."""
        return self.codomain.reduce(
            mul(self.codomain.to_normal, mul(self.matrix, self.domain.from_normal))
        )

    @property
    def is_identity(self) -> bool:
        return self.domain.ambient_rank == self.codomain.ambient_rank and self.equals(
            ModuleMap(self.domain, self.codomain, identity(self.domain.ambient_rank))
        )


def module_map(dom: PresentedModule, cod: PresentedModule, matrix) -> ModuleMap:
    return ModuleMap(dom, cod, matrix)


def kernel_generators(f: ModuleMap) -> np.ndarray:
    """Ambient generators of ``ker f`` (together with the domain relations)."""
    return preimage(f.matrix, f.codomain.relations, f.domain.ring)


def is_injective(f: ModuleMap) -> bool:
    return f.domain.lattice.contains(kernel_generators(f))


def is_surjective(f: ModuleMap) -> bool:
    n = f.codomain.ambient_rank
    return Lattice(hstack([f.matrix, f.codomain.relations], n), f.codomain.ring, n).is_full


def is_isomorphism(f: ModuleMap) -> bool:
    return is_surjective(f) and is_injective(f)


def is_exact(f: ModuleMap, g: ModuleMap) -> bool:
    """Exactness of ``A --f--> B --g--> C`` at ``B``."""
    if not g.compose(f).is_zero:
        return False
    B = f.codomain
    image = Lattice(hstack([f.matrix, B.relations], B.ambient_rank), B.ring, B.ambient_rank)
    return image.contains(kernel_generators(g))


def direct_sum(*mods: PresentedModule) -> PresentedModule:
    ring = mods[0].ring
    if any(m.ring != ring for m in mods):
        raise RingMismatch("direct sum over different rings")
    return PresentedModule(ring, block_diag([m.relations for m in mods]))


# ---------------------------------------------------------------- tensor, hom, Tor, Ext


def _same_ring(N: PresentedModule, M: PresentedModule):
    if N.ring != M.ring:
        raise RingMismatch(f"{N.ring} vs {M.ring}")


def tensor(N: PresentedModule, M: PresentedModule) -> PresentedModule:
    """``N ⊗_R M``; basis vector ``e_i ⊗ e_j`` sits at index ``i * rank(M) + j``."""
    _same_ring(N, M)
    a, b = N.ambient_rank, M.ambient_rank
    rel = hstack([kron(N.relations, identity(b)), kron(identity(a), M.relations)], a * b)
    return PresentedModule(N.ring, rel, a * b)


def hom(N: PresentedModule, M: PresentedModule) -> PresentedModule:
    return derived("ext", 0, N, M).module


def presentation_basis(N: PresentedModule) -> np.ndarray:
    """Injective ``K`` with ``0 -> R^r --K--> R^a -> N -> 0`` exact."""
    return N.lattice.basis


@dataclass(frozen=True, eq=False)
class DerivedValue:
    """``Tor_n^R(N, M)`` or ``Ext^n_R(N, M)`` for ``n`` in {0, 1}.

    Computed from the free presentation ``0 -> R^r -> R^a -> N -> 0``:
    Tor sits inside ``M^r`` (n = 1) or ``M^a`` (n = 0), Ext in ``M^r`` or
    ``M^a`` likewise.  Values are subquotients of ``R^(blocks * rank M)`` so
    that maps ``M -> M'`` act blockwise.
    """

    kind: str
    degree: int
    N: PresentedModule
    M: PresentedModule
    blocks: int
    value: Subquotient

    @property
    def module(self) -> PresentedModule:
        return self.value.module

    def coefficient_matrix(self, f) -> np.ndarray:
        """Ambient block matrix of ``f : M -> M'``."""
        return kron(identity(self.blocks), as_mat(f))

    def induced(self, target: "DerivedValue", f) -> ModuleMap:
        """The map ``self -> target`` induced by ``f : self.M -> target.M``."""
        if target.blocks != self.blocks or target.kind != self.kind:
            raise ValueError("incompatible derived values")
        big = mul(self.coefficient_matrix(f), self.value.lift)
        return ModuleMap(self.module, target.module, target.value.project(big))


def derived(kind: str, n: int, N: PresentedModule, M: PresentedModule) -> DerivedValue:
    _same_ring(N, M)
    ring = N.ring
    K = presentation_basis(N)
    a, r = K.shape
    b = M.ambient_rank
    Rm = M.relations

    def rels(k):
        return block_diag([Rm] * k) if k else zeros(0, 0)

    if n >= 2:
        # zero over a PID
        val = Subquotient(zeros(b, 0), zeros(b, 0), ring, b)
        return DerivedValue(kind, n, N, M, 1, val)
    if kind == "tor":
        if n == 0:
            gens = identity(a * b)
            val = Subquotient(gens, hstack([kron(K, identity(b)), rels(a)], a * b), ring, a * b)
            return DerivedValue(kind, 0, N, M, a, val)
        cyc = preimage(kron(K, identity(b)), rels(a), ring) if r else zeros(0, 0)
        val = Subquotient(cyc, rels(r), ring, r * b)
        return DerivedValue(kind, 1, N, M, r, val)
    if kind == "ext":
        KT = kron(K.T.copy(), identity(b))
        if n == 0:
            cyc = preimage(KT, rels(r), ring) if r else identity(a * b)
            val = Subquotient(cyc, rels(a), ring, a * b)
            return DerivedValue(kind, 0, N, M, a, val)
        gens = identity(r * b)
        val = Subquotient(gens, hstack([KT, rels(r)], r * b), ring, r * b)
        return DerivedValue(kind, 1, N, M, r, val)
    raise ValueError(f"unknown functor {kind!r}")


def tor(n: int, N: PresentedModule, M: PresentedModule) -> PresentedModule:
    return derived("tor", n, N, M).module


def ext(n: int, N: PresentedModule, M: PresentedModule) -> PresentedModule:
    return derived("ext", n, N, M).module
