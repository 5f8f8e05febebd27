"""SL_n and GL_n over Z/m as explicit finite groups, together with roots of
unity, conjugation by diagonal units, the section GL_n -> SL_{n+1}, and the
four-term sequence relating R* x SL_n to GL_n."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .gmodules import GModuleMap, trivial_gmodule
from .group_homology import CheckReport, h, induced
from .groups import DEFAULT_MAX_ORDER, GroupHom, GroupTable, direct_product
from .linalg import DEFAULT_BUDGET_CELLS, BudgetExceeded
from .ring import ZZ, prime_factors

SL, GL = "SL", "GL"


class GroupTooLarge(BudgetExceeded):
    """Enumeration stopped at the configured order bound."""


@dataclass(frozen=True)
class FiniteRing:
    """The ring Z/m."""

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("Z/m needs m >= 2")

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(a for a in range(1, self.m) if gcd(a, self.m) == 1)

    def is_unit(self, a: int) -> bool:
        return gcd(a % self.m, self.m) == 1

    def inv(self, a: int) -> int:
        return pow(a % self.m, -1, self.m)

    @cached_property
    def unit_group(self) -> GroupTable:
        """``R*`` with elements in the order of ``units`` (so 1 comes first)."""
        pos = {u: i for i, u in enumerate(self.units)}
        mult = [[pos[(a * b) % self.m] for b in self.units] for a in self.units]
        return GroupTable(mult, labels=list(self.units))

    def powers(self, n: int) -> tuple[int, ...]:
        """``R*^n``."""
        return tuple(sorted({pow(u, n, self.m) for u in self.units}))

    def __str__(self):
        return f"Z/{self.m}"


def mu(n: int, R: FiniteRing) -> tuple[int, ...]:
    """The n-th roots of unity ``{a in R* : a^n = 1}``."""
    return tuple(a for a in R.units if pow(a, n, R.m) == 1 % R.m)


def _det(A: np.ndarray, m: int) -> np.ndarray:
    """Determinants mod m of a stack of small integer matrices."""
    n = A.shape[-1]
    if n == 1:
        return A[..., 0, 0] % m
    out = np.zeros(A.shape[:-2], dtype=np.int64)
    for j in range(n):
        minor = np.delete(np.delete(A, 0, axis=-2), j, axis=-1)
        out = out + (-1) ** j * A[..., 0, j] * _det(minor, m)
    return out % m


class MatrixGroup:
    """SL_n(Z/m) or GL_n(Z/m) with its multiplication table.

    ``elements[i]`` is the matrix of group element ``i``; element 0 is the
    identity and the rest are in lexicographic order of their entries.
    """

    def __init__(self, n: int, ring: FiniteRing, kind: str, elements: np.ndarray):
        self.n, self.ring, self.kind = n, ring, kind
        self.elements = elements
        m = ring.m
        self._weights = m ** np.arange(n * n, dtype=np.int64)[::-1]
        codes = self._code(elements)
        self._order = np.argsort(codes)
        self._sorted = codes[self._order]
        prod = np.einsum("aij,bjk->abik", elements, elements) % m
        mult = self._lookup(prod.reshape(-1, n, n)).reshape(len(elements), len(elements))
        labels = [tuple(tuple(int(x) for x in row) for row in E) for E in elements]
        self.table = GroupTable(mult, labels=labels)

    def _code(self, mats: np.ndarray) -> np.ndarray:
        return (mats.reshape(len(mats), -1) % self.ring.m) @ self._weights

    def _lookup(self, mats: np.ndarray) -> np.ndarray:
        codes = self._code(mats)
        pos = np.searchsorted(self._sorted, codes)
        pos = np.minimum(pos, len(self._sorted) - 1)
        if not (self._sorted[pos] == codes).all():
            raise KeyError("matrix not in the group")
        return self._order[pos]

    def index(self, matrix) -> int:
        return int(self._lookup(np.asarray(matrix, dtype=np.int64).reshape(1, self.n, self.n))[0])

    def __contains__(self, matrix) -> bool:
        try:
            self.index(matrix)
            return True
        except KeyError:
            return False

    @property
    def order(self) -> int:
        return len(self.elements)

    def det(self, i: int) -> int:
        return int(_det(self.elements[i][None], self.ring.m)[0])

    def __repr__(self):
        return f"{self.kind}_{self.n}({self.ring}) of order {self.order}"


def _generators(n: int, m: int, kind: str) -> list[np.ndarray]:
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                E = np.eye(n, dtype=np.int64)
                E[i, j] = 1
                gens.append(E)
    if kind == GL:
        for u in FiniteRing(m).units:
            if u != 1:
                D = np.eye(n, dtype=np.int64)
                D[0, 0] = u
                gens.append(D)
    return gens


def build_group(n: int, m: int, kind: str = SL, bound: int = DEFAULT_MAX_ORDER) -> MatrixGroup:
    """Enumerate ``SL_n(Z/m)`` (elementary matrices) or ``GL_n(Z/m)``
    (elementary and diagonal unit matrices) by breadth-first closure."""
    if kind not in (SL, GL):
        raise ValueError(f"kind must be SL or GL, got {kind!r}")
    if n < 1:
        raise ValueError("n must be positive")
    R = FiniteRing(m)
    gens = _generators(n, m, kind)
    eye = np.eye(n, dtype=np.int64)
    seen = {eye.tobytes(): eye}
    queue = deque([eye])
    while queue:
        A = queue.popleft()
        for S in gens:
            B = (A @ S) % m
            key = B.tobytes()
            if key not in seen:
                seen[key] = B
                if len(seen) > bound:
                    raise GroupTooLarge(f"{kind}_{n}(Z/{m}) has more than {bound} elements")
                queue.append(B)
    rest = sorted((tuple(B.flatten()) for k, B in seen.items() if k != eye.tobytes()))
    mats = np.array([eye] + [np.array(t, dtype=np.int64).reshape(n, n) for t in rest], dtype=np.int64)
    return MatrixGroup(n, R, kind, mats)


def classical_order(n: int, m: int, kind: str = GL) -> int:
    """``|GL_n(Z/m)|`` or ``|SL_n(Z/m)|`` from the product formula."""
    total = 1
    units = 1
    for p in prime_factors(m):
        k = 0
        mm = m
        while mm % p == 0:
            mm //= p
            k += 1
        glp = 1
        for i in range(n):
            glp *= p**n - p**i
        total *= p ** ((k - 1) * n * n) * glp
        units *= p ** (k - 1) * (p - 1)
    return total if kind == GL else total // units


# ---------------------------------------------------------------- maps


def _conjugate_all(G: MatrixGroup, D: np.ndarray, Dinv: np.ndarray) -> np.ndarray:
    m = G.ring.m
    return (D[None] @ G.elements @ Dinv[None]) % m


def unit_conjugation(a: int, G: MatrixGroup) -> GroupHom:
    """``A -> diag(a, I) A diag(a^-1, I)`` as an automorphism of ``G``."""
    R = G.ring
    if not R.is_unit(a):
        raise ValueError(f"{a} is not a unit of {R}")
    D = np.eye(G.n, dtype=np.int64)
    Dinv = np.eye(G.n, dtype=np.int64)
    D[0, 0], Dinv[0, 0] = a % R.m, R.inv(a)
    img = G._lookup(_conjugate_all(G, D, Dinv))
    return GroupHom(G.table, G.table, img)


def inner_witness(a: int, n: int, R: FiniteRing) -> np.ndarray:
    """``diag(a^{n-1}, a^{-1} I_{n-1})``, of determinant 1."""
    D = np.eye(n, dtype=np.int64) * R.inv(a)
    D[0, 0] = pow(a, n - 1, R.m)
    return D % R.m


def symbolic_power_identity(n: int) -> bool:
    """Check ``diag(a^n, I) A diag(a^-n, I) = D A D^-1`` with
    ``D = diag(a^{n-1}, a^-1 I)`` for a symbolic unit ``a`` and a generic
    matrix ``A``; also that ``det D = 1``."""
    import sympy as sp

    a = sp.Symbol("a", nonzero=True)
    A = sp.Matrix(n, n, lambda i, j: sp.Symbol(f"x{i}{j}"))
    P = sp.diag(a**n, *([1] * (n - 1)))
    D = sp.diag(a ** (n - 1), *([1 / a] * (n - 1)))
    lhs = P * A * P.inv()
    rhs = D * A * D.inv()
    return sp.simplify(lhs - rhs) == sp.zeros(n, n) and sp.simplify(D.det() - 1) == 0


def verify_unit_power_trivial(a: int, G: MatrixGroup, q: int,
                              budget: int | None = DEFAULT_BUDGET_CELLS) -> CheckReport:
    """``a^n`` acts on ``H_q(SL_n(R), Z)`` as the identity.

    The conjugation by ``diag(a^n, I)`` agrees with conjugation by the
    determinant one matrix ``diag(a^{n-1}, a^-1 I)``, an element of the
    group, so the induced map on homology is the identity.
    """
    rep = CheckReport("pending")
    R, n = G.ring, G.n
    if G.kind != SL:
        rep.status = "precondition_failure"
        rep.details["precondition"] = "the action is defined on SL_n"
        return rep
    rep.record("symbolic identity", symbolic_power_identity(n))
    for u in R.units:
        P = np.eye(n, dtype=np.int64)
        Pinv = np.eye(n, dtype=np.int64)
        P[0, 0], Pinv[0, 0] = pow(u, n, R.m), R.inv(pow(u, n, R.m))
        D = inner_witness(u, n, R)
        Dinv = inner_witness(R.inv(u), n, R)
        same = (_conjugate_all(G, P, Pinv) == _conjugate_all(G, D, Dinv)).all()
        rep.record(f"identity at a={u}", bool(same) and D in G)
    phi = unit_conjugation(pow(a, n, R.m), G)
    power = GroupHom.identity(G.table)
    base = unit_conjugation(a, G)
    for _ in range(n):
        power = base.compose(power)
    rep.record("a^n-conjugation is the n-th power", power.equals(phi))
    Z = trivial_gmodule(G.table, ZZ)
    try:
        f = induced(GModuleMap(Z, Z, [[1]], along=phi), q, budget=budget)
    except BudgetExceeded as exc:
        rep.status = "skipped_budget"
        rep.details["budget"] = str(exc)
        return rep
    rep.record("induced map is the identity", f.is_identity, f.domain.describe())
    return rep.finish()


def block_inclusion(G: MatrixGroup, H: MatrixGroup, det_corner: bool = False) -> GroupHom:
    """``B -> diag(c, B)`` from ``G`` (size n) into ``H`` (size n+1), where
    ``c = det(B)^-1`` if ``det_corner`` else ``1``."""
    m, n = G.ring.m, G.n
    big = np.zeros((G.order, n + 1, n + 1), dtype=np.int64)
    big[:, 1:, 1:] = G.elements
    if det_corner:
        dets = _det(G.elements, m)
        big[:, 0, 0] = [pow(int(d), -1, m) for d in dets]
    else:
        big[:, 0, 0] = 1
    return GroupHom(G.table, H.table, H._lookup(big))


def inclusion(S: MatrixGroup, G: MatrixGroup) -> GroupHom:
    """``SL_n -> GL_n``."""
    return GroupHom(S.table, G.table, G._lookup(S.elements))


def delta_section(G: MatrixGroup, bound: int = DEFAULT_MAX_ORDER) -> tuple[GroupHom, MatrixGroup]:
    """``δ: GL_n -> SL_{n+1}``, ``B -> diag(det(B)^-1, B)``; returns ``(δ, SL_{n+1})``."""
    if G.kind != GL:
        raise ValueError("δ is defined on GL_n")
    S1 = build_group(G.n + 1, G.ring.m, SL, bound)
    return block_inclusion(G, S1, det_corner=True), S1


def verify_delta_split(n: int, m: int, bound: int = DEFAULT_MAX_ORDER,
                       budget: int | None = DEFAULT_BUDGET_CELLS) -> CheckReport:
    """``δ`` is an injective homomorphism, ``δ ∘ inc`` is the stabilization
    ``SL_n -> SL_{n+1}``, and the same holds for the induced maps on ``H_1``."""
    rep = CheckReport("pending")
    try:
        Gl = build_group(n, m, GL, bound)
        Sl = build_group(n, m, SL, bound)
        delta, S1 = delta_section(Gl, bound)
    except GroupTooLarge as exc:
        rep.status = "skipped_budget"
        rep.details["budget"] = str(exc)
        return rep
    dets = _det(S1.elements[np.asarray(delta.image)], m)
    rep.record("det = 1", bool((dets == 1 % m).all()))
    rep.record("injective", delta.is_injective)
    inc = inclusion(Sl, Gl)
    stab = block_inclusion(Sl, S1)
    rep.record("δ∘inc = stabilization", delta.compose(inc).equals(stab))
    Zs, Zg, Z1 = (trivial_gmodule(X.table, ZZ) for X in (Sl, Gl, S1))
    try:
        one = [[1]]
        inc_h = induced(GModuleMap(Zs, Zg, one, along=inc), 1, method="abelianization", budget=budget)
        delta_h = induced(GModuleMap(Zg, Z1, one, along=delta), 1, method="abelianization", budget=budget)
        stab_h = induced(GModuleMap(Zs, Z1, one, along=stab), 1, method="abelianization", budget=budget)
    except BudgetExceeded as exc:
        rep.status = "skipped_budget"
        rep.details["budget"] = str(exc)
        return rep
    rep.record("on H_1", delta_h.compose(inc_h).equals(stab_h),
               f"{inc_h.domain.describe()} -> {inc_h.codomain.describe()} -> {delta_h.codomain.describe()}")
    return rep.finish()


def gamma(n: int, m: int, bound: int = DEFAULT_MAX_ORDER):
    """``γ: R* x SL_n -> GL_n``, ``(b, B) -> bB``; returns ``(γ, R* x SL_n, SL_n, GL_n)``."""
    R = FiniteRing(m)
    Sl = build_group(n, m, SL, bound)
    Gl = build_group(n, m, GL, bound)
    P = direct_product(R.unit_group, Sl.table)
    b = np.repeat(np.array(R.units, dtype=np.int64), Sl.order)
    mats = (b[:, None, None] * np.tile(Sl.elements, (len(R.units), 1, 1))) % m
    return GroupHom(P, Gl.table, Gl._lookup(mats)), P, Sl, Gl


def verify_gamma_exact(n: int, m: int, bound: int = DEFAULT_MAX_ORDER) -> CheckReport:
    """Exactness of ``1 -> μ_n(R) -> R* x SL_n(R) -> GL_n(R) -> R*/R*^n -> 1``."""
    rep = CheckReport("pending")
    R = FiniteRing(m)
    try:
        g, P, Sl, Gl = gamma(n, m, bound)
    except GroupTooLarge as exc:
        rep.status = "skipped_budget"
        rep.details["budget"] = str(exc)
        return rep
    roots = mu(n, R)
    upos = {u: i for i, u in enumerate(R.units)}
    expected_ker = sorted(upos[b] * Sl.order + Sl.index(np.eye(n, dtype=np.int64) * R.inv(b) % m)
                          for b in roots)
    ker = sorted(g.kernel())
    rep.record("kernel is the antidiagonal μ_n", ker == expected_ker, f"|ker| = {len(ker)}")
    nth = set(R.powers(n))
    dets = _det(Gl.elements, m)
    target = sorted(i for i in range(Gl.order) if int(dets[i]) in nth)
    image = sorted(set(int(x) for x in g.image))
    rep.record("image is det^-1(R*^n)", image == target, f"|im| = {len(image)}")
    rep.record("det is onto R*", set(int(d) for d in dets) == set(R.units))
    coker = Gl.order // len(image)
    rep.record("|coker| = |R*/R*^n|", coker == len(R.units) // len(nth) and Gl.order % len(image) == 0,
               f"|coker| = {coker}")
    rep.details["|mu_n|"] = str(len(roots))
    rep.details["orders"] = f"|R* x SL_n| = {P.order}, |GL_n| = {Gl.order}"
    rep.values = {"mu": len(roots), "ker": len(ker), "im": len(image), "coker": coker}
    return rep.finish()
