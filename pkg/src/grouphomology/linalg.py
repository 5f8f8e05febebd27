"""Exact integer matrices: Smith normal form, kernels, images, lattices.

Matrices are 2-D numpy arrays.  They are ``int64`` while every entry fits
comfortably and ``object`` (Python ints) otherwise; all arithmetic helpers
here check bounds and promote before numpy could wrap around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ring import ZZ, RingSpec

LIMIT = 2**62
DEFAULT_BUDGET_CELLS = 4_000_000


class BudgetExceeded(RuntimeError):
    """A dense matrix would exceed the configured cell budget."""


class NotInLattice(ValueError):
    """A vector is not in the span of a lattice."""


def check_budget(rows: int, cols: int, budget: int | None = DEFAULT_BUDGET_CELLS):
    if budget is not None and rows * cols > budget:
        raise BudgetExceeded(
            f"{rows}x{cols} matrix ({rows * cols} cells) exceeds budget of {budget} cells"
        )


# ---------------------------------------------------------------- matrices


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def compact(a: np.ndarray) -> np.ndarray:
    """Return ``a`` as int64 if all entries are small, else as object."""
    if a.dtype == np.int64:
        return a
    if a.dtype != object:
        return a.astype(np.int64)
    if _maxabs(a) < LIMIT:
        return a.astype(np.int64)
    return a


def as_mat(a, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce nested lists / arrays to an exact integer matrix."""
    if isinstance(a, np.ndarray) and a.ndim == 2 and a.dtype in (np.int64, object):
        return compact(a)
    arr = np.array(a, dtype=object)
    if arr.size == 0:
        r = rows if rows is not None else (arr.shape[0] if arr.ndim >= 1 else 0)
        c = cols if cols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
        return np.zeros((r, c), dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    for x in arr.flat:
        if int(x) != x:
            raise ValueError(f"non-integer entry {x!r}")
    arr = np.vectorize(int, otypes=[object])(arr)
    return compact(arr)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0 or a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    if a.dtype == np.int64 and b.dtype == np.int64:
        if _maxabs(a) * _maxabs(b) * a.shape[1] < LIMIT:
            return a @ b
    return compact(a.astype(object) @ b.astype(object))


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == np.int64 and b.dtype == np.int64 and _maxabs(a) + _maxabs(b) < LIMIT:
        return a + b
    return compact(a.astype(object) + b.astype(object))


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return add(a, -b)


def scale(c: int, a: np.ndarray) -> np.ndarray:
    c = int(c)
    if a.dtype == np.int64 and abs(c) * _maxabs(a) < LIMIT:
        return c * a
    return compact(c * a.astype(object))


def hstack(mats, rows: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return zeros(rows, 0)
    if any(m.dtype == object for m in mats):
        mats = [m.astype(object) for m in mats]
    return np.hstack(mats)


def vstack(mats, cols: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return zeros(0, cols)
    if any(m.dtype == object for m in mats):
        mats = [m.astype(object) for m in mats]
    return np.vstack(mats)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    r, c = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if a.size == 0 or b.size == 0:
        return zeros(r, c)
    if a.dtype == np.int64 and b.dtype == np.int64 and _maxabs(a) * _maxabs(b) < LIMIT:
        return np.kron(a, b)
    return compact(np.kron(a.astype(object), b.astype(object)))


def block_diag(blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    obj = any(b.dtype == object for b in blocks)
    out = np.zeros((rows, cols), dtype=object if obj else np.int64)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def mod_reduce(v: np.ndarray, moduli) -> np.ndarray:
    """Reduce row ``i`` of ``v`` modulo ``moduli[i]`` (0 means no reduction)."""
    v = v.copy()
    for i, m in enumerate(moduli):
        if m:
            v[i] = v[i] % m
    return v


def to_lists(a: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in a]


# ---------------------------------------------------------------- Smith core


class _Work:
    """Arrays undergoing elimination, promoted together to object dtype."""

    def __init__(self, **arrays):
        self.names = [k for k, v in arrays.items() if v is not None]
        for k, v in arrays.items():
            setattr(self, k, None if v is None else v.copy())

    def guard(self, bound: int):
        if bound < LIMIT:
            return
        for k in self.names:
            arr = getattr(self, k)
            if arr.dtype != object:
                setattr(self, k, arr.astype(object))


def _smith(a: np.ndarray, want_u: bool = True, want_v: bool = True):
    """Integer Smith normal form with optional transforms.

    Returns ``(diag, U, Uinv, V, Vinv)`` with ``U @ a @ V`` diagonal with
    entries ``diag`` (positive, each dividing the next) followed by zeros.
    """
    m, n = a.shape
    a = compact(a)
    w = _Work(
        A=a,
        U=identity(m) if want_u else None,
        Ui=identity(m) if want_u else None,
        V=identity(n) if want_v else None,
        Vi=identity(n) if want_v else None,
    )
    if a.dtype == object:
        w.guard(LIMIT)

    def swap_rows(i, j):
        if i == j:
            return
        w.A[[i, j]] = w.A[[j, i]]
        if want_u:
            w.U[[i, j]] = w.U[[j, i]]
            w.Ui[:, [i, j]] = w.Ui[:, [j, i]]

    def swap_cols(i, j):
        if i == j:
            return
        w.A[:, [i, j]] = w.A[:, [j, i]]
        if want_v:
            w.V[:, [i, j]] = w.V[:, [j, i]]
            w.Vi[[i, j]] = w.Vi[[j, i]]

    def row_reduce(t, q):
        # rows t+1.. -= q * row t
        qa = _maxabs(q)
        bound = _maxabs(w.A[t:]) * (qa + 1)
        if want_u:
            bound = max(bound, _maxabs(w.U) * (qa + 1), _maxabs(w.Ui) * (qa * len(q) + 1))
        w.guard(bound)
        if w.A.dtype == object:
            q = q.astype(object)
        w.A[t + 1:] -= q[:, None] * w.A[t]
        if want_u:
            w.U[t + 1:] -= q[:, None] * w.U[t]
            w.Ui[:, t] += w.Ui[:, t + 1:] @ q

    def col_reduce(t, q):
        qa = _maxabs(q)
        bound = _maxabs(w.A[:, t:]) * (qa + 1)
        if want_v:
            bound = max(bound, _maxabs(w.V) * (qa + 1), _maxabs(w.Vi) * (qa * len(q) + 1))
        w.guard(bound)
        if w.A.dtype == object:
            q = q.astype(object)
        w.A[:, t + 1:] -= w.A[:, t][:, None] * q[None, :]
        if want_v:
            w.V[:, t + 1:] -= w.V[:, t][:, None] * q[None, :]
            w.Vi[t] += q @ w.Vi[t + 1:]

    diag = []
    for t in range(min(m, n)):
        block = w.A[t:, t:]
        nz_r, nz_c = np.nonzero(block)
        if len(nz_r) == 0:
            break
        k = int(np.argmin(np.abs(block[nz_r, nz_c])))
        swap_rows(t, t + int(nz_r[k]))
        swap_cols(t, t + int(nz_c[k]))
        while True:
            p = w.A[t, t]
            col = w.A[t + 1:, t]
            if col.any():
                row_reduce(t, col // p)
                col = w.A[t + 1:, t]
                if col.any():
                    nz = np.nonzero(col)[0]
                    i = nz[int(np.argmin(np.abs(col[nz])))]
                    swap_rows(t, t + 1 + int(i))
                    continue
            row = w.A[t, t + 1:]
            if row.any():
                col_reduce(t, row // p)
                row = w.A[t, t + 1:]
                if row.any():
                    nz = np.nonzero(row)[0]
                    j = nz[int(np.argmin(np.abs(row[nz])))]
                    swap_cols(t, t + 1 + int(j))
                    continue
            rest = w.A[t + 1:, t + 1:]
            bad = np.nonzero(rest % p)[0] if rest.size else ()
            if len(bad):
                i = t + 1 + int(bad[0])
                w.guard(_maxabs(w.A) * 2)
                w.A[t] += w.A[i]
                if want_u:
                    w.guard(max(_maxabs(w.U), _maxabs(w.Ui)) * 2)
                    w.U[t] += w.U[i]
                    w.Ui[:, i] -= w.Ui[:, t]
                continue
            break
        if w.A[t, t] < 0:
            w.A[:, t] = -w.A[:, t]
            if want_v:
                w.V[:, t] = -w.V[:, t]
                w.Vi[t] = -w.Vi[t]
        diag.append(int(w.A[t, t]))

    def fin(x):
        return None if x is None else compact(x)

    return diag, fin(w.U), fin(w.Ui), fin(w.V), fin(w.Vi)


def image_basis(a: np.ndarray) -> np.ndarray:
    """A basis (as columns) of the integer column span of ``a``.

    Column elimination without transforms.  Pivot rows are taken in order
    while they offer a unit pivot; otherwise a unit anywhere in the active
    block is preferred, which keeps entries small on sparse inputs.
    """
    m, n = a.shape
    w = _Work(A=a if a.dtype == object else a.astype(np.int64))
    basis = []
    done = np.zeros(m, dtype=bool)
    t = 0
    while w.A.shape[1]:
        while t < m and (done[t] or not w.A[t].any()):
            t += 1
        if t == m:
            break
        i = t
        row = w.A[i]
        nzc = np.nonzero(row)[0]
        if np.abs(row[nzc]).min() != 1:
            units = np.argwhere((w.A == 1) | (w.A == -1))
            if len(units):
                i = int(units[0][0])
        while True:
            row = w.A[i]
            nzc = np.nonzero(row)[0]
            if len(nzc) <= 1:
                break
            vals = row[nzc]
            k = int(np.argmin(np.abs(vals)))
            q = vals // vals[k]
            q[k] = 0
            keep = q != 0
            cols, q = nzc[keep], q[keep]
            w.guard(_maxabs(w.A[:, cols]) + _maxabs(q) * _maxabs(w.A[:, nzc[k]]))
            piv = w.A[:, nzc[k]].copy()
            if w.A.dtype == object:
                q = q.astype(object)
            w.A[:, cols] -= piv[:, None] * q[None, :]
        k = int(nzc[0])
        basis.append(w.A[:, k].copy())
        done[i] = True
        w.A[:, k] = 0
        if len(basis) % 16 == 0:
            alive = w.A.any(axis=0)
            if alive.sum() < 0.75 * w.A.shape[1]:
                w.A = w.A[:, alive]
    if not basis:
        return zeros(m, 0)
    return compact(np.stack(basis, axis=1))


# ---------------------------------------------------------------- public ops


@dataclass(frozen=True, eq=False)
class SmithDecomposition:
    """``U @ A @ V == D`` over ``ring``.

    Over Z[1/l] the rows of ``U`` are rescaled by l-smooth fractions so the
    diagonal is coprime to ``l``; ``U`` then holds ``Fraction`` entries.
    """

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    ring: RingSpec
    diagonal: tuple[int, ...]
    rank: int


def snf(a, ring: RingSpec = ZZ) -> SmithDecomposition:
    a = as_mat(a)
    m, n = a.shape
    diag, U, _, V, _ = _smith(a)
    D = zeros(m, n).astype(object)
    out_diag = []
    if not ring.is_integers:
        U = U.astype(object)
        for i, d in enumerate(diag):
            u = ring.unit_part(d)
            if u != 1:
                U[i] = np.array([Fraction(int(x), u) for x in U[i]], dtype=object)
            out_diag.append(d // u)
    else:
        out_diag = list(diag)
    for i, d in enumerate(out_diag):
        D[i, i] = d
    return SmithDecomposition(U, compact(D), V, ring, tuple(out_diag), len(diag))


def kernel(a, ring: RingSpec = ZZ) -> np.ndarray:
    """Columns form a basis of ``{x : a x = 0}`` (a free module over a PID)."""
    a = as_mat(a)
    if a.shape[0] == 0:
        return identity(a.shape[1])
    diag, _, _, V, _ = _smith(a, want_u=False)
    return V[:, len(diag):]


def matrix_rank(a) -> int:
    a = as_mat(a)
    return len(_smith(a, False, False)[0])


class Lattice:
    """The R-span of some integer vectors, intersected with Z^n.

    Over Z[1/l] the span is saturated at the primes of ``l``, so vectors with
    integer coordinates always have integer coordinates in ``basis``.
    """

    def __init__(self, gens, ring: RingSpec = ZZ, n: int | None = None):
        gens = as_mat(gens, rows=n)
        self.n = gens.shape[0]
        self.ring = ring
        if gens.shape[1] > gens.shape[0]:
            gens = image_basis(gens)
        diag, U, Ui, _, _ = _smith(gens, want_u=True, want_v=False)
        self.rank = len(diag)
        self.divisors = [ring.strip(d) for d in diag]
        self.U = U
        cols = Ui[:, : self.rank]
        self.basis = compact(cols.astype(object) * np.array(self.divisors, dtype=object)) \
            if self.rank else zeros(self.n, 0)

    @property
    def is_full(self) -> bool:
        return self.rank == self.n and all(d == 1 for d in self.divisors)

    def _raw(self, v):
        v = as_mat(v, rows=self.n)
        if v.shape[0] != self.n:
            raise ValueError(f"vector length {v.shape[0]} != ambient {self.n}")
        return mul(self.U, v)

    def contains(self, v) -> bool:
        w = self._raw(v)
        if w[self.rank:].any():
            return False
        for i, d in enumerate(self.divisors):
            if d > 1 and (w[i] % d).any():
                return False
        return True

    def coords(self, v) -> np.ndarray:
        """Coordinates of the columns of ``v`` in ``basis``; raises if outside."""
        w = self._raw(v)
        if w[self.rank:].any():
            raise NotInLattice("vector outside the span")
        out = w[: self.rank].copy()
        for i, d in enumerate(self.divisors):
            if d > 1:
                if (out[i] % d).any():
                    raise NotInLattice("vector outside the span")
                out[i] = out[i] // d
        return compact(out)


def lattice_coords_mod(L: "Lattice", v: np.ndarray, N: int) -> np.ndarray:
    """Coordinates of ``v`` (assumed to lie in ``L``) in ``L.basis`` modulo ``N``."""
    D = 1
    for d in L.divisors:
        D = D * d // np.gcd(D, d)
    D = int(D)
    if (N * D) ** 2 >= 2**62:
        return L.coords(v) % N
    w = mod_matmul(L.U[: L.rank], v, N * D)
    for i, d in enumerate(L.divisors):
        if d > 1:
            w[i] = w[i] // d
    return w % N


def preimage(f: np.ndarray, target_gens: np.ndarray, ring: RingSpec = ZZ) -> np.ndarray:
    """Generators of ``{x : f x in span(target_gens)}``."""
    f = as_mat(f)
    if target_gens.shape[1] == 0:
        return kernel(f, ring)
    k = kernel(hstack([f, target_gens], f.shape[0]), ring)
    return k[: f.shape[1]]


# ---------------------------------------------------------------- arithmetic modulo N


def mod_matmul(a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    """``a @ b mod N`` with entries in ``[0, N)``.

    Uses float64 BLAS when every partial sum is exactly representable.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    a = (a % N).astype(np.int64) if a.dtype != object else np.array(a % N, dtype=np.int64)
    b = (b % N).astype(np.int64) if b.dtype != object else np.array(b % N, dtype=np.int64)
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if k * (N - 1) ** 2 < 2**52:
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % N
    step = max(1, (2**62) // max(1, (N - 1) ** 2))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        out = (out + a[:, s:s + step] @ b[s:s + step]) % N
    return out


def _unit_scaler(x: int, g: int, N: int) -> int:
    """A unit ``v`` mod N with ``x * v = g (mod N)``, where ``g = gcd(x, N)``."""
    m = N // g
    v = pow(x // g, -1, m) if m > 1 else 1
    while np.gcd(v, N) != 1:
        v += m
    return v % N


def smith_mod(a: np.ndarray, N: int):
    """Smith form of ``[a | N·I]`` computed over Z/N.

    Returns ``(diag, U, Ui)``: ``U`` and ``Ui`` are mutually inverse modulo
    ``N``, and ``U @ a`` has, after column operations, row ``i`` equal to
    ``diag[i]·e_i`` modulo ``N``.  Every entry of ``diag`` divides ``N``, the
    list is a divisibility chain, and rows that vanish get the entry ``N``.
    """
    A = (np.asarray(a) % N).astype(np.int64)
    m, n = A.shape
    U = np.eye(m, dtype=np.int64)
    Ui = np.eye(m, dtype=np.int64)
    diag = []
    t = 0

    def find_pivot():
        rows = np.nonzero(A[t:, t:].any(axis=1))[0]
        if len(rows) == 0:
            return None
        r = t + int(rows[0])
        row = A[r, t:]
        gs = np.gcd(row, N)
        gs[row == 0] = N
        c = int(np.argmin(gs))
        if gs[c] == 1:
            return r, t + c, 1
        block = A[t:, t:]
        gs = np.gcd(block, N)
        gs[block == 0] = N
        i, j = divmod(int(np.argmin(gs)), block.shape[1])
        return t + i, t + j, int(gs[i, j])

    while t < min(m, n):
        piv = find_pivot()
        if piv is None:
            break
        i, j, g = piv
        if i != t:
            A[[t, i]] = A[[i, t]]
            U[[t, i]] = U[[i, t]]
            Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
        v = _unit_scaler(int(A[t, t]), g, N)
        if v != 1:
            A[:, t] = (A[:, t] * v) % N
        q = A[t + 1:, t] // g
        rows = np.nonzero(q)[0]
        if len(rows):
            qr = q[rows]
            rr = t + 1 + rows
            A[rr] = (A[rr] - qr[:, None] * A[t]) % N
            U[rr] = (U[rr] - qr[:, None] * U[t]) % N
            Ui[:, t] = (Ui[:, t] + Ui[:, rr] @ qr) % N
        if A[t + 1:, t].any():
            continue
        # column t is now g·e_t, so column operations only touch row t
        A[t, t + 1:] %= g
        if A[t, t + 1:].any():
            continue
        rest = A[t + 1:, t + 1:]
        bad = np.nonzero((rest % g).any(axis=1))[0] if (g > 1 and rest.size) else ()
        if len(bad):
            r = t + 1 + int(bad[0])
            A[t] = (A[t] + A[r]) % N
            U[t] = (U[t] + U[r]) % N
            Ui[:, r] = (Ui[:, r] - Ui[:, t]) % N
            continue
        diag.append(g)
        t += 1
    diag += [N] * (m - len(diag))
    return diag, U, Ui


def smith_mod_wide(a: np.ndarray, N: int, seed: int = 0, tries: int = 4):
    """``smith_mod`` for matrices with many more columns than rows.

    The columns are first replaced by a few random combinations; the result
    is accepted only after checking that every original column lies in
    their span modulo ``N``.
    """
    m, n = a.shape
    if n > 2 * m + 16:
        rng = np.random.default_rng(seed)
        for _ in range(tries):
            c = mod_matmul(a, rng.integers(0, N, size=(n, m + 16)), N)
            diag, U, Ui = smith_mod(c, N)
            w = mod_matmul(U, a, N)
            if all(not (w[i] % d).any() for i, d in enumerate(diag)):
                return diag, U, Ui
    return smith_mod(a, N)


# ---------------------------------------------------------------- local elementary divisors


def _unit_echelon(X, p: int, q: int, block: int = 64):
    """Reduced echelon rows mod ``q = p^k`` using unit pivots only.

    ``X`` is a scipy sparse matrix or a dense array.  Returns ``(E, piv)``
    with ``E[:, piv] = I`` and every row of ``X`` congruent mod ``p`` to a
    combination of rows of ``E``.
    """
    import scipy.sparse as sp

    R, c = X.shape
    E = np.zeros((0, c), dtype=np.int64)
    piv: list[int] = []
    for s in range(0, R, block):
        B = X[s:s + block]
        Y = (B.toarray() if sp.issparse(B) else np.asarray(B)).astype(np.int64) % q
        if piv:
            Y = (Y - np.asarray(B[:, piv] @ E)) % q
        new = []
        for i in range(Y.shape[0]):
            units = np.nonzero(Y[i] % p)[0]
            if len(units) == 0:
                continue
            j = int(units[0])
            Y[i] = (Y[i] * pow(int(Y[i, j]), -1, q)) % q
            # rows already found to vanish mod p are dropped, so only
            # earlier pivot rows and the unprocessed tail need clearing
            live = np.array([a for a, _ in new] + list(range(i + 1, Y.shape[0])), dtype=np.int64)
            if len(live):
                rows = live[Y[live, j] != 0]
                if len(rows):
                    Y[rows] = (Y[rows] - Y[rows, j, None] * Y[i]) % q
            new.append((i, j))
        if not new:
            continue
        idx = [i for i, _ in new]
        cols = [j for _, j in new]
        Ynew = Y[idx]
        if piv:
            E = (E - mod_matmul(E[:, cols], Ynew, q)) % q
        E = np.vstack([E, Ynew])
        piv += cols
    return E, piv


def local_divisor_counts(X, p: int, k: int, block: int = 64) -> list[int]:
    """Numbers of elementary divisors of ``X`` with ``p``-adic valuation
    exactly ``0, 1, .., k-1``.  Divisors of valuation at least ``k``
    (including zeros) are not counted.
    """
    import scipy.sparse as sp

    counts = []
    while k > 0 and X.shape[0] and X.shape[1]:
        q = p**k
        E, piv = _unit_echelon(X, p, q, block)
        counts.append(len(piv))
        rest = np.setdiff1d(np.arange(X.shape[1]), piv)
        if k == 1 or len(rest) == 0:
            break
        resid = []
        for s in range(0, X.shape[0], block):
            B = X[s:s + block]
            Y = (B.toarray() if sp.issparse(B) else np.asarray(B)).astype(np.int64) % q
            if piv:
                Y = (Y - np.asarray(B[:, piv] @ E)) % q
            if (Y % p).any():
                raise ArithmeticError("residual rows are not divisible by p")
            Y = Y[:, rest]
            Y = Y[Y.any(axis=1)]
            if len(Y):
                resid.append(Y // p)
        if not resid:
            break
        X = np.vstack(resid)
        k -= 1
    counts += [0] * (len(counts) == 0)
    return counts
