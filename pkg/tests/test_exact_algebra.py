"""Smith normal form, lattices, presented modules, Tor and Ext."""

from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from grouphomology.linalg import (
    BudgetExceeded,
    Lattice,
    check_budget,
    kernel,
    local_divisor_counts,
    matrix_rank,
    mul,
    smith_mod,
    smith_mod_wide,
    snf,
)
from grouphomology.modules import (
    ModuleMap,
    PresentedModule,
    Subquotient,
    direct_sum,
    ext,
    hom,
    is_exact,
    is_isomorphism,
    tensor,
    tor,
)
from grouphomology.ring import ZZ, RingSpec, parse_ring, prime_factors

small_mats = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: arrays(np.int64, (m, n), elements=st.integers(-20, 20))))


def _divisors_by_minors(a):
    """Elementary divisors as ratios of gcds of k x k minors (tiny matrices only)."""
    from itertools import combinations

    import sympy as sp

    m, n = a.shape
    M = sp.Matrix(a.tolist())
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# ---- rings


def test_ring_radical_and_parse():
    assert RingSpec(12) == RingSpec(6)
    assert parse_ring("Z[1/6]") == RingSpec(6)
    assert parse_ring("Z") == ZZ
    assert prime_factors(360) == (2, 3, 5)
    assert RingSpec(6).strip(360) == 5
    assert RingSpec(2).inverts(8) and not RingSpec(2).inverts(6)


def test_ring_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_ring("Q")


# ---- Smith normal form


@given(small_mats)
def test_snf_decomposition(a):
    S = snf(a)
    assert (mul(mul(S.U, a), S.V) == S.D).all()
    d = list(S.diagonal)
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert S.rank == matrix_rank(a)


@given(small_mats.filter(lambda a: min(a.shape) <= 3))
def test_snf_matches_minors(a):
    assert list(snf(a).diagonal) == _divisors_by_minors(a)


def test_snf_frozen():
    assert snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).diagonal == (2, 6, 12)
    assert snf([[6]], RingSpec(2)).diagonal == (3,)


def test_snf_large_entries_fall_back_to_objects():
    big = 2**61
    a = np.array([[big, 1], [1, big]], dtype=object)
    S = snf(a)
    assert S.diagonal == (1, big * big - 1)


@given(small_mats)
def test_kernel_is_saturated_basis(a):
    K = kernel(a)
    assert not mul(a, K).any()
    assert K.shape[1] == a.shape[1] - matrix_rank(a)
    if K.shape[1]:
        assert all(d == 1 for d in snf(K).diagonal)


@given(small_mats, st.integers(2, 30))
def test_smith_mod_agrees_with_exact(a, N):
    diag, U, Ui = smith_mod(a, N)
    exact = [gcd(d, N) for d in snf(a).diagonal]
    exact += [N] * (a.shape[0] - len(exact))
    assert sorted(diag) == sorted(exact)
    assert ((U @ Ui) % N == np.eye(a.shape[0], dtype=np.int64) % N).all()


def test_smith_mod_wide_compresses():
    rng = np.random.default_rng(3)
    a = rng.integers(-3, 4, size=(6, 200)) * 4
    diag, _, _ = smith_mod_wide(a, 24)
    exact = [gcd(d, 24) for d in snf(a).diagonal] + [24] * (6 - matrix_rank(a))
    assert sorted(diag) == sorted(exact)


@given(small_mats, st.sampled_from([2, 3, 5]), st.integers(1, 3))
def test_local_divisor_counts(a, p, k):
    counts = local_divisor_counts(a, p, k)
    vals = []
    for d in snf(a).diagonal:
        v = 0
        while d % p == 0:
            d //= p
            v += 1
        vals.append(v)
    want = [sum(1 for v in vals if v == j) for j in range(k)]
    assert counts + [0] * (k - len(counts)) == want


def test_budget_guard():
    check_budget(10, 10, 100)
    with pytest.raises(BudgetExceeded):
        check_budget(10, 11, 100)


# ---- lattices


def test_lattice_membership_and_coords():
    L = Lattice([[2, 0], [0, 3]])
    assert L.contains([[4], [9]])
    assert not L.contains([[1], [0]])
    v = np.array([[6], [-3]])
    assert (mul(L.basis, L.coords(v)) == v).all()


def test_lattice_saturates_inverted_primes():
    L = Lattice([[2, 0], [0, 3]], RingSpec(2))
    assert L.contains([[1], [0]])
    assert not L.contains([[0], [1]])


# ---- presented modules


def test_presented_module_normal_form():
    M = PresentedModule(ZZ, [[2, 0], [0, 3], [0, 0]])
    assert M.iso_type() == ((6,), 1)
    assert M.describe() == "Z/6 + Z"
    assert PresentedModule(RingSpec(2), [[12]]).iso_type() == ((3,), 0)


def test_subquotient_exponent_path_matches_exact():
    rng = np.random.default_rng(0)
    for _ in range(20):
        rel = rng.integers(-3, 4, size=(4, 3)) * 6
        sub = np.hstack([rng.integers(-3, 4, size=(4, 2)), rel])
        a = Subquotient(sub, rel, ZZ, 4)
        b = Subquotient(sub, rel, ZZ, 4, exponent=36)
        if a.module.free_rank == 0:
            assert a.module.iso_type() == b.module.iso_type()


def test_tensor_hom_frozen():
    Z2, Z3, Z4 = (PresentedModule.cyclic(ZZ, m) for m in (2, 3, 4))
    assert tensor(Z2, Z4).iso_type() == ((2,), 0)
    assert tensor(Z2, Z3).iso_type() == ((), 0)
    assert hom(Z4, Z2).iso_type() == ((2,), 0)
    assert hom(PresentedModule.free(ZZ, 1), Z4).iso_type() == ((4,), 0)
    assert direct_sum(Z2, Z3).iso_type() == ((6,), 0)


def test_tor_ext_frozen():
    Z = PresentedModule.free(ZZ, 1)
    Z2, Z4, Z6 = (PresentedModule.cyclic(ZZ, m) for m in (2, 4, 6))
    assert tor(1, Z2, Z4).iso_type() == ((2,), 0)
    assert tor(1, Z2, Z).iso_type() == ((), 0)
    assert tor(1, Z4, Z6).iso_type() == ((2,), 0)
    assert ext(1, Z2, Z).iso_type() == ((2,), 0)
    assert ext(1, Z4, Z6).iso_type() == ((2,), 0)
    assert ext(1, Z, Z2).iso_type() == ((), 0)
    R = RingSpec(2)
    assert tor(1, PresentedModule.cyclic(R, 2), PresentedModule.cyclic(R, 2)).is_zero


def test_module_maps():
    Z4 = PresentedModule.cyclic(ZZ, 4)
    Z2 = PresentedModule.cyclic(ZZ, 2)
    double = ModuleMap(Z2, Z4, [[2]])
    proj = ModuleMap(Z4, Z2, [[1]])
    assert not is_isomorphism(double)
    assert is_exact(double, proj)
    assert proj.compose(double).is_zero
    assert is_isomorphism(ModuleMap(Z4, Z4, [[3]]))
