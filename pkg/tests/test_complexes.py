"""Chain complexes, bar/cobar/periodic/product resolutions."""

import numpy as np
import pytest

from grouphomology import groups as gr
from grouphomology.complexes import (
    ChainComplex,
    ComplexError,
    bar_complex,
    bar_differential_sparse,
    bar_homology_type,
    cobar_complex,
    homology,
    periodic_complex,
    product_complex,
)
from grouphomology.gmodules import negation_gmodule, random_gmodule, trivial_gmodule
from grouphomology.linalg import BudgetExceeded, mul
from grouphomology.ring import ZZ, RingSpec


def cyclic_homology(m, n, negation=False):
    """Closed form from the 2-periodic resolution (t - 1, N)."""
    if n == 0:
        return [2] if negation else [0]
    if negation:
        return [2] if n % 2 == 0 else []
    return [m] if n % 2 == 1 and m > 1 else []


def test_dd_zero_is_enforced():
    with pytest.raises(ComplexError):
        ChainComplex(ZZ, [1, 1, 1], {1: [[1]], 2: [[1]]},
                     [np.zeros((1, 0), dtype=np.int64)] * 3)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_bar_dd_zero_and_homology(m):
    M = trivial_gmodule(gr.cyclic(m))
    C = bar_complex(M, 4)
    for k in (2, 3, 4):
        assert not mul(C.d[k - 1], C.d[k]).any()
    for n in range(4):
        assert homology(C, n).module.moduli == cyclic_homology(m, n)


@pytest.mark.parametrize("m", [2, 4, 6])
def test_negation_bar_periodic_product(m):
    M = negation_gmodule(m)
    B, P, X = bar_complex(M, 3), periodic_complex(M, 3), product_complex(M, 3)
    for n in range(3):
        want = cyclic_homology(m, n, negation=True)
        assert homology(B, n).module.moduli == want
        assert homology(P, n).module.moduli == want
        assert homology(X, n).module.moduli == want


def test_klein_four_frozen():
    M = trivial_gmodule(gr.abelian_group([2, 2]))
    X, C = product_complex(M, 4), cobar_complex(M, 4)
    assert [homology(X, n).module.moduli for n in range(4)] == [[0], [2, 2], [2], [2, 2, 2]]
    assert [homology(C, n).module.moduli for n in range(4)] == [[0], [], [2, 2], [2]]


def test_s3_frozen():
    M = trivial_gmodule(gr.symmetric_group(3))
    B, C = bar_complex(M, 4), cobar_complex(M, 4)
    assert [homology(B, n, exponent=6 if n else None).module.moduli for n in range(4)] == \
        [[0], [2], [], [6]]
    assert [homology(C, n).module.moduli for n in range(4)] == [[0], [], [2], []]


def test_budget_refuses_large_bar():
    with pytest.raises(BudgetExceeded):
        bar_complex(trivial_gmodule(gr.symmetric_group(4)), 4)


@pytest.mark.parametrize("G", [gr.symmetric_group(3), gr.dihedral(4), gr.abelian_group([2, 4])])
@pytest.mark.parametrize("n", [1, 2])
def test_bar_homology_type_matches_exact(G, n):
    for R in (ZZ, RingSpec(2)):
        M = trivial_gmodule(G, R)
        exact = homology(bar_complex(M, n + 1, budget=10**8), n).module
        factors, free = bar_homology_type(M, n)
        assert (list(factors), free) == (list(exact.invariant_factors), exact.free_rank)


def test_sparse_differential_matches_dense():
    M = negation_gmodule(4)
    C = bar_complex(M, 3)
    for k in (1, 2, 3):
        assert (bar_differential_sparse(M, k).toarray() == C.d[k]).all()


@pytest.mark.parametrize("seed", range(4))
def test_product_agrees_with_bar_on_random_modules(seed):
    G = gr.abelian_group([2, 2])
    M = random_gmodule(G, ZZ, seed)
    B, X = bar_complex(M, 3), product_complex(M, 3)
    for n in range(3):
        assert homology(B, n).module.iso_type() == homology(X, n).module.iso_type()
