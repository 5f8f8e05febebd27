"""Group tables, subgroups, quotients, abelianization and enumeration."""

import numpy as np
import pytest

from grouphomology import groups as gr


def test_constructors_orders():
    assert gr.cyclic(7).order == 7
    assert gr.symmetric_group(4).order == 24
    assert gr.dihedral(5).order == 10
    assert gr.abelian_group([2, 6]).order == 12
    assert gr.direct_product(gr.cyclic(2), gr.cyclic(3)).order == 6


def test_axioms_checked():
    with pytest.raises(gr.GroupAxiomError):
        gr.group_from_table([[0, 1], [1, 1]])


def test_abelian_flags_and_orders():
    S3 = gr.symmetric_group(3)
    assert not S3.is_abelian
    assert sorted(S3.element_orders) == [1, 2, 2, 2, 3, 3]
    assert gr.exponent(gr.abelian_group([2, 4])) == 4
    assert gr.is_l_torsion(gr.cyclic(8), 2) and not gr.is_l_torsion(gr.cyclic(6), 2)


def test_subgroups_and_normality():
    S3 = gr.symmetric_group(3)
    subs = gr.all_subgroups(S3)
    assert sorted(len(H.elements) for H in subs) == [1, 2, 2, 2, 3, 6]
    assert sum(H.is_normal() for H in subs) == 3
    assert len(gr.all_subgroups(gr.abelian_group([2, 2]))) == 5


def test_quotient():
    A = gr.cyclic(12)
    B = gr.subgroup_generated(A, [4])
    Q, proj = gr.quotient(A, B)
    assert Q.order == 4 and Q.is_abelian
    assert proj.is_surjective
    assert sorted(proj.kernel()) == sorted(B.elements)
    with pytest.raises(gr.NotNormal):
        S3 = gr.symmetric_group(3)
        gr.quotient(S3, next(H for H in gr.all_subgroups(S3) if len(H.elements) == 2))


@pytest.mark.parametrize("G, factors", [
    (gr.symmetric_group(3), [2]),
    (gr.symmetric_group(4), [2]),
    (gr.dihedral(4), [2, 2]),
    (gr.abelian_group([4, 6]), [2, 12]),
])
def test_abelianization_frozen(G, factors):
    module, proj = gr.abelianization(G)
    assert module.moduli == factors
    assert proj.codomain.order == int(np.prod(factors))


def test_abelian_decomposition_recovers_factors():
    G = gr.abelian_group([2, 6])
    dec = gr.abelian_decomposition(G)
    assert sorted(o for _, o in dec) == [2, 6]


def test_enumerate_abelian_groups_counts():
    # number of abelian groups of order n, n = 1..16
    want = [1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]
    got = [0] * 16
    for G, _ in gr.enumerate_abelian_groups(16):
        got[G.order - 1] += 1
    assert got == want


def test_homs():
    G = gr.symmetric_group(3)
    for g in range(G.order):
        c = gr.conjugation(G, g)
        assert c.is_injective
    ident = gr.GroupHom.identity(G)
    assert ident.is_identity
    c = gr.conjugation(G, 1)
    assert c.compose(gr.conjugation(G, G.inv(1))).is_identity
