"""SL_n and GL_n over Z/m, roots of unity, and the finite-level checks."""

import numpy as np
import pytest

from grouphomology.groups import symmetric_group
from grouphomology.linear_groups import (
    GL,
    SL,
    FiniteRing,
    GroupTooLarge,
    build_group,
    classical_order,
    delta_section,
    gamma,
    inner_witness,
    mu,
    symbolic_power_identity,
    unit_conjugation,
    verify_delta_split,
    verify_gamma_exact,
    verify_unit_power_trivial,
)


@pytest.mark.parametrize("n, m, kind, order", [
    (2, 2, SL, 6), (2, 3, SL, 24), (2, 4, SL, 48), (2, 5, SL, 120), (2, 8, SL, 384),
    (2, 3, GL, 48), (2, 5, GL, 480), (3, 2, SL, 168), (1, 7, GL, 6),
])
def test_orders(n, m, kind, order):
    # |SL_2(Z/p^k)| = p^(3k)(1 - p^-2); |GL_2(F_q)| = (q^2-1)(q^2-q)
    assert build_group(n, m, kind).order == order
    assert classical_order(n, m, kind) == order


def test_group_too_large():
    with pytest.raises(GroupTooLarge):
        build_group(3, 3, SL)


def test_sl2_2_is_s3():
    G = build_group(2, 2).table
    assert G.order == 6 and not G.is_abelian
    assert sorted(G.element_orders) == sorted(symmetric_group(3).element_orders)


def test_units_and_roots():
    R = FiniteRing(8)
    assert R.units == (1, 3, 5, 7)
    assert mu(2, R) == (1, 3, 5, 7)
    assert mu(2, FiniteRing(5)) == (1, 4)
    assert mu(2, FiniteRing(2)) == (1,)
    assert mu(3, FiniteRing(7)) == (1, 2, 4)
    assert R.inv(3) == 3


def test_unit_conjugation_is_automorphism():
    G = build_group(2, 5)
    phi = unit_conjugation(2, G)
    assert phi.is_injective and phi.is_surjective
    D = inner_witness(2, 2, FiniteRing(5))
    assert int(round(np.linalg.det(D))) % 5 == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symbolic_identity(n):
    assert symbolic_power_identity(n)


@pytest.mark.parametrize("n, m, mu_size, ker, im, coker", [
    (2, 2, 1, 1, 6, 1), (2, 3, 2, 2, 24, 2), (2, 5, 2, 2, 240, 2),
])
def test_gamma_exact(n, m, mu_size, ker, im, coker):
    # |im| = |R*||SL_n|/|mu_n|, |coker| = |R*/R*^n|
    rep = verify_gamma_exact(n, m)
    assert rep.ok
    assert rep.values == {"mu": mu_size, "ker": ker, "im": im, "coker": coker}


def test_gamma_is_homomorphism():
    g, P, Sl, Gl = gamma(2, 3)
    assert g.domain is P and len(g.kernel()) == 2


@pytest.mark.parametrize("n, m", [(1, 5), (1, 7), (2, 2)])
def test_delta_split(n, m):
    assert verify_delta_split(n, m).ok


def test_delta_split_reports_budget():
    assert verify_delta_split(2, 3).status == "skipped_budget"


def test_delta_section_lands_in_sl():
    Gl = build_group(1, 5, GL)
    delta, S1 = delta_section(Gl)
    assert S1.order == 120 and delta.is_injective


@pytest.mark.parametrize("m, a", [(3, 2), (8, 3)])
def test_unit_power_trivial(m, a):
    rep = verify_unit_power_trivial(a, build_group(2, m), 1)
    assert rep.ok, rep.checks


def test_unit_power_needs_sl():
    assert verify_unit_power_trivial(2, build_group(2, 3, GL), 1).status == "precondition_failure"
