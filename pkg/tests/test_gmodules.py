"""G-modules, (co)invariants, the norm map and Tor/Ext comparisons."""

import numpy as np
import pytest

from grouphomology import groups as gr
from grouphomology.gmodules import (
    ActionError,
    EquivarianceError,
    GModule,
    GModuleMap,
    alpha,
    coinvariants,
    ext_invariants_comparison,
    invariants,
    negation_gmodule,
    norm,
    random_gmodule,
    restrict,
    tor_coinvariants_comparison,
    trivial_gmodule,
)
from grouphomology.modules import ModuleMap, PresentedModule, is_isomorphism
from grouphomology.ring import ZZ, RingSpec


def test_negation_over_z():
    M = negation_gmodule(2)
    assert coinvariants(M)[0].moduli == [2]
    assert invariants(M)[0].moduli == []


def test_negation_over_z_half():
    M = negation_gmodule(2, RingSpec(2))
    assert coinvariants(M)[0].is_zero
    assert is_isomorphism(alpha(M))


def test_permutation_module_c3():
    G = gr.cyclic(3)
    P = np.roll(np.eye(3, dtype=np.int64), 1, axis=0)
    M = GModule.from_generators(G, PresentedModule.free(ZZ, 3), {1: P})
    assert coinvariants(M)[0].moduli == [0]
    assert invariants(M)[0].moduli == [0]
    # alpha sends (1,1,1) to 3 times the generator of Z
    a = alpha(M)
    assert not is_isomorphism(a)
    assert a.codomain.moduli == [0]


def test_action_validation():
    G = gr.cyclic(3)
    with pytest.raises(ActionError):
        GModule.from_generators(G, PresentedModule.free(ZZ, 1), {1: [[-1]]})
    with pytest.raises(ActionError):
        GModule(G, PresentedModule.free(ZZ, 1), [[[1]], [[2]], [[1]]])


def test_equivariance_checked():
    M = negation_gmodule(2)
    T = trivial_gmodule(gr.cyclic(2))
    with pytest.raises(EquivarianceError):
        GModuleMap(M, T, [[1]])
    GModuleMap(M, T, [[0]])


@pytest.mark.parametrize("seed", range(6))
def test_random_modules_reproducible_and_valid(seed):
    G = gr.abelian_group([2, 2])
    M1 = random_gmodule(G, ZZ, seed)
    M2 = random_gmodule(G, ZZ, seed)
    assert M1.rank == M2.rank <= 3
    assert all((np.asarray(a) == np.asarray(b)).all() for a, b in zip(M1.action, M2.action))
    assert (np.asarray(M1.module.relations) == np.asarray(M2.module.relations)).all()
    GModule(G, M1.module, M1.action)  # full validation passes


@pytest.mark.parametrize("seed", range(5))
def test_norm_alpha_compose_to_order(seed):
    G = gr.symmetric_group(3)
    M = random_gmodule(G, ZZ, seed)
    a, nb = alpha(M), norm(M)
    assert nb.compose(a).equals(ModuleMap.scalar(6, a.domain))
    assert a.compose(nb).equals(ModuleMap.scalar(6, a.codomain))


def test_restrict_is_cached_and_correct():
    G = gr.cyclic(4)
    M = negation_gmodule(4, ZZ, G)
    B = gr.subgroup_generated(G, [2])
    R = restrict(M, B)
    assert R is restrict(M, B)
    assert R.is_trivial()


def test_tor_ext_comparisons_example():
    M = negation_gmodule(2)
    Z2 = PresentedModule.cyclic(ZZ, 2)
    t = tor_coinvariants_comparison(1, Z2, M)
    e = ext_invariants_comparison(1, Z2, M)
    assert (t.domain.moduli, t.codomain.moduli) == ([], [2])
    assert (e.domain.moduli, e.codomain.moduli) == ([], [2])
    assert not is_isomorphism(t) and not is_isomorphism(e)


@pytest.mark.parametrize("seed", range(4))
def test_tor_ext_comparisons_iso_when_order_inverted(seed):
    G = gr.cyclic(3)
    R = RingSpec(3)
    M = random_gmodule(G, R, seed)
    N = PresentedModule.cyclic(R, 4)
    assert is_isomorphism(tor_coinvariants_comparison(1, N, M))
    assert is_isomorphism(ext_invariants_comparison(1, N, M))
