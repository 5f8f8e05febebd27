# %% [markdown]
# # Z/2 acting on Z by -1
#
# Coinvariants and invariants need not commute with Tor and Ext when
# the group order is not a unit.  Here the comparison maps fail over Z and
# become isomorphisms once 2 is inverted.

# %%
from grouphomology.gmodules import (
    coinvariants,
    ext_invariants_comparison,
    invariants,
    negation_gmodule,
    tor_coinvariants_comparison,
)
from grouphomology.modules import PresentedModule, is_isomorphism
from grouphomology.ring import ZZ, RingSpec

for R in (ZZ, RingSpec(2)):
    M = negation_gmodule(2, R)
    N = PresentedModule.cyclic(R, 2)
    t = tor_coinvariants_comparison(1, N, M)
    e = ext_invariants_comparison(1, N, M)
    print(f"over {R}:")
    print("  M_G =", coinvariants(M)[0].describe(), "  M^G =", invariants(M)[0].describe())
    print(f"  Tor_1(Z/2,M)_G -> Tor_1(Z/2,M_G): {t.domain.describe()} -> {t.codomain.describe()}",
          "iso" if is_isomorphism(t) else "not iso")
    print(f"  Ext^1(Z/2,M^G) -> Ext^1(Z/2,M)^G: {e.domain.describe()} -> {e.codomain.describe()}",
          "iso" if is_isomorphism(e) else "not iso")
