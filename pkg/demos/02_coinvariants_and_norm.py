# %% [markdown]
# # alpha and the norm
#
# ``alpha: M^G -> M_G`` and the norm ``M_G -> M^G`` compose to
# multiplication by |G| both ways, so alpha is an isomorphism when |G| is
# a unit.  Over Z it usually is not.

# %%
from grouphomology import groups as gr
from grouphomology.gmodules import alpha, norm, random_gmodule
from grouphomology.modules import ModuleMap, is_isomorphism
from grouphomology.ring import ZZ, RingSpec

G = gr.abelian_group([2, 4])
for R in (ZZ, RingSpec(2)):
    for seed in range(3):
        M = random_gmodule(G, R, seed)
        a, nb = alpha(M), norm(M)
        both = (nb.compose(a).equals(ModuleMap.scalar(G.order, a.domain))
                and a.compose(nb).equals(ModuleMap.scalar(G.order, a.codomain)))
        print(f"{str(R):8} seed {seed}: M^G = {a.domain.describe():10} M_G = {a.codomain.describe():10}"
              f" alpha iso: {is_isomorphism(a)!s:5}  composites = |G|: {both}")
