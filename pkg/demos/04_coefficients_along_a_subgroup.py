# %% [markdown]
# # Coinvariants along a subgroup with l-torsion quotient
#
# For A abelian, B <= A with A/B l-torsion and M a Z[1/l]-module, the maps
# M_B -> M_A and M^A -> M^B induce isomorphisms on H_n(A, -) and H^n(A, -).
# The report also checks the intermediate isomorphism on H_n(B, -) and
# that the E^2 page vanishes off the column p = 0.

# %%
from grouphomology import groups as gr
from grouphomology.gmodules import random_gmodule
from grouphomology.group_homology import lhs_e2, verify_theorem_ab
from grouphomology.ring import RingSpec

A = gr.abelian_group([2, 4])
for B in gr.all_subgroups(A):
    Q, _ = gr.quotient(A, B)
    R = RingSpec(gr.exponent(Q))
    M = random_gmodule(A, R, seed=len(B.elements))
    rep = verify_theorem_ab(A, B, M, 1)
    print(f"|B| = {len(B.elements)}  over {str(R):8} {rep.status:5}  H_1: {rep.values['homology']}")

# %% without inverting l the first column survives
from grouphomology.gmodules import trivial_gmodule

A = gr.cyclic(4)
B = gr.subgroup_generated(A, [2])
print("E2_{1,0} over Z:", lhs_e2(A, B, trivial_gmodule(A), 1, 0, "M").module.describe())
print("E2_{1,0} over Z[1/2]:", lhs_e2(A, B, trivial_gmodule(A, RingSpec(2)), 1, 0, "M").module.describe())
