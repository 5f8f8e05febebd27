# %% [markdown]
# # Homology from three resolutions
#
# The normalized bar complex works for any finite group.  For cyclic
# groups the 2-periodic resolution is far smaller, and for abelian groups
# the tensor product of periodic resolutions is used.  They agree.

# %%
from grouphomology import groups as gr
from grouphomology.complexes import bar_complex, homology, periodic_complex, product_complex
from grouphomology.gmodules import negation_gmodule, trivial_gmodule
from grouphomology.group_homology import h, hc

M = negation_gmodule(4)
B, P = bar_complex(M, 4), periodic_complex(M, 4)
for n in range(4):
    print(f"Z/4 acting by -1, H_{n}: bar {homology(B, n).module.describe():6} periodic {homology(P, n).module.describe()}")

# %%
K = trivial_gmodule(gr.abelian_group([2, 2]))
X = product_complex(K, 4)
print("Klein four, H_0..H_3:", [homology(X, n).module.describe() for n in range(4)])

# %% non-abelian groups go through the bar complex
for name, G in (("S3", gr.symmetric_group(3)), ("D4", gr.dihedral(4))):
    Z = trivial_gmodule(G)
    print(name, "H_n:", [h(G, Z, n).module.describe() for n in range(4)],
          "H^n:", [hc(G, Z, n).module.describe() for n in range(3)])
