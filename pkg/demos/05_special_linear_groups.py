# %% [markdown]
# # SL_n and GL_n over Z/m
#
# The finite-level statements: exactness of
# 1 -> mu_n -> R* x SL_n -> GL_n -> R*/R*^n -> 1, the section
# GL_n -> SL_{n+1}, and the triviality of the a^n-conjugation on homology.

# %%
from grouphomology.group_homology import comparison_with_abelianization
from grouphomology.linear_groups import (
    GL,
    build_group,
    verify_delta_split,
    verify_gamma_exact,
    verify_unit_power_trivial,
)

for n, m in ((2, 2), (2, 3), (2, 5)):
    rep = verify_gamma_exact(n, m)
    print(f"gamma n={n} m={m}: {rep.status}  {rep.values}")

# %%
for n, m in ((1, 5), (2, 2), (2, 3)):
    print(f"delta n={n} m={m}: {verify_delta_split(n, m).status}")

# %%
for m, a in ((3, 2), (8, 3)):
    rep = verify_unit_power_trivial(a, build_group(2, m), 1)
    print(f"SL_2(Z/{m}), a = {a}: {rep.status}")

# %% H_1 against the abelianization
for name, G in (("SL_2(Z/3)", build_group(2, 3).table), ("GL_2(Z/3)", build_group(2, 3, GL).table)):
    f = comparison_with_abelianization(G)
    print(name, "H_1 =", f.domain.describe())
