"""
Modular forms and the cohomology of Gamma(N)
============================================

The dimension of H^1(Gamma(N), V_k) can be read off two ways: from the
dimension formulas for modular forms, and from cocycles on a free
presentation of the group.  Here we compare the two.
"""

from ellcoh.gamma import VkAction, amalgam_h1, h1_dim, load_presentation, parabolic_h1_dim
from ellcoh.modular import dims, gamma_data, w_dims

# Invariants of the principal congruence subgroups.
for N in range(2, 8):
    print(gamma_data(N))

# Level one: weight 12 has the discriminant form and one Eisenstein series.
print("dim S_12, dim M_12 at level 1:", dims(12, 1))

# Free presentations ship with the package; level 5 has 11 free generators.
pres = load_presentation(5)
print(f"Gamma(5): {pres.rank} generators, {len(pres.cusp_words)} cusps")

print(" k   h1  W(k,5)  parabolic  2 s_(k+2)")
for k in range(0, 9):
    wd = w_dims(k, 5)
    print(f"{k:2d} {h1_dim(pres, k):4d} {wd.total:6d} {parabolic_h1_dim(pres, k):9d} {wd.w_low:9d}")

# SL_2(Z) itself is an amalgam Z/4 *_{Z/2} Z/6, and H^1 is a quotient of
# fixed spaces.
print("level one via the amalgam:", [amalgam_h1(VkAction.of(k)) for k in range(0, 21, 2)])
print("level one via dimensions: ", [w_dims(k, 1).total for k in range(0, 21, 2)])
