"""
Betti numbers and mixed Hodge polynomials of M_{1,n}(N)
=======================================================

The forgetful map to the modular curve gives a spectral sequence with two
columns.  Column 0 holds the SL_2-invariants of B_n, and column 1 pairs the
V_k content of B_n with H^1(Gamma(N), V_k).
"""

from ellcoh.assembler import assemble_e2, betti, mhdg
from ellcoh.gamma import prelim_route

# A single marked point: M_{1,1}(N) is a punctured modular curve.
for N in (1, 3, 4, 5):
    print(f"M_11({N}):", betti(1, N), mhdg(1, N).mhdg)

# Both columns of the E_2 page for n = 3 at level 5, by degree.
page = assemble_e2(3, 5)
print("column 0:", page.column0_dims())
print("column 1:", page.column1_dims())

# At level one the answer can also be computed through the amalgam
# presentation of SL_2(Z); the two routes agree.
for n in range(1, 5):
    print(f"n = {n}:", betti(n, 1), prelim_route(n))

# The equivariant version records how S_n permutes the marked points.
rec = mhdg(3, 3, equivariant=True)
print("Betti numbers of M_13(3):", rec.betti)
for label, poly in rec.equivariant.items():
    print(f"  irreducible {label}:", poly)
