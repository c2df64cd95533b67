"""
Cohomology of configuration spaces of an elliptic curve
=======================================================

We build the forest model of F(E, n), compute its cohomology block by
block, and split it into sl_2 isotypic pieces.
"""

from ellcoh import forest
from ellcoh.assembler import config_space
from ellcoh.cohomology import bn_table, cohomology_table, sl2_multiplicities

# The model has a monomial basis indexed by decorated forests.  Its total
# dimension is 4 * 5 * ... * (n + 3).
for n in range(1, 6):
    print(f"n = {n}: dim A_n = {forest.dimension(n)}")

# The differential sends a diagonal class to (b_i - b_j)(a_i - a_j).
x = forest.delta(3, 1, 2)
print("d(D_12) =", forest.differential(x))

# Cohomology of F(E, n), as a Poincare polynomial in t.
for n in range(1, 6):
    table = cohomology_table(n)
    print(f"H*(F(E,{n})):", table.poincare())

# Each bidegree splits into irreducible sl_2 modules V_k.
mult = sl2_multiplicities(cohomology_table(3))
print("multiplicities of V_k in H*(F(E,3)), keyed by (p, q, k):")
for key, m in mult.mult.items():
    print("   ", key, m)

# Dividing out the class of the curve gives the reduced algebra B_n.
for n in range(1, 6):
    table, _ = bn_table(n, route="explicit")
    print(f"B_{n}:", table.poincare())

# The mixed Hodge polynomial of F(E, 2): types (u, v) in each degree t.
rec = config_space(2)
print("Hodge numbers of F(E,2), keyed by (t, u, v):", rec.mhdg)
