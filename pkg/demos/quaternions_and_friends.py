"""Abstract tensor algebras: quaternions as a Clifford algebra, and more.

Run with:  python3 demos/quaternions_and_friends.py
"""

import itertools

from tensoralg import MVec, atensimp, init_atensor, multiplication_table

# A Clifford algebra with two negative dimensions is the quaternions:
# v1, v2 and v1.v2 behave as the three imaginary units.
q = init_atensor("clifford", 0, 0, 2)
print("aform =", [[int(x) for x in row] for row in q.aform])
print("\nmultiplication table over {1, v1, v2, v1.v2}:")
for row in multiplication_table(q):
    print("  " + "   ".join(f"{str(cell):>7s}" for cell in row))

print("\nv2.v1.v1 simplifies to", atensimp(q, MVec.word((2, 1, 1))))
print("(v1.v2)^2 =", atensimp(q, MVec.word((1, 2, 1, 2))))

# Grassmann algebras square to zero; symmetric algebras just reorder.
grassmann = init_atensor("grassmann")
print("\ngrassmann v1.v1 =", atensimp(grassmann, MVec.word((1, 1))))
symmetric = init_atensor("symmetric")
print("symmetric v2.v1 =", atensimp(symmetric, MVec.word((2, 1))))

# The lie enveloping algebra stores basis-vector indices in its aform; for
# n = 3 the commutators are the angular momentum relations.
lie3 = init_atensor("lie_envelop", 3)
print("\nlie_envelop(3) aform =", [[int(x) for x in row] for row in lie3.aform])
v1, v2 = MVec.vector(1), MVec.vector(2)
print("[v1, v2] =", atensimp(lie3, v1 * v2 - v2 * v1))

# ... and the Jacobi identity holds for every basis triple.
def bracket(x, y):
    return x * y - y * x

holds = all(
    atensimp(lie3, bracket(MVec.vector(u), bracket(MVec.vector(v), MVec.vector(w)))
             + bracket(MVec.vector(v), bracket(MVec.vector(w), MVec.vector(u)))
             + bracket(MVec.vector(w), bracket(MVec.vector(u), MVec.vector(v)))
             ).is_zero
    for u, v, w in itertools.product((1, 2, 3), repeat=3))
print("Jacobi identity holds on all triples:", holds)
