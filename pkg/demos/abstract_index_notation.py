"""Abstract-index manipulation: ordered indices, contraction, derivatives.

Tensors here are opaque symbols; everything happens through their index
patterns.  Run with:  python3 demos/abstract_index_notation.py
"""

from tensoralg import (IndexExpr, TensorContext, anti_group, canform,
                       contract, covdiff, expand_christoffels, extdiff,
                       iobj, liediff, wedge)

ctx = TensorContext()

# Lowering an index with the metric.
e = IndexExpr.of(iobj("g", ["a", "b"]), iobj("T", [], ["b", "c"]))
print("g_ab T^bc            ->", contract(ctx, e))

# The historical two-list notation loses slot positions: lowering b and
# raising it again moves the index to the front ("d a" instead of "a d").
legacy = IndexExpr.of(iobj("g", [], ["d", "c"]), iobj("g", ["b", "c"]),
                      iobj("T", [], ["a", "b"]))
print("legacy round trip    ->", contract(ctx, legacy))

# The ordered notation (minus marks contravariant entries) keeps the slot.
ordered = IndexExpr.of(iobj("g", ["-d", "-c"]), iobj("g", ["b", "c"]),
                       iobj("T", ["a", "-b"]))
print("ordered round trip   ->", contract(ctx, ordered))

# One symmetry declaration covers every variance mixture in ordered form.
mixed = IndexExpr.of(iobj("g", ["-b", "a"])) - IndexExpr.of(iobj("g", ["a", "-b"]))
print("g^b_a - g_a^b        ->", canform(ctx, mixed))

# Covariant derivatives expand valence by valence.
print("covdiff X^j          ->", covdiff(ctx, IndexExpr.of(iobj("X", [], ["j"])), "k"))

# The covariant derivative of the metric reduces to zero once the
# Christoffel symbols are expanded and contracted.
dg = covdiff(ctx, IndexExpr.of(iobj("g", ["i", "j"])), "k")
print("covdiff g_ij reduced ->", contract(ctx, expand_christoffels(ctx, dg)))

# With torsion switched on, the second derivatives of a scalar no longer
# commute; the antisymmetric part is exactly the torsion term.
tctx = TensorContext(torsion=True)
tctx.decsym("tau", 2, 1, [anti_group(1, 2)])
f = IndexExpr.of(iobj("f"))
commutator = covdiff(tctx, covdiff(tctx, f, "i"), "j") \
    - covdiff(tctx, covdiff(tctx, f, "j"), "i")
torsion_term = IndexExpr.of(iobj("tau", ["i", "j"], ["k"]),
                            iobj("f", (), (), "k"))
print("f_;ij - f_;ji + tau  ->", canform(tctx, commutator + torsion_term))

# Lie derivatives need no metric at all.
ctx.declare_vector("V")
print("lie_V X^i            ->",
      liediff(ctx, IndexExpr.of(iobj("X", [], ["i"])), "V"))

# Exterior calculus under the two wedge conventions.
a = IndexExpr.of(iobj("a", ["i"]))
b = IndexExpr.of(iobj("b", ["j"]))
print("a^b (tensorial)      ->", wedge(TensorContext(dim=4), a, b))
print("a^b (geometric)      ->",
      wedge(TensorContext(dim=4, geometric_wedge=True), a, b))
print("da (tensorial)       ->", extdiff(TensorContext(dim=4), a, "k"))
