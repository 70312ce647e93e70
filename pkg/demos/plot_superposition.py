"""
Superpositions and interference terms
=====================================

A superposition's Wigner function is a bilinear combination of cross-Wigner
matrices.  The exact backend keeps square roots symbolic, so
(|0> + |1>)/sqrt(2) comes out with entries like 1/16 - 1/24*sqrt(2).
"""

from fractions import Fraction

from discrete_wigner import Surd, cross_wigner, su2, superposition_wigner, wigner_matrix

model = su2(2)
r = Surd.sqrt(Fraction(1, 2))

W = superposition_wigner(model, [r, r, 0])
for row in W.entries:
    print("  ".join(f"{str(x):>18}" for x in row))
print("total:", W.total())

###############################################################################
# The interference term W(0,1) + W(1,0) sums to zero over phase space but
# shifts weight between columns: that is where the sqrt(2) comes from.

C = cross_wigner(model, 0, 1)
print("sum of W(0,1):", C.total())
print("column sums of W(0,1):", [str(x) for x in C.column_sums()])

half = [(w0 + w1) / 2 for w0, w1 in zip(wigner_matrix(model, 0).entries.ravel(),
                                          wigner_matrix(model, 1).entries.ravel())]
interference = [Surd.coerce(w) - h for w, h in zip(W.entries.ravel(), half)]
print("interference part:", [str(x) for x in interference])
