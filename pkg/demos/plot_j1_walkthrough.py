"""
The smallest nontrivial oscillator, step by step
================================================

For 2j = 2 the su(2) oscillator lives in three dimensions and every
intermediate object is small enough to print.  The pipeline is: Weyl
operators, their diagonal elements (the moment matrix), then two inverse
Vandermonde matrices.
"""

from discrete_wigner import moment_matrix, su2, weyl_operator, wigner_matrix
from discrete_wigner.linalg import vandermonde_inverse


def show(title, M):
    print(title)
    for row in M:
        print("   ", "  ".join(f"{str(x):>14}" for x in row))
    print()


model = su2(2)

###############################################################################
# Weyl operators
# --------------
# The stored operators are rational.  The physical ones differ by a diagonal
# similarity, which ``to_physical`` removes; the result can involve sqrt(2).

for a, b in [(1, 0), (1, 1), (2, 1)]:
    show(f"G_{a}{b}", model.to_physical(weyl_operator(model, (a, b))))

###############################################################################
# Moment matrices and their inversion
# -----------------------------------

for n in (0, 1):
    show(f"Z({n})", moment_matrix(model, n).entries)

show("inverse Vandermonde on (-1, 0, 1)", vandermonde_inverse(model.position_spectrum))

for n in (0, 1):
    W = wigner_matrix(model, n)
    show(f"W({n})", W.entries)
    print("   column sums", [str(x) for x in W.column_sums()])
    print("   total      ", W.total(), "\n")
