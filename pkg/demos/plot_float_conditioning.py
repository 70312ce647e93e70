"""
How far can double precision go?
================================

Recovering W from moments means inverting Vandermonde matrices on
equispaced nodes, whose condition number grows exponentially with the
dimension.  This script compares the float pipeline to the exact one.
"""

import numpy as np

from discrete_wigner import su2, wigner_matrix

print(" 2j   max|W_float - W_exact|   |sum W - 1|   Vandermonde residual")
for two_j in (4, 8, 12, 16, 20, 24):
    exact = su2(two_j)
    flt = su2(two_j, "float", tol=1.0e-1)
    err = total = resid = 0.0
    for n in range(two_j + 1):
        Wf = wigner_matrix(flt, n)
        err = max(err, float(np.max(np.abs(Wf.entries - wigner_matrix(exact, n).as_float()))))
        total = max(total, abs(Wf.total() - 1))
        resid = Wf.vandermonde_residual
    print(f"{two_j:3d}   {err:22.2e}   {total:11.2e}   {resid:20.2e}")

###############################################################################
# Up to 2j = 16 the float result agrees with the exact one to about 1e-8.
# Beyond that the error grows by several orders of magnitude per step, so
# the exact backend is the default.
